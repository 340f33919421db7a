#pragma once

#include <optional>

#include "bergsim/types.hpp"

namespace bergsim {

// Weighted Bergman space M_{n,E} on the truncated orthonormal basis
// e_i = z^i / sqrt(w_i). In that basis the forward shift is the weighted
// shift with weights sqrt((i+1)/(n+i)) and every adjoint is an exact
// conjugate transpose.

/// w_i = 1 / C(n+i-1, i). Valid for i up to ~10^4 without overflow.
double monomial_weight(int order, int i);

/// ||f||^2 = sum_i |f_hat(i)|^2 w_i, fiber norms summed.
double space_norm_sq(const VectorFunctionCoeffs& f, const SpaceParams& p);

/// Taylor coefficients of k_{conj(lambda)}(z) = (1 - lambda z)^{-n},
/// truncated at N. Scalar fiber.
VectorFunctionCoeffs kernel_coeffs(const SpaceParams& p, Complex lambda);

/// Coordinates of the same kernel in the orthonormal basis:
/// v_i = sqrt(C(n+i-1, i)) lambda^i. This is the numerically stable form.
Vector kernel_vector(const SpaceParams& p, Complex lambda);

/// d/dlambda of kernel_vector: coordinates of nz/(1 - lambda z)^{n+1}.
Vector kernel_vector_deriv(const SpaceParams& p, Complex lambda);

/// Coordinates of k_{conj(lambda)} (x) e on the truncated tensor basis
/// (degree-major, fiber-minor).
Vector kernel_tensor_vector(const SpaceParams& p, Complex lambda, const Vector& fiber);

/// ||k_lambda||^2 = (1 - |lambda|^2)^{-n}, closed form.
double kernel_norm_sq(const SpaceParams& p, Complex lambda);

/// Squared norm of the derivative kernel, n(1 + n|lambda|^2)/(1-|lambda|^2)^{n+2}.
double deriv_kernel_norm_sq(const SpaceParams& p, Complex lambda);

/// <deriv kernel, kernel> = n conj(lambda) (1-|lambda|^2)^{-(n+1)}, closed form.
Complex mixed_kernel_inner(const SpaceParams& p, Complex lambda);

/// Inner product sum_i f_i conj(g_i) of orthonormal-basis coordinate vectors.
inline Complex coord_inner(const Vector& f, const Vector& g) { return g.dot(f); }

/// Multiplication by z on the truncation; top degree is dropped.
Matrix forward_shift(const SpaceParams& p);

/// Adjoint of forward_shift. Kernel vectors are approximate eigenvectors:
/// S* k_{conj(lambda)} = lambda k_{conj(lambda)} up to the degree-N tail.
Matrix backward_shift(const SpaceParams& p);

/// Binomial defect sum_{i=0}^{k} (-1)^i C(k,i) T*^i T^i, symmetrized.
Matrix hypercontraction_defect(const Matrix& T, int level);

enum class PsdStatus { kPassed, kFailed, kSolverError };

struct DefectLevelReport {
  int level = 0;
  double min_eigenvalue = 0.0;
  double defect_norm = 0.0;  // largest |eigenvalue| of the defect
  bool psd = false;
};

struct HypercontractionReport {
  PsdStatus status = PsdStatus::kPassed;
  bool passed = false;  // all levels 1..k PSD
  std::vector<DefectLevelReport> levels;
};

/// Tests PSD-ness of the binomial defects at levels 1..k. A level passes
/// when its minimal eigenvalue is >= -max(tol, 1e-10 * ||defect||).
/// Eigensolver breakdown is reported as kSolverError, distinct from kFailed.
HypercontractionReport is_k_hypercontraction(const Matrix& T, int k, double tol);

/// Toeplitz operator with analytic matrix symbol Phi = sum Phi_hat(k) z^k.
/// Block entry (i,j) = Phi_hat(i-j) sqrt(w_i / w_j) for i >= j, else zero.
Matrix toeplitz_analytic(const std::vector<Matrix>& symbol, const SpaceParams& p);

/// Toeplitz operator with the conjugate-analytic symbol built from analytic G:
/// block entry (i,j) = G_hat(j-i) sqrt(w_j / w_i) for j >= i, else zero.
/// Acts on kernels by symbol evaluation:
/// T (k_{conj(lambda)} (x) e) = k_{conj(lambda)} (x) G(lambda) e.
Matrix toeplitz_coanalytic(const std::vector<Matrix>& symbol, const SpaceParams& p);

/// Commutator norm ||S* T_Q - T_Q S*|| restricted to degrees <= N - deg(G).
/// Zero in exact arithmetic on the truncation interior.
double backward_shift_commutator_norm(const std::vector<Matrix>& symbol,
                                      const SpaceParams& p);

namespace detail {
/// sqrt(C(n+i-1, i)) for i = 0..degree, by the same iterative ratio.
RealVector sqrt_binom_coeffs(int order, int degree);
}  // namespace detail

}  // namespace bergsim
