#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bergsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Thrown when an input violates a documented domain (|z| >= 1, n < 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown when operand shapes are inconsistent.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical routine cannot produce a trustworthy result
/// (ill-conditioned Gram matrix, eigensolver failure, rank collapse).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite model of the weighted space M_{n,E}: order n, truncation
/// degree N, fiber dimension dim(E). n = 1 is the Hardy space.
struct SpaceParams {
  int order = 1;      // n >= 1
  int degree = 0;     // truncation degree N >= 0
  int fiber_dim = 1;  // dim E >= 1

  void validate() const {
    if (order < 1) throw DomainError("SpaceParams: order must be >= 1");
    if (degree < 0) throw DomainError("SpaceParams: degree must be >= 0");
    if (fiber_dim < 1) throw DomainError("SpaceParams: fiber_dim must be >= 1");
  }

  /// Rows of an operator matrix on the truncation, degree-major layout:
  /// index(i, p) = i * fiber_dim + p.
  int basis_size() const { return (degree + 1) * fiber_dim; }

  SpaceParams with_fiber(int f) const { return {order, degree, f}; }
};

/// Monomial norm weights w_i = 1 / C(n+i-1, i), built by the iterative
/// ratio w_{i+1} = w_i (i+1)/(n+i) so no factorial ever overflows.
struct MonomialWeights {
  std::vector<double> w;

  static MonomialWeights make(int order, int degree);

  double operator[](int i) const { return w[static_cast<size_t>(i)]; }
  int size() const { return static_cast<int>(w.size()); }
};

/// Taylor coefficients of a fiber-valued function, coeffs[i] = f_hat(i).
struct VectorFunctionCoeffs {
  std::vector<Vector> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  int fiber_dim() const { return coeffs.empty() ? 0 : static_cast<int>(coeffs.front().size()); }
};

}  // namespace bergsim
