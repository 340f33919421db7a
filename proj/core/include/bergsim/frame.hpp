#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bergsim/types.hpp"

namespace bergsim {

struct DiskGrid;

/// One closed-form analytic scalar function on the disk. The atom set is
/// small and closed under differentiation, so values and derivatives are
/// exact everywhere and Taylor coefficients come from explicit recursions.
class Atom {
 public:
  enum class Kind { kPoly, kBlaschke, kPowerOneMinusZ, kScale, kSum, kProduct };

  static Atom poly(std::vector<Complex> coeffs);
  /// (a - z) / (1 - conj(a) z), requires |a| < 1.
  static Atom blaschke(Complex a);
  /// (1 - z)^alpha, principal branch; alpha > -1/2 keeps norms square
  /// integrable near z = 1.
  static Atom power_one_minus_z(double alpha);
  static Atom scale(Complex c, Atom inner);
  static Atom sum(std::vector<Atom> terms);
  static Atom product(std::vector<Atom> factors);

  Kind kind() const { return kind_; }

  Complex eval(Complex z) const;
  Complex deriv(Complex z) const;
  /// Taylor coefficients 0..degree about z = 0.
  std::vector<Complex> taylor(int degree) const;

  // parameter accessors used by serialization
  const std::vector<Complex>& poly_coeffs() const { return coeffs_; }
  Complex blaschke_param() const { return param_; }
  double power_alpha() const { return alpha_; }
  Complex scale_factor() const { return param_; }
  const std::vector<Atom>& children() const { return children_; }

 private:
  Atom() = default;

  Kind kind_ = Kind::kPoly;
  std::vector<Complex> coeffs_;  // poly
  Complex param_{};              // blaschke a, or scale factor
  double alpha_ = 0.0;           // power exponent
  std::vector<Atom> children_;   // scale (1), sum, product
};

/// Analytic matrix-valued function F : D -> L(C^m, E) given entrywise by
/// atoms; rows = dim E, cols = m. ran F(z) presents the bundle fiber at z.
struct Frame {
  int order = 1;  // n of the ambient space
  int rows = 1;   // dim E
  int cols = 1;   // m
  std::vector<Atom> entries;  // row-major rows x cols

  /// Optional analytic left inverse G (cols x rows) with G F = I; used as a
  /// constructive invertibility certificate for the canonical intertwiner.
  std::optional<std::vector<Atom>> left_inverse;

  const Atom& at(int r, int c) const { return entries[static_cast<size_t>(r * cols + c)]; }

  Matrix eval(Complex z) const;
  Matrix deriv(Complex z) const;
  /// Taylor coefficient matrices F_hat(0..degree).
  std::vector<Matrix> taylor(int degree) const;

  Matrix eval_left_inverse(Complex z) const;
  std::vector<Matrix> taylor_left_inverse(int degree) const;
};

struct FrameBounds {
  double c_low = 0.0;   // min over grid of lambda_min(F*F)
  double c_high = 0.0;  // max over grid of lambda_max(F*F)
  double c = 0.0;       // max(c_high, 1/c_low)
  bool rank_deficient = false;
  Complex worst_node{};  // node attaining c_low (reported on deficiency)
};

/// Extremal eigenvalues of F*F over the grid nodes. Nodes with
/// lambda_min below rank_tol are flagged rather than skipped.
FrameBounds frame_bounds(const Frame& f, const DiskGrid& grid, double rank_tol = 1e-12);

/// Parses the frame JSON document. Errors name the offending JSON path.
Frame parse_frame(const std::string& json_text);
std::string frame_to_json(const Frame& f);

Frame identity_frame(int order, int m);

}  // namespace bergsim
