#pragma once

#include "bergsim/frame.hpp"
#include "bergsim/types.hpp"

namespace bergsim {

/// Orthogonal projection onto the frame range at one point together with its
/// z-derivative. Pi = F (F*F)^{-1} F*, and, because Pi is a projection onto an
/// analytic family, dPi/dz = (I - Pi) F' (F*F)^{-1} F*.
struct ProjectionPoint {
  Complex z{};
  Matrix proj;    // Pi, Hermitian idempotent
  Matrix dproj;   // dPi/dz
  double hs_sq = 0.0;  // ||dPi/dz||_HS^2
  double gram_condition = 1.0;
};

/// Builds a ProjectionPoint from pointwise frame data. Gram inversion is by
/// Cholesky with condition monitoring; an ill-conditioned Gram matrix is an
/// error, not a regularization opportunity.
ProjectionPoint projection_from_values(const Matrix& value, const Matrix& deriv,
                                       Complex z, double rank_tol = 1e-12,
                                       double max_condition = 1e12);

ProjectionPoint projection_from_frame(const Frame& f, Complex z);

/// Residuals of the projection identities Pi dPi = 0 and
/// (I - Pi) dPi Pi = dPi. Both vanish for projections onto analytic families.
std::pair<double, double> projection_identity_residuals(const Frame& f, Complex z);

/// Rank-one projection onto the kernel line span{k_{conj(lambda)}} in the
/// truncated space, differentiated through the same frame formula (the kernel
/// coordinates are analytic in lambda). Its HS defect reproduces
/// n / (1 - |lambda|^2)^2.
ProjectionPoint shift_bundle_projection(const SpaceParams& p, Complex lambda,
                                        double tail_tol = 1e-8);

/// ||dPi_2/dz||_HS^2 of the frame bundle. By the tensor split this equals the
/// total bundle defect ||dPi/dz||_HS^2 - mn/(1-|z|^2)^2, and it is a squared
/// norm, hence nonnegative.
double curvature_defect(const Frame& f, Complex z);

/// Assembles Pi = Pi_1 (x) Pi_2 on the truncated tensor basis, differentiates
/// by the product rule, and returns
/// | ||dPi||_HS^2 - m ||dPi_1||_HS^2 - ||dPi_2||_HS^2 |.
double tensor_split_residual(const Frame& f, const SpaceParams& p, Complex lambda,
                             int max_rows = 2048);

/// Independent 5-point finite-difference oracle for the m = 1 case:
/// the normalized Laplacian of log ||F||^2 at z.
double line_bundle_oracle(const Frame& f, Complex z, double h);

}  // namespace bergsim
