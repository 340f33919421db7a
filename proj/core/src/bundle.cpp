#include "bergsim/bundle.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "bergsim/space.hpp"

namespace bergsim {

ProjectionPoint projection_from_values(const Matrix& value, const Matrix& deriv,
                                       Complex z, double rank_tol,
                                       double max_condition) {
  if (value.rows() != deriv.rows() || value.cols() != deriv.cols()) {
    throw DimensionError("projection_from_values: value/derivative shape mismatch");
  }
  const Matrix gram = value.adjoint() * value;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("projection_from_values: Gram eigensolver failed");
  }
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo <= rank_tol * std::max(1.0, hi)) {
    throw NumericalError("projection_from_values: frame rank deficient at sampled point");
  }
  const double condition = hi / lo;
  if (condition > max_condition) {
    throw NumericalError("projection_from_values: Gram matrix condition exceeds limit");
  }

  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("projection_from_values: Cholesky factorization failed");
  }
  const Matrix gram_inv_vstar = llt.solve(value.adjoint());  // (F*F)^{-1} F*

  ProjectionPoint point;
  point.z = z;
  point.gram_condition = condition;
  point.proj = value * gram_inv_vstar;
  point.dproj = deriv * gram_inv_vstar - point.proj * (deriv * gram_inv_vstar);
  point.hs_sq = point.dproj.squaredNorm();
  return point;
}

ProjectionPoint projection_from_frame(const Frame& f, Complex z) {
  return projection_from_values(f.eval(z), f.deriv(z), z);
}

std::pair<double, double> projection_identity_residuals(const Frame& f, Complex z) {
  const ProjectionPoint pt = projection_from_frame(f, z);
  const double r1 = (pt.proj * pt.dproj).norm();
  const double r2 = ((Matrix::Identity(pt.proj.rows(), pt.proj.cols()) - pt.proj) *
                         pt.dproj * pt.proj -
                     pt.dproj)
                        .norm();
  return {r1, r2};
}

ProjectionPoint shift_bundle_projection(const SpaceParams& p, Complex lambda,
                                        double tail_tol) {
  p.validate();
  if (std::abs(lambda) >= 1.0) {
    throw DomainError("shift_bundle_projection: |lambda| must be < 1");
  }
  const Vector k = kernel_vector(p, lambda);
  // degree-N tail of ||k||^2 relative to the closed form flags an
  // under-resolved truncation before it can pollute curvature values
  const double closed = kernel_norm_sq(p, lambda);
  const double tail = std::abs(closed - k.squaredNorm()) / closed;
  if (tail > tail_tol) {
    char msg[128];
    std::snprintf(msg, sizeof(msg),
                  "shift_bundle_projection: kernel tail %.3e exceeds tolerance %.3e; "
                  "raise the truncation degree",
                  tail, tail_tol);
    throw NumericalError(msg);
  }
  const Vector dk = kernel_vector_deriv(p, lambda);
  return projection_from_values(k, dk, lambda);
}

double curvature_defect(const Frame& f, Complex z) {
  return projection_from_frame(f, z).hs_sq;
}

double tensor_split_residual(const Frame& f, const SpaceParams& p, Complex lambda,
                             int max_rows) {
  const int rows = (p.degree + 1) * f.rows;
  if (rows > max_rows) {
    throw DomainError("tensor_split_residual: tensor model of " + std::to_string(rows) +
                      " rows exceeds the cap of " + std::to_string(max_rows));
  }
  const ProjectionPoint p1 = shift_bundle_projection(p.with_fiber(1), lambda);
  const ProjectionPoint p2 = projection_from_frame(f, lambda);

  const auto kron = [](const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
      }
    }
    return out;
  };

  const Matrix dpi = kron(p1.dproj, p2.proj) + kron(p1.proj, p2.dproj);
  const double total = dpi.squaredNorm();
  const double split = f.cols * p1.hs_sq + p2.hs_sq;
  return std::abs(total - split);
}

double line_bundle_oracle(const Frame& f, Complex z, double h) {
  if (f.cols != 1) throw DimensionError("line_bundle_oracle: frame must have m = 1");
  if (!(h > 0.0)) throw DomainError("line_bundle_oracle: step must be > 0");
  if (std::abs(z) + 2.0 * h >= 1.0) {
    throw DomainError("line_bundle_oracle: stencil leaves the disk");
  }
  const auto log_norm_sq = [&](Complex w) { return std::log(f.eval(w).squaredNorm()); };
  const Complex ih(0.0, h);
  return (log_norm_sq(z + h) + log_norm_sq(z - h) + log_norm_sq(z + ih) +
          log_norm_sq(z - ih) - 4.0 * log_norm_sq(z)) /
         (4.0 * h * h);
}

}  // namespace bergsim
