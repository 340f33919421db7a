#include "bergsim/verify.hpp"

#include <cmath>
#include <numbers>

#include "bergsim/bundle.hpp"
#include "bergsim/space.hpp"

namespace bergsim {

namespace {

constexpr double kGolden = 0.6180339887498949;

// deterministic low-discrepancy sample of the disk of radius r_max
std::vector<Complex> spiral_sample(int count, double r_max) {
  std::vector<Complex> out;
  out.reserve(static_cast<size_t>(count));
  for (int j = 0; j < count; ++j) {
    const double r = r_max * (j + 1) / count;
    const double theta = 2.0 * std::numbers::pi * kGolden * j;
    out.push_back(std::polar(r, theta));
  }
  return out;
}

SuiteResult make_result(std::string name, double residual, double tol) {
  SuiteResult res;
  res.name = std::move(name);
  res.max_residual = residual;
  res.tolerance = tol;
  res.pass = residual <= tol;
  return res;
}

double kernel_identity_residual(const VerifyConfig& cfg) {
  double worst = 0.0;
  for (const int n : cfg.orders) {
    const SpaceParams p{n, cfg.kernel_degree, 1};
    const double target_order = n + cfg.weight_order_offset;
    for (const Complex lambda : spiral_sample(cfg.kernel_samples, 0.7)) {
      const double t = std::norm(lambda);
      const Vector k = kernel_vector(p, lambda);
      const Vector dk = kernel_vector_deriv(p, lambda);

      const double norm_closed = std::pow(1.0 - t, -target_order);
      worst = std::max(worst, std::abs(k.squaredNorm() - norm_closed));

      const double dnorm_closed =
          target_order * (1.0 + target_order * t) / std::pow(1.0 - t, target_order + 2.0);
      worst = std::max(worst, std::abs(dk.squaredNorm() - dnorm_closed));

      const Complex mixed_closed =
          target_order * std::conj(lambda) * std::pow(1.0 - t, -(target_order + 1.0));
      worst = std::max(worst, std::abs(coord_inner(dk, k) - mixed_closed));

      // || -n conj(lambda) k + (1 - |lambda|^2) dk ||^2 = n (1 - |lambda|^2)^{-n}
      const Vector combo = -static_cast<double>(n) * std::conj(lambda) * k + (1.0 - t) * dk;
      const double combo_closed = target_order * std::pow(1.0 - t, -target_order);
      worst = std::max(worst, std::abs(combo.squaredNorm() - combo_closed));

      // reproducing and derivative-reproducing actions on a fixed polynomial
      const Vector poly_taylor = [&] {
        Vector c = Vector::Zero(p.degree + 1);
        c[0] = Complex(0.7, -0.2);
        c[1] = Complex(-0.4, 0.1);
        c[3] = Complex(0.25, 0.35);
        return c;
      }();
      const auto mw = MonomialWeights::make(n, p.degree);
      Vector f_coords(p.degree + 1);
      for (int i = 0; i <= p.degree; ++i) f_coords[i] = poly_taylor[i] * std::sqrt(mw[i]);
      const Complex value = poly_taylor[0] + poly_taylor[1] * lambda +
                            poly_taylor[3] * lambda * lambda * lambda;
      const Complex deriv =
          poly_taylor[1] + 3.0 * poly_taylor[3] * lambda * lambda;
      worst = std::max(worst,
                       std::abs(coord_inner(f_coords, kernel_vector(p, std::conj(lambda))) - value));
      worst = std::max(
          worst,
          std::abs(coord_inner(f_coords, kernel_vector_deriv(p, std::conj(lambda))) - deriv));
    }
  }
  return worst;
}

double projection_identity_residual(const VerifyConfig& cfg, std::mt19937_64& rng) {
  constexpr std::pair<int, int> kShapes[] = {{2, 1}, {3, 2}, {4, 2}};
  double worst = 0.0;
  std::uniform_real_distribution<double> radius(0.0, 0.8);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < cfg.frame_count; ++i) {
    const auto [e_dim, m] = kShapes[i % 3];
    const Frame f = random_polynomial_frame(2, e_dim, m, 3, rng);
    for (int j = 0; j < cfg.point_count; ++j) {
      const Complex z = std::polar(radius(rng), angle(rng));
      const auto [r1, r2] = projection_identity_residuals(f, z);
      worst = std::max({worst, r1, r2});
    }
  }
  return worst;
}

double shift_bundle_residual(const VerifyConfig& cfg) {
  double worst = 0.0;
  for (const int n : cfg.orders) {
    const SpaceParams p{n, cfg.bundle_degree, 1};
    const double target_order = n + cfg.weight_order_offset;
    for (const Complex lambda : spiral_sample(cfg.bundle_samples, 0.9)) {
      const double t = std::norm(lambda);
      const double closed = target_order / ((1.0 - t) * (1.0 - t));
      const double hs = shift_bundle_projection(p, lambda).hs_sq;
      worst = std::max(worst, std::abs(hs - closed) / closed);
    }
  }
  return worst;
}

double tensor_split_suite(const VerifyConfig& cfg, std::mt19937_64& rng) {
  constexpr std::pair<int, int> kShapes[] = {{2, 1}, {3, 2}};
  std::uniform_real_distribution<double> radius(0.0, 0.6);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  double worst = 0.0;
  for (int i = 0; i < cfg.tensor_frames; ++i) {
    const int order = (i % 2) + 1;
    const auto [e_dim, m] = kShapes[i % 2];
    const Frame f = random_polynomial_frame(order, e_dim, m, 2, rng);
    const SpaceParams p{order, cfg.tensor_degree, e_dim};
    const Complex lambda = std::polar(radius(rng), angle(rng));
    worst = std::max(worst, tensor_split_residual(f, p, lambda));
  }
  return worst;
}

std::vector<Matrix> random_matrix_poly(int rows, int cols, int degree,
                                       std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::vector<Matrix> out;
  for (int k = 0; k <= degree; ++k) {
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) m(r, c) = Complex(coeff(rng), coeff(rng));
    }
    out.push_back(m);
  }
  return out;
}

Matrix eval_matrix_poly(const std::vector<Matrix>& sym, Complex z) {
  Matrix acc = Matrix::Zero(sym.front().rows(), sym.front().cols());
  Complex pow = 1.0;
  for (const auto& c : sym) {
    acc += pow * c;
    pow *= z;
  }
  return acc;
}

double toeplitz_identity_residual(const VerifyConfig& cfg, std::mt19937_64& rng) {
  double worst = 0.0;
  for (const int n : cfg.toeplitz_orders) {
    const SpaceParams p{n, cfg.toeplitz_degree, 2};
    const auto f_sym = random_matrix_poly(2, 2, 3, rng);
    const auto g_sym = random_matrix_poly(2, 2, 2, rng);

    // multiplicativity T_{FG} = T_F T_G
    std::vector<Matrix> fg(static_cast<size_t>(p.degree) + 1, Matrix::Zero(2, 2));
    for (size_t a = 0; a < f_sym.size(); ++a) {
      for (size_t b = 0; b < g_sym.size() && a + b <= static_cast<size_t>(p.degree); ++b) {
        fg[a + b] += f_sym[a] * g_sym[b];
      }
    }
    worst = std::max(worst, (toeplitz_analytic(fg, p) -
                             toeplitz_analytic(f_sym, p) * toeplitz_analytic(g_sym, p))
                                .norm());

    // adjoint action on kernels: T_F^* (k_lambda (x) e) = k_lambda (x) F(lambda)^* e
    const Complex lambda(0.31, 0.17);
    const Matrix tf_adj = toeplitz_analytic(f_sym, p).adjoint();
    const int interior = p.degree - 3;
    for (int col = 0; col < 2; ++col) {
      Vector e = Vector::Zero(2);
      e[col] = 1.0;
      Vector lhs = tf_adj * kernel_tensor_vector(p, std::conj(lambda), e);
      Vector rhs = kernel_tensor_vector(p, std::conj(lambda),
                                        (eval_matrix_poly(f_sym, lambda).adjoint() * e).eval());
      worst = std::max(worst, (lhs - rhs).head(2 * (interior + 1)).norm());
    }

    // conjugate-analytic action: T_Q (k_{conj lambda} (x) e) = k_{conj lambda} (x) G(lambda) e
    const Matrix tq = toeplitz_coanalytic(g_sym, p);
    for (int col = 0; col < 2; ++col) {
      Vector e = Vector::Zero(2);
      e[col] = 1.0;
      Vector lhs = tq * kernel_tensor_vector(p, lambda, e);
      Vector rhs = kernel_tensor_vector(p, lambda, (eval_matrix_poly(g_sym, lambda) * e).eval());
      const int q_interior = p.degree - 2;
      worst = std::max(worst, (lhs - rhs).head(2 * (q_interior + 1)).norm());
    }

    worst = std::max(worst, backward_shift_commutator_norm(g_sym, p));
  }
  return worst;
}

}  // namespace

Frame random_polynomial_frame(int order, int e_dim, int m, int poly_degree,
                              std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  const double scale = 0.3 / (e_dim * (poly_degree + 1));
  Frame f;
  f.order = order;
  f.rows = e_dim;
  f.cols = m;
  for (int r = 0; r < e_dim; ++r) {
    for (int c = 0; c < m; ++c) {
      std::vector<Complex> coeffs(static_cast<size_t>(poly_degree) + 1);
      coeffs[0] = (r == c) ? Complex(1.0) : Complex(0.0);
      for (int k = 1; k <= poly_degree; ++k) {
        coeffs[static_cast<size_t>(k)] = scale * Complex(coeff(rng), coeff(rng));
      }
      f.entries.push_back(Atom::poly(std::move(coeffs)));
    }
  }
  return f;
}

VerifyReport run_verify_suites(const VerifyConfig& config) {
  std::mt19937_64 rng(config.seed);
  VerifyReport report;
  report.suites.push_back(
      make_result("kernel identities", kernel_identity_residual(config), config.kernel_tol));
  report.suites.push_back(make_result("projection identities",
                                      projection_identity_residual(config, rng),
                                      config.projection_tol));
  report.suites.push_back(make_result("shift bundle curvature (relative)",
                                      shift_bundle_residual(config), config.bundle_rel_tol));
  report.suites.push_back(
      make_result("tensor split", tensor_split_suite(config, rng), config.tensor_tol));
  report.suites.push_back(make_result("toeplitz identities",
                                      toeplitz_identity_residual(config, rng),
                                      config.toeplitz_tol));
  report.all_pass = true;
  for (const auto& suite : report.suites) report.all_pass = report.all_pass && suite.pass;
  return report;
}

}  // namespace bergsim
