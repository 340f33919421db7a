#include "bergsim/space.hpp"

#include <cmath>

namespace bergsim {

MonomialWeights MonomialWeights::make(int order, int degree) {
  if (order < 1) throw DomainError("MonomialWeights: order must be >= 1");
  if (degree < 0) throw DomainError("MonomialWeights: degree must be >= 0");
  MonomialWeights mw;
  mw.w.resize(static_cast<size_t>(degree) + 1);
  double w = 1.0;
  mw.w[0] = w;
  for (int i = 0; i < degree; ++i) {
    w *= static_cast<double>(i + 1) / static_cast<double>(order + i);
    mw.w[static_cast<size_t>(i) + 1] = w;
  }
  return mw;
}

double monomial_weight(int order, int i) {
  if (order < 1) throw DomainError("monomial_weight: order must be >= 1");
  if (i < 0) throw DomainError("monomial_weight: degree must be >= 0");
  double w = 1.0;
  for (int j = 0; j < i; ++j) {
    w *= static_cast<double>(j + 1) / static_cast<double>(order + j);
  }
  return w;
}

double space_norm_sq(const VectorFunctionCoeffs& f, const SpaceParams& p) {
  p.validate();
  if (f.degree() != p.degree) {
    throw DimensionError("space_norm_sq: coefficient count does not match truncation degree");
  }
  const auto mw = MonomialWeights::make(p.order, p.degree);
  double acc = 0.0;
  for (int i = 0; i <= p.degree; ++i) {
    const Vector& c = f.coeffs[static_cast<size_t>(i)];
    if (static_cast<int>(c.size()) != p.fiber_dim) {
      throw DimensionError("space_norm_sq: fiber dimension mismatch at degree " + std::to_string(i));
    }
    acc += c.squaredNorm() * mw[i];
  }
  return acc;
}

namespace {

void require_interior(Complex lambda, const char* where) {
  if (std::abs(lambda) >= 1.0) {
    throw DomainError(std::string(where) + ": |lambda| must be < 1");
  }
}

}  // namespace

namespace detail {

RealVector sqrt_binom_coeffs(int order, int degree) {
  RealVector s(degree + 1);
  double v = 1.0;
  s[0] = v;
  for (int i = 0; i < degree; ++i) {
    v *= std::sqrt(static_cast<double>(order + i) / static_cast<double>(i + 1));
    s[i + 1] = v;
  }
  return s;
}

}  // namespace detail

VectorFunctionCoeffs kernel_coeffs(const SpaceParams& p, Complex lambda) {
  p.validate();
  require_interior(lambda, "kernel_coeffs");
  VectorFunctionCoeffs f;
  f.coeffs.resize(static_cast<size_t>(p.degree) + 1);
  // binomial coefficient C(n+i-1, i) times lambda^i, iterated as a ratio
  Complex c = 1.0;
  for (int i = 0; i <= p.degree; ++i) {
    Vector v(1);
    v[0] = c;
    f.coeffs[static_cast<size_t>(i)] = v;
    c *= lambda * (static_cast<double>(p.order + i) / static_cast<double>(i + 1));
  }
  return f;
}

Vector kernel_vector(const SpaceParams& p, Complex lambda) {
  p.validate();
  require_interior(lambda, "kernel_vector");
  Vector v(p.degree + 1);
  Complex c = 1.0;
  for (int i = 0; i <= p.degree; ++i) {
    v[i] = c;
    c *= lambda * std::sqrt(static_cast<double>(p.order + i) / static_cast<double>(i + 1));
  }
  return v;
}

Vector kernel_vector_deriv(const SpaceParams& p, Complex lambda) {
  p.validate();
  require_interior(lambda, "kernel_vector_deriv");
  Vector v(p.degree + 1);
  v[0] = 0.0;
  // i * sqrt(C(n+i-1,i)) lambda^{i-1}
  Complex pow = 1.0;  // lambda^{i-1}
  double s = 1.0;     // sqrt binom, tracked alongside
  for (int i = 1; i <= p.degree; ++i) {
    s *= std::sqrt(static_cast<double>(p.order + i - 1) / static_cast<double>(i));
    v[i] = static_cast<double>(i) * s * pow;
    pow *= lambda;
  }
  return v;
}

Vector kernel_tensor_vector(const SpaceParams& p, Complex lambda, const Vector& fiber) {
  const Vector k = kernel_vector(p.with_fiber(1), lambda);
  Vector out(k.size() * fiber.size());
  for (Eigen::Index i = 0; i < k.size(); ++i) {
    out.segment(i * fiber.size(), fiber.size()) = k[i] * fiber;
  }
  return out;
}

double kernel_norm_sq(const SpaceParams& p, Complex lambda) {
  p.validate();
  require_interior(lambda, "kernel_norm_sq");
  const double t = std::norm(lambda);
  return std::pow(1.0 - t, -p.order);
}

double deriv_kernel_norm_sq(const SpaceParams& p, Complex lambda) {
  p.validate();
  require_interior(lambda, "deriv_kernel_norm_sq");
  const double t = std::norm(lambda);
  const double n = p.order;
  return n * (1.0 + n * t) / std::pow(1.0 - t, n + 2.0);
}

Complex mixed_kernel_inner(const SpaceParams& p, Complex lambda) {
  p.validate();
  require_interior(lambda, "mixed_kernel_inner");
  const double t = std::norm(lambda);
  const double n = p.order;
  return n * std::conj(lambda) * std::pow(1.0 - t, -(n + 1.0));
}

Matrix forward_shift(const SpaceParams& p) {
  p.validate();
  const int f = p.fiber_dim;
  Matrix s = Matrix::Zero(p.basis_size(), p.basis_size());
  for (int i = 0; i < p.degree; ++i) {
    const double w = std::sqrt(static_cast<double>(i + 1) / static_cast<double>(p.order + i));
    for (int q = 0; q < f; ++q) s((i + 1) * f + q, i * f + q) = w;
  }
  return s;
}

Matrix backward_shift(const SpaceParams& p) {
  return forward_shift(p).adjoint();
}

Matrix hypercontraction_defect(const Matrix& T, int level) {
  if (T.rows() != T.cols()) throw DimensionError("hypercontraction_defect: T must be square");
  if (level < 1) throw DomainError("hypercontraction_defect: level must be >= 1");
  const auto dim = T.rows();
  Matrix d = Matrix::Identity(dim, dim);
  Matrix power = Matrix::Identity(dim, dim);  // T^i
  double binom = 1.0;
  double sign = 1.0;
  for (int i = 1; i <= level; ++i) {
    power = power * T;
    binom *= static_cast<double>(level - i + 1) / static_cast<double>(i);
    sign = -sign;
    d.noalias() += (sign * binom) * (power.adjoint() * power);
  }
  // kill round-off skew so eigenvalues are real by construction
  return 0.5 * (d + Matrix(d.adjoint()));
}

HypercontractionReport is_k_hypercontraction(const Matrix& T, int k, double tol) {
  if (tol < 0.0) throw DomainError("is_k_hypercontraction: tol must be >= 0");
  if (k < 1) throw DomainError("is_k_hypercontraction: k must be >= 1");
  HypercontractionReport report;
  report.passed = true;
  for (int level = 1; level <= k; ++level) {
    const Matrix d = hypercontraction_defect(T, level);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(d, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      report.status = PsdStatus::kSolverError;
      report.passed = false;
      return report;
    }
    DefectLevelReport row;
    row.level = level;
    row.min_eigenvalue = solver.eigenvalues().minCoeff();
    row.defect_norm = solver.eigenvalues().cwiseAbs().maxCoeff();
    row.psd = row.min_eigenvalue >= -std::max(tol, 1e-10 * row.defect_norm);
    if (!row.psd) report.passed = false;
    report.levels.push_back(row);
  }
  report.status = report.passed ? PsdStatus::kPassed : PsdStatus::kFailed;
  return report;
}

namespace {

void check_symbol(const std::vector<Matrix>& symbol, const char* where) {
  if (symbol.empty()) throw DimensionError(std::string(where) + ": empty symbol");
  const auto rows = symbol.front().rows();
  const auto cols = symbol.front().cols();
  if (rows < 1 || cols < 1) throw DimensionError(std::string(where) + ": zero-sized symbol block");
  for (const auto& m : symbol) {
    if (m.rows() != rows || m.cols() != cols) {
      throw DimensionError(std::string(where) + ": inconsistent symbol block shapes");
    }
  }
}

}  // namespace

Matrix toeplitz_analytic(const std::vector<Matrix>& symbol, const SpaceParams& p) {
  p.validate();
  check_symbol(symbol, "toeplitz_analytic");
  const int out = static_cast<int>(symbol.front().rows());
  const int in = static_cast<int>(symbol.front().cols());
  const int nd = p.degree + 1;
  const int sym_deg = static_cast<int>(symbol.size()) - 1;
  const auto mw = MonomialWeights::make(p.order, p.degree);
  Matrix t = Matrix::Zero(nd * out, nd * in);
  for (int j = 0; j < nd; ++j) {
    for (int i = j; i < nd && i - j <= sym_deg; ++i) {
      t.block(i * out, j * in, out, in) =
          std::sqrt(mw[i] / mw[j]) * symbol[static_cast<size_t>(i - j)];
    }
  }
  return t;
}

Matrix toeplitz_coanalytic(const std::vector<Matrix>& symbol, const SpaceParams& p) {
  p.validate();
  check_symbol(symbol, "toeplitz_coanalytic");
  const int out = static_cast<int>(symbol.front().rows());
  const int in = static_cast<int>(symbol.front().cols());
  const int nd = p.degree + 1;
  const int sym_deg = static_cast<int>(symbol.size()) - 1;
  const auto mw = MonomialWeights::make(p.order, p.degree);
  Matrix t = Matrix::Zero(nd * out, nd * in);
  for (int i = 0; i < nd; ++i) {
    for (int j = i; j < nd && j - i <= sym_deg; ++j) {
      t.block(i * out, j * in, out, in) =
          std::sqrt(mw[j] / mw[i]) * symbol[static_cast<size_t>(j - i)];
    }
  }
  return t;
}

double backward_shift_commutator_norm(const std::vector<Matrix>& symbol,
                                      const SpaceParams& p) {
  p.validate();
  check_symbol(symbol, "backward_shift_commutator_norm");
  const int out = static_cast<int>(symbol.front().rows());
  const int in = static_cast<int>(symbol.front().cols());
  const int sym_deg = static_cast<int>(symbol.size()) - 1;
  const Matrix tq = toeplitz_coanalytic(symbol, p);
  const Matrix s_out = backward_shift(p.with_fiber(out));
  const Matrix s_in = backward_shift(p.with_fiber(in));
  const Matrix comm = s_out * tq - tq * s_in;
  const int interior = std::max(0, p.degree - sym_deg) + 1;
  return comm.topLeftCorner(interior * out, interior * in).norm();
}

}  // namespace bergsim
