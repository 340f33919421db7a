#include "bergsim/frame.hpp"

#include <cmath>
#include <utility>

#include <nlohmann/json.hpp>

#include "bergsim/potential.hpp"

namespace bergsim {

using nlohmann::json;

namespace {

void require_disk(Complex z, const char* where) {
  if (std::abs(z) >= 1.0) throw DomainError(std::string(where) + ": |z| must be < 1");
}

// truncated Cauchy product, result degree = min(degree, combined support)
std::vector<Complex> convolve(const std::vector<Complex>& a,
                              const std::vector<Complex>& b, int degree) {
  std::vector<Complex> out(static_cast<size_t>(degree) + 1, Complex(0.0));
  for (size_t i = 0; i < a.size() && i <= static_cast<size_t>(degree); ++i) {
    if (a[i] == Complex(0.0)) continue;
    const size_t jmax = std::min(b.size(), static_cast<size_t>(degree) + 1 - i);
    for (size_t j = 0; j < jmax; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

}  // namespace

Atom Atom::poly(std::vector<Complex> coeffs) {
  Atom a;
  a.kind_ = Kind::kPoly;
  if (coeffs.empty()) coeffs.push_back(Complex(0.0));
  a.coeffs_ = std::move(coeffs);
  return a;
}

Atom Atom::blaschke(Complex param) {
  if (std::abs(param) >= 1.0) {
    throw DomainError("blaschke atom: |a| must be < 1");
  }
  Atom a;
  a.kind_ = Kind::kBlaschke;
  a.param_ = param;
  return a;
}

Atom Atom::power_one_minus_z(double alpha) {
  if (!(alpha > -0.5)) {
    throw DomainError("power_one_minus_z atom: alpha must be > -1/2");
  }
  Atom a;
  a.kind_ = Kind::kPowerOneMinusZ;
  a.alpha_ = alpha;
  return a;
}

Atom Atom::scale(Complex c, Atom inner) {
  Atom a;
  a.kind_ = Kind::kScale;
  a.param_ = c;
  a.children_.push_back(std::move(inner));
  return a;
}

Atom Atom::sum(std::vector<Atom> terms) {
  if (terms.empty()) throw DomainError("sum atom: needs at least one term");
  Atom a;
  a.kind_ = Kind::kSum;
  a.children_ = std::move(terms);
  return a;
}

Atom Atom::product(std::vector<Atom> factors) {
  if (factors.empty()) throw DomainError("product atom: needs at least one factor");
  Atom a;
  a.kind_ = Kind::kProduct;
  a.children_ = std::move(factors);
  return a;
}

Complex Atom::eval(Complex z) const {
  require_disk(z, "Atom::eval");
  switch (kind_) {
    case Kind::kPoly: {
      Complex acc = 0.0;  // Horner
      for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
      return acc;
    }
    case Kind::kBlaschke:
      return (param_ - z) / (1.0 - std::conj(param_) * z);
    case Kind::kPowerOneMinusZ:
      return std::pow(1.0 - z, Complex(alpha_));
    case Kind::kScale:
      return param_ * children_.front().eval(z);
    case Kind::kSum: {
      Complex acc = 0.0;
      for (const auto& c : children_) acc += c.eval(z);
      return acc;
    }
    case Kind::kProduct: {
      Complex acc = 1.0;
      for (const auto& c : children_) acc *= c.eval(z);
      return acc;
    }
  }
  throw NumericalError("Atom::eval: unreachable");
}

Complex Atom::deriv(Complex z) const {
  require_disk(z, "Atom::deriv");
  switch (kind_) {
    case Kind::kPoly: {
      Complex acc = 0.0;
      for (size_t i = coeffs_.size(); i-- > 1;) {
        acc = acc * z + static_cast<double>(i) * coeffs_[i];
      }
      return acc;
    }
    case Kind::kBlaschke: {
      const Complex d = 1.0 - std::conj(param_) * z;
      return (std::norm(param_) - 1.0) / (d * d);
    }
    case Kind::kPowerOneMinusZ:
      return -alpha_ * std::pow(1.0 - z, Complex(alpha_ - 1.0));
    case Kind::kScale:
      return param_ * children_.front().deriv(z);
    case Kind::kSum: {
      Complex acc = 0.0;
      for (const auto& c : children_) acc += c.deriv(z);
      return acc;
    }
    case Kind::kProduct: {
      // product rule; values of the siblings reused per term
      const size_t k = children_.size();
      std::vector<Complex> vals(k);
      for (size_t i = 0; i < k; ++i) vals[i] = children_[i].eval(z);
      Complex acc = 0.0;
      for (size_t i = 0; i < k; ++i) {
        Complex term = children_[i].deriv(z);
        for (size_t j = 0; j < k; ++j) {
          if (j != i) term *= vals[j];
        }
        acc += term;
      }
      return acc;
    }
  }
  throw NumericalError("Atom::deriv: unreachable");
}

std::vector<Complex> Atom::taylor(int degree) const {
  if (degree < 0) throw DomainError("Atom::taylor: degree must be >= 0");
  const size_t len = static_cast<size_t>(degree) + 1;
  switch (kind_) {
    case Kind::kPoly: {
      std::vector<Complex> out(len, Complex(0.0));
      for (size_t i = 0; i < coeffs_.size() && i < len; ++i) out[i] = coeffs_[i];
      return out;
    }
    case Kind::kBlaschke: {
      // (a - z) sum_k conj(a)^k z^k
      std::vector<Complex> out(len, Complex(0.0));
      const Complex ac = std::conj(param_);
      out[0] = param_;
      Complex p = 1.0;  // conj(a)^{k-1}
      for (size_t k = 1; k < len; ++k) {
        out[k] = p * (std::norm(param_) - 1.0);
        p *= ac;
      }
      return out;
    }
    case Kind::kPowerOneMinusZ: {
      // c_0 = 1, c_{k+1} = c_k (k - alpha)/(k + 1)
      std::vector<Complex> out(len, Complex(0.0));
      double c = 1.0;
      out[0] = c;
      for (size_t k = 0; k + 1 < len; ++k) {
        c *= (static_cast<double>(k) - alpha_) / (static_cast<double>(k) + 1.0);
        out[k + 1] = c;
      }
      return out;
    }
    case Kind::kScale: {
      auto out = children_.front().taylor(degree);
      for (auto& c : out) c *= param_;
      return out;
    }
    case Kind::kSum: {
      std::vector<Complex> out(len, Complex(0.0));
      for (const auto& child : children_) {
        const auto t = child.taylor(degree);
        for (size_t i = 0; i < len; ++i) out[i] += t[i];
      }
      return out;
    }
    case Kind::kProduct: {
      std::vector<Complex> out = children_.front().taylor(degree);
      for (size_t i = 1; i < children_.size(); ++i) {
        out = convolve(out, children_[i].taylor(degree), degree);
      }
      return out;
    }
  }
  throw NumericalError("Atom::taylor: unreachable");
}

Matrix Frame::eval(Complex z) const {
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = at(r, c).eval(z);
  }
  return m;
}

Matrix Frame::deriv(Complex z) const {
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = at(r, c).deriv(z);
  }
  return m;
}

std::vector<Matrix> Frame::taylor(int degree) const {
  std::vector<Matrix> out(static_cast<size_t>(degree) + 1, Matrix::Zero(rows, cols));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const auto t = at(r, c).taylor(degree);
      for (int k = 0; k <= degree; ++k) out[static_cast<size_t>(k)](r, c) = t[static_cast<size_t>(k)];
    }
  }
  return out;
}

Matrix Frame::eval_left_inverse(Complex z) const {
  if (!left_inverse) throw DomainError("Frame: no left inverse supplied");
  Matrix m(cols, rows);
  for (int r = 0; r < cols; ++r) {
    for (int c = 0; c < rows; ++c) m(r, c) = (*left_inverse)[static_cast<size_t>(r * rows + c)].eval(z);
  }
  return m;
}

std::vector<Matrix> Frame::taylor_left_inverse(int degree) const {
  if (!left_inverse) throw DomainError("Frame: no left inverse supplied");
  std::vector<Matrix> out(static_cast<size_t>(degree) + 1, Matrix::Zero(cols, rows));
  for (int r = 0; r < cols; ++r) {
    for (int c = 0; c < rows; ++c) {
      const auto t = (*left_inverse)[static_cast<size_t>(r * rows + c)].taylor(degree);
      for (int k = 0; k <= degree; ++k) out[static_cast<size_t>(k)](r, c) = t[static_cast<size_t>(k)];
    }
  }
  return out;
}

FrameBounds frame_bounds(const Frame& f, const DiskGrid& grid, double rank_tol) {
  if (grid.nodes.empty()) throw DomainError("frame_bounds: empty grid");
  FrameBounds b;
  b.c_low = std::numeric_limits<double>::infinity();
  b.c_high = 0.0;
  for (const auto& node : grid.nodes) {
    const Matrix fz = f.eval(node.z);
    const Matrix gram = fz.adjoint() * fz;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("frame_bounds: eigensolver failed at a grid node");
    }
    const double lo = solver.eigenvalues().minCoeff();
    const double hi = solver.eigenvalues().maxCoeff();
    if (lo < b.c_low) {
      b.c_low = lo;
      b.worst_node = node.z;
    }
    b.c_high = std::max(b.c_high, hi);
  }
  b.rank_deficient = b.c_low < rank_tol;
  b.c = b.rank_deficient ? std::numeric_limits<double>::infinity()
                         : std::max(b.c_high, 1.0 / b.c_low);
  return b;
}

namespace {

Complex parse_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw DomainError("frame json: expected [re, im] pair at " + path);
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Atom parse_atom(const json& j, const std::string& path) {
  if (!j.is_object()) throw DomainError("frame json: expected atom object at " + path);
  if (!j.contains("type")) throw DomainError("frame json: missing atom type at " + path);
  const std::string type = j.at("type").get<std::string>();
  try {
    if (type == "poly") {
      std::vector<Complex> coeffs;
      const auto& arr = j.at("coeffs");
      if (!arr.is_array()) throw DomainError("frame json: poly coeffs must be an array at " + path);
      for (size_t i = 0; i < arr.size(); ++i) {
        coeffs.push_back(parse_complex(arr[i], path + ".coeffs[" + std::to_string(i) + "]"));
      }
      return Atom::poly(std::move(coeffs));
    }
    if (type == "blaschke") {
      return Atom::blaschke(parse_complex(j.at("a"), path + ".a"));
    }
    if (type == "power_one_minus_z") {
      return Atom::power_one_minus_z(j.at("alpha").get<double>());
    }
    if (type == "scale") {
      return Atom::scale(parse_complex(j.at("c"), path + ".c"),
                         parse_atom(j.at("of"), path + ".of"));
    }
    if (type == "sum") {
      std::vector<Atom> terms;
      const auto& arr = j.at("terms");
      for (size_t i = 0; i < arr.size(); ++i) {
        terms.push_back(parse_atom(arr[i], path + ".terms[" + std::to_string(i) + "]"));
      }
      return Atom::sum(std::move(terms));
    }
    if (type == "product") {
      std::vector<Atom> factors;
      const auto& arr = j.at("factors");
      for (size_t i = 0; i < arr.size(); ++i) {
        factors.push_back(parse_atom(arr[i], path + ".factors[" + std::to_string(i) + "]"));
      }
      return Atom::product(std::move(factors));
    }
  } catch (const json::exception& e) {
    throw DomainError("frame json: " + std::string(e.what()) + " at " + path);
  } catch (const DomainError& e) {
    // annotate invariant violations from atom constructors with their path
    const std::string what = e.what();
    if (what.find(" at ") == std::string::npos) throw DomainError(what + " at " + path);
    throw;
  }
  throw DomainError("frame json: unknown atom type '" + type + "' at " + path);
}

std::vector<Atom> parse_entry_grid(const json& arr, int rows, int cols,
                                   const std::string& path) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != rows) {
    throw DomainError("frame json: " + path + " must be an array of " +
                      std::to_string(rows) + " rows");
  }
  std::vector<Atom> entries;
  entries.reserve(static_cast<size_t>(rows * cols));
  for (int r = 0; r < rows; ++r) {
    const auto& row = arr[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw DomainError("frame json: row " + path + "[" + std::to_string(r) + "] must have " +
                        std::to_string(cols) + " entries");
    }
    for (int c = 0; c < cols; ++c) {
      entries.push_back(parse_atom(row[static_cast<size_t>(c)],
                                   path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
    }
  }
  return entries;
}

}  // namespace

Frame parse_frame(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw DomainError("frame json: malformed document: " + std::string(e.what()));
  }
  Frame f;
  try {
    f.order = doc.at("n").get<int>();
    f.cols = doc.at("m").get<int>();
    f.rows = doc.at("e_dim").get<int>();
  } catch (const json::exception& e) {
    throw DomainError("frame json: " + std::string(e.what()) + " at $");
  }
  if (f.order < 1) throw DomainError("frame json: n must be >= 1 at $.n");
  if (f.cols < 1) throw DomainError("frame json: m must be >= 1 at $.m");
  if (f.rows < f.cols) throw DomainError("frame json: e_dim must be >= m at $.e_dim");
  if (!doc.contains("entries")) throw DomainError("frame json: missing entries at $");
  f.entries = parse_entry_grid(doc.at("entries"), f.rows, f.cols, "$.entries");
  if (doc.contains("left_inverse")) {
    f.left_inverse = parse_entry_grid(doc.at("left_inverse"), f.cols, f.rows, "$.left_inverse");
  }
  return f;
}

namespace {

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

json atom_to_json(const Atom& a) {
  switch (a.kind()) {
    case Atom::Kind::kPoly: {
      json coeffs = json::array();
      for (const auto& c : a.poly_coeffs()) coeffs.push_back(complex_to_json(c));
      return json{{"type", "poly"}, {"coeffs", coeffs}};
    }
    case Atom::Kind::kBlaschke:
      return json{{"type", "blaschke"}, {"a", complex_to_json(a.blaschke_param())}};
    case Atom::Kind::kPowerOneMinusZ:
      return json{{"type", "power_one_minus_z"}, {"alpha", a.power_alpha()}};
    case Atom::Kind::kScale:
      return json{{"type", "scale"},
                  {"c", complex_to_json(a.scale_factor())},
                  {"of", atom_to_json(a.children().front())}};
    case Atom::Kind::kSum: {
      json terms = json::array();
      for (const auto& c : a.children()) terms.push_back(atom_to_json(c));
      return json{{"type", "sum"}, {"terms", terms}};
    }
    case Atom::Kind::kProduct: {
      json factors = json::array();
      for (const auto& c : a.children()) factors.push_back(atom_to_json(c));
      return json{{"type", "product"}, {"factors", factors}};
    }
  }
  throw NumericalError("atom_to_json: unreachable");
}

json entry_grid_to_json(const std::vector<Atom>& entries, int rows, int cols) {
  json out = json::array();
  for (int r = 0; r < rows; ++r) {
    json row = json::array();
    for (int c = 0; c < cols; ++c) row.push_back(atom_to_json(entries[static_cast<size_t>(r * cols + c)]));
    out.push_back(row);
  }
  return out;
}

}  // namespace

std::string frame_to_json(const Frame& f) {
  json doc;
  doc["n"] = f.order;
  doc["m"] = f.cols;
  doc["e_dim"] = f.rows;
  doc["entries"] = entry_grid_to_json(f.entries, f.rows, f.cols);
  if (f.left_inverse) {
    doc["left_inverse"] = entry_grid_to_json(*f.left_inverse, f.cols, f.rows);
  }
  return doc.dump(2);
}

Frame identity_frame(int order, int m) {
  Frame f;
  f.order = order;
  f.rows = m;
  f.cols = m;
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      f.entries.push_back(Atom::poly({Complex(r == c ? 1.0 : 0.0)}));
    }
  }
  return f;
}

}  // namespace bergsim
