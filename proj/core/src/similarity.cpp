#include "bergsim/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/QR>
#include <Eigen/SVD>
#include <nlohmann/json.hpp>

namespace bergsim {

using ordered_json = nlohmann::ordered_json;

Matrix canonical_intertwiner(const Frame& f, const SpaceParams& p) {
  p.validate();
  if (p.fiber_dim != f.rows) {
    throw DimensionError("canonical_intertwiner: space fiber must equal dim E");
  }
  return toeplitz_coanalytic(f.taylor(p.degree), p);
}

ModelOperator model_operator(const Frame& f, const SpaceParams& p) {
  const Matrix a = canonical_intertwiner(f, p);
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  qr.setThreshold(1e-10);
  const Eigen::Index rank = qr.rank();
  if (rank < a.cols()) {
    throw NumericalError(
        "model_operator: intertwiner columns rank collapsed; frame unsuitable at this degree");
  }
  Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), rank);

  const Matrix shift = backward_shift(p);
  const Matrix sq = shift * q;
  ModelOperator model;
  model.params = p;
  model.frame_cols = f.cols;
  model.matrix = q.adjoint() * sq;
  model.invariance_residual = (sq - q * model.matrix).norm();
  model.subspace_basis = std::move(q);
  return model;
}

IntertwinerReport intertwiner_sweep(const Frame& f, const std::vector<int>& degrees) {
  if (degrees.empty()) throw DomainError("intertwiner_sweep: empty degree list");
  for (size_t i = 1; i < degrees.size(); ++i) {
    if (degrees[i] <= degrees[i - 1]) {
      throw DomainError("intertwiner_sweep: degrees must be strictly increasing");
    }
  }
  IntertwinerReport report;
  for (const int degree : degrees) {
    const SpaceParams p{f.order, degree, f.rows};
    const Matrix a = canonical_intertwiner(f, p);
    Eigen::BDCSVD<Matrix> svd(a);
    if (svd.info() != Eigen::Success) {
      throw NumericalError("intertwiner_sweep: SVD failed at degree " + std::to_string(degree));
    }
    const auto& sigma = svd.singularValues();
    const double hi = sigma(0);
    const double lo = sigma(sigma.size() - 1);
    if (!(lo > 0.0)) {
      throw NumericalError("intertwiner_sweep: singular intertwiner at degree " +
                           std::to_string(degree));
    }
    report.degrees.push_back(degree);
    report.sigma_max.push_back(hi);
    report.sigma_min.push_back(lo);
    report.condition.push_back(hi / lo);
  }

  if (f.left_inverse) {
    report.has_left_inverse = true;
    const int degree = degrees.back();
    const SpaceParams p{f.order, degree, f.rows};
    // configuration check: G F = I pointwise before trusting the certificate
    for (const double r : {0.0, 0.35, 0.7}) {
      for (int l = 0; l < 6; ++l) {
        const Complex z = std::polar(r, 2.0 * std::numbers::pi * (l + 0.21) / 6.0);
        const Matrix gf = f.eval_left_inverse(z) * f.eval(z);
        if ((gf - Matrix::Identity(f.cols, f.cols)).norm() > 1e-8) {
          throw DomainError("intertwiner_sweep: supplied left inverse does not satisfy G F = I");
        }
      }
    }
    const Matrix tg = toeplitz_coanalytic(f.taylor_left_inverse(degree), p.with_fiber(f.cols));
    const Matrix tf = canonical_intertwiner(f, p);
    const Matrix prod = tg * tf;
    report.left_identity_residual =
        (prod - Matrix::Identity(prod.rows(), prod.cols())).norm();
    if (report.left_identity_residual > 1e-8) {
      throw DomainError("intertwiner_sweep: T_{Q_G} T_{Q_F} deviates from the identity");
    }
    Eigen::BDCSVD<Matrix> svd(tg);
    report.left_inverse_norm = svd.singularValues()(0);
  }
  return report;
}

std::vector<PowerDecayRow> power_decay_check(const ModelOperator& model, int k_max,
                                             std::uint64_t seed, int n_random) {
  if (k_max < 1) throw DomainError("power_decay_check: k_max must be >= 1");
  std::vector<std::pair<std::string, Vector>> vectors;

  // kernel-type vectors pulled back to the subspace basis
  for (const Complex lambda : {Complex(0.4, 0.0), Complex(-0.25, 0.3)}) {
    Vector fiber = Vector::Zero(model.params.fiber_dim);
    fiber[0] = 1.0;
    const Vector ambient = kernel_tensor_vector(model.params, lambda, fiber);
    Vector v = model.subspace_basis.adjoint() * ambient;
    const double norm = v.norm();
    if (norm > 1e-12) {
      v /= norm;
      vectors.emplace_back("kernel(" + std::to_string(lambda.real()) + "," +
                               std::to_string(lambda.imag()) + ")",
                           std::move(v));
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < n_random; ++i) {
    Vector v(model.matrix.rows());
    for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = Complex(gauss(rng), gauss(rng));
    v /= v.norm();
    vectors.emplace_back("random" + std::to_string(i), std::move(v));
  }

  std::vector<PowerDecayRow> rows;
  for (auto& [label, v0] : vectors) {
    PowerDecayRow row;
    row.label = label;
    Vector v = v0;
    for (int k = 1; k <= k_max; ++k) {
      v = model.matrix * v;
      row.norms.push_back(v.norm());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

HypercontractionReport defect_chain_check(const Matrix& T, int order, double tol) {
  Eigen::BDCSVD<Matrix> svd(T);
  const double norm = svd.singularValues()(0);
  if (norm > 1.0 + tol) {
    throw DomainError("defect_chain_check: operator norm " + std::to_string(norm) +
                      " violates the contraction precondition");
  }
  return is_k_hypercontraction(T, order, tol);
}

std::string flag_name(Flag f) {
  switch (f) {
    case Flag::kPass: return "pass";
    case Flag::kFail: return "fail";
    case Flag::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

Flag trend_flag(Trend t) {
  switch (t) {
    case Trend::kBoundedLooking: return Flag::kPass;
    case Trend::kGrowing: return Flag::kFail;
    case Trend::kInconclusive: return Flag::kInconclusive;
  }
  return Flag::kInconclusive;
}

Trend ring_trend(const std::vector<double>& values) {
  const size_t n = values.size();
  if (n < 4) return Trend::kInconclusive;
  const double eps = 1e-14;
  bool bounded = true;
  bool growing = true;
  bool all_small = true;
  for (size_t i = n - 3; i < n; ++i) {
    const double ratio = (values[i] + eps) / (values[i - 1] + eps);
    bounded = bounded && ratio < 1.05;
    growing = growing && ratio > 1.10;
    all_small = all_small && values[i] < 1e-12;
  }
  if (all_small || bounded) return Trend::kBoundedLooking;
  if (growing) return Trend::kGrowing;
  return Trend::kInconclusive;
}

}  // namespace

SimilarityReport assemble_report(const Frame& f, const ReportConfig& config) {
  SimilarityReport report;
  report.order = f.order;
  report.e_dim = f.rows;
  report.m = f.cols;

  // frame bounds on a grid pushed hard against the boundary, where the
  // extremes of F*F live for bounded frames
  const DiskGrid bounds_grid =
      make_boundary_grid(config.bounds_nr, config.bounds_ntheta, config.bounds_radius);
  report.bounds = frame_bounds(f, bounds_grid);

  // curvature defect field on the quadrature substrate
  const DiskGrid grid = make_boundary_grid(config.grid_nr, config.grid_ntheta, config.grid_radius);
  std::vector<double> defect_values(grid.nodes.size(), 0.0);
  for (size_t i = 0; i < grid.nodes.size(); ++i) {
    try {
      defect_values[i] = curvature_defect(f, grid.nodes[i].z);
      report.defect.sup = std::max(report.defect.sup, defect_values[i]);
      report.defect.integral += grid.nodes[i].weight * defect_values[i];
    } catch (const NumericalError&) {
      ++report.defect.rank_deficient_nodes;
    }
  }

  // pointwise growth of sqrt(defect) (1 - |z|) on rings
  report.defect.ring_radii = config.rings;
  for (const double r : config.rings) {
    double sup = 0.0;
    const int samples = r == 0.0 ? 1 : config.ring_samples;
    for (int l = 0; l < samples; ++l) {
      const Complex z = std::polar(r, 2.0 * std::numbers::pi * l / config.ring_samples);
      try {
        sup = std::max(sup, std::sqrt(curvature_defect(f, z)) * (1.0 - r));
      } catch (const NumericalError&) {
        ++report.defect.rank_deficient_nodes;
      }
    }
    report.defect.ring_sup_scaled.push_back(sup);
  }

  const auto defect_fn = [&](Complex z) { return curvature_defect(f, z); };

  report.carleson = carleson_constant(
      [&](Complex z) { return curvature_defect(f, z) * (1.0 - std::abs(z)); }, grid,
      config.level_lo, config.level_hi);

  report.green =
      bounded_solution_estimate(defect_fn, config.rings, grid, config.ring_samples);

  report.intertwiner = intertwiner_sweep(f, config.degrees);

  const SpaceParams model_params{f.order, config.model_degree, f.rows};
  const ModelOperator model = model_operator(f, model_params);
  report.model_invariance_residual = model.invariance_residual;
  report.hyper = defect_chain_check(model.matrix, f.order, config.psd_tol);
  report.power_decay = power_decay_check(model, config.power_k, config.seed);

  // statement flags with their numeric evidence
  {
    StatementVerdict v;
    v.statement = "frame_bounds";
    const bool ok = !report.bounds.rank_deficient;
    v.evidence.push_back({"c_low", report.bounds.c_low, 1e-12, ok});
    v.evidence.push_back({"c", report.bounds.c, 0.0, ok});
    v.flag = ok ? Flag::kPass : Flag::kFail;
    report.verdict.push_back(v);
  }
  {
    StatementVerdict v;
    v.statement = "intertwiner";
    const auto& cond = report.intertwiner.condition;
    double rel_change = 0.0;
    if (cond.size() >= 2) {
      rel_change = std::abs(cond.back() - cond[cond.size() - 2]) / cond[cond.size() - 2];
    }
    const bool stabilized = cond.size() >= 2 && rel_change < 0.01;
    v.evidence.push_back({"condition", cond.back(), 0.0, true});
    v.evidence.push_back({"condition_rel_change", rel_change, 0.01, stabilized});
    if (report.intertwiner.has_left_inverse) {
      v.evidence.push_back({"left_identity_residual", report.intertwiner.left_identity_residual,
                            1e-8, report.intertwiner.left_identity_residual <= 1e-8});
    }
    v.flag = stabilized ? Flag::kPass : Flag::kInconclusive;
    report.verdict.push_back(v);
  }
  {
    StatementVerdict v;
    v.statement = "green_potential";
    v.flag = trend_flag(report.green.verdict);
    const double sup =
        report.green.sup_abs.empty()
            ? 0.0
            : *std::max_element(report.green.sup_abs.begin(), report.green.sup_abs.end());
    v.evidence.push_back({"sup_abs", sup, 0.0, v.flag == Flag::kPass});
    report.verdict.push_back(v);
  }
  {
    StatementVerdict v;
    v.statement = "carleson";
    // stability of the cumulative estimate beyond the reference level
    const auto& levels = report.carleson.levels;
    double ref = 0.0;
    for (const auto& row : levels) {
      if (row.level <= 3 || ref == 0.0) ref = row.cumulative_max;
    }
    const double last = levels.empty() ? 0.0 : levels.back().cumulative_max;
    Flag flag = Flag::kInconclusive;
    if (last == 0.0) {
      flag = Flag::kPass;
    } else if (ref > 0.0 && last <= 2.0 * ref) {
      flag = Flag::kPass;
    } else if (ref > 0.0 && last > 4.0 * ref) {
      flag = Flag::kFail;
    }
    v.evidence.push_back({"estimate", report.carleson.estimate, 0.0, flag == Flag::kPass});
    v.evidence.push_back({"stability_ratio", ref > 0.0 ? last / ref : 1.0, 2.0,
                          flag == Flag::kPass});
    v.flag = flag;
    report.verdict.push_back(v);
  }
  {
    StatementVerdict v;
    v.statement = "pointwise_growth";
    const Trend t = ring_trend(report.defect.ring_sup_scaled);
    v.flag = trend_flag(t);
    const double sup = report.defect.ring_sup_scaled.empty()
                           ? 0.0
                           : *std::max_element(report.defect.ring_sup_scaled.begin(),
                                               report.defect.ring_sup_scaled.end());
    v.evidence.push_back({"sup_scaled_defect", sup, 0.0, v.flag == Flag::kPass});
    report.verdict.push_back(v);
  }
  {
    StatementVerdict v;
    v.statement = "hypercontraction";
    if (report.hyper.status == PsdStatus::kSolverError) {
      v.flag = Flag::kInconclusive;
    } else {
      v.flag = report.hyper.passed ? Flag::kPass : Flag::kFail;
    }
    for (const auto& level : report.hyper.levels) {
      v.evidence.push_back({"min_eig_level_" + std::to_string(level.level),
                            level.min_eigenvalue, config.psd_tol, level.psd});
    }
    v.evidence.push_back({"model_invariance_residual", report.model_invariance_residual, 1e-10,
                          report.model_invariance_residual <= 1e-10});
    report.verdict.push_back(v);
  }

  report.overall = Flag::kPass;
  for (const auto& v : report.verdict) {
    if (v.flag == Flag::kFail) {
      report.overall = Flag::kFail;
      break;
    }
    if (v.flag == Flag::kInconclusive) report.overall = Flag::kInconclusive;
  }
  return report;
}

std::string report_to_json(const SimilarityReport& report, const ReportConfig& config) {
  ordered_json doc;
  doc["space"] = {{"n", report.order}, {"e_dim", report.e_dim}, {"m", report.m}};
  doc["config"] = {
      {"degrees", config.degrees},
      {"grid", {{"nr", config.grid_nr}, {"ntheta", config.grid_ntheta}, {"radius", config.grid_radius}}},
      {"rings", config.rings},
      {"levels", {config.level_lo, config.level_hi}},
      {"model_degree", config.model_degree},
      {"seed", config.seed},
  };
  doc["frame_bounds"] = {{"c_low", report.bounds.c_low},
                         {"c_high", report.bounds.c_high},
                         {"c", report.bounds.c},
                         {"rank_deficient", report.bounds.rank_deficient}};
  doc["defect"] = {{"sup", report.defect.sup},
                   {"integral", report.defect.integral},
                   {"rank_deficient_nodes", report.defect.rank_deficient_nodes},
                   {"ring_radii", report.defect.ring_radii},
                   {"ring_sup_scaled", report.defect.ring_sup_scaled}};
  {
    ordered_json rows = ordered_json::array();
    for (const auto& level : report.carleson.levels) {
      rows.push_back({{"level", level.level},
                      {"box_mass_max", level.box_mass_max},
                      {"ratio_max", level.ratio_max},
                      {"cumulative_max", level.cumulative_max}});
    }
    doc["carleson"] = {{"estimate", report.carleson.estimate}, {"levels", rows}};
  }
  doc["green"] = {{"rings", report.green.rings},
                  {"sup_abs", report.green.sup_abs},
                  {"domain_radii", report.green.domain_radii},
                  {"domain_sup", report.green.domain_sup},
                  {"verdict", trend_name(report.green.verdict)},
                  {"caveat",
                   "per-ring trend on compact subsets; numerics cannot certify a sup over the "
                   "whole disk"}};
  {
    ordered_json sweep = ordered_json::array();
    for (size_t i = 0; i < report.intertwiner.degrees.size(); ++i) {
      sweep.push_back({{"degree", report.intertwiner.degrees[i]},
                       {"sigma_max", report.intertwiner.sigma_max[i]},
                       {"sigma_min", report.intertwiner.sigma_min[i]},
                       {"condition", report.intertwiner.condition[i]}});
    }
    ordered_json block = {{"sweep", sweep},
                          {"note", "condition numbers are relative to the supplied frame"}};
    if (report.intertwiner.has_left_inverse) {
      block["left_inverse_norm"] = report.intertwiner.left_inverse_norm;
      block["left_identity_residual"] = report.intertwiner.left_identity_residual;
    }
    doc["intertwiner"] = block;
  }
  {
    ordered_json levels = ordered_json::array();
    for (const auto& level : report.hyper.levels) {
      levels.push_back({{"level", level.level},
                        {"min_eigenvalue", level.min_eigenvalue},
                        {"psd", level.psd}});
    }
    doc["hypercontraction"] = {
        {"passed", report.hyper.passed},
        {"solver_error", report.hyper.status == PsdStatus::kSolverError},
        {"levels", levels},
        {"model_invariance_residual", report.model_invariance_residual}};
  }
  {
    ordered_json decay = ordered_json::array();
    for (const auto& row : report.power_decay) {
      decay.push_back({{"vector", row.label}, {"norms", row.norms}});
    }
    doc["power_decay"] = decay;
  }
  {
    ordered_json verdicts = ordered_json::array();
    for (const auto& v : report.verdict) {
      ordered_json evidence = ordered_json::array();
      for (const auto& e : v.evidence) {
        evidence.push_back({{"metric", e.metric},
                            {"value", e.value},
                            {"tolerance", e.tolerance},
                            {"pass", e.pass}});
      }
      verdicts.push_back(
          {{"statement", v.statement}, {"flag", flag_name(v.flag)}, {"evidence", evidence}});
    }
    doc["verdict"] = {{"statements", verdicts}, {"overall", flag_name(report.overall)}};
  }
  return doc.dump(2);
}

}  // namespace bergsim
