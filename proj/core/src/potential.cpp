#include "bergsim/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bergsim/frame.hpp"

namespace bergsim {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  return a < 0.0 ? a + 2.0 * kPi : a;
}

DiskGrid build_from_edges(std::vector<double> edges, int n_theta, double outer_radius) {
  DiskGrid grid;
  grid.ring_edges = std::move(edges);
  grid.n_theta = n_theta;
  grid.outer_radius = outer_radius;
  const int nr = grid.n_rings();
  const double dtheta = 2.0 * kPi / n_theta;
  grid.nodes.reserve(static_cast<size_t>(nr) * n_theta);
  for (int k = 0; k < nr; ++k) {
    const double r0 = grid.ring_edges[static_cast<size_t>(k)];
    const double r1 = grid.ring_edges[static_cast<size_t>(k) + 1];
    const double rm = 0.5 * (r0 + r1);
    const double w = rm * (r1 - r0) * dtheta;  // exact cell area
    for (int l = 0; l < n_theta; ++l) {
      const double th = (l + 0.5) * dtheta;
      grid.nodes.push_back({Complex(rm * std::cos(th), rm * std::sin(th)), w});
    }
  }
  return grid;
}

void check_grid_params(int nr, int n_theta, double outer_radius, const char* where) {
  if (nr < 1 || n_theta < 1) throw DomainError(std::string(where) + ": nr, n_theta must be >= 1");
  if (!(outer_radius > 0.0) || !(outer_radius < 1.0)) {
    throw DomainError(std::string(where) + ": outer radius must lie in (0, 1)");
  }
}

}  // namespace

int DiskGrid::cell_index(Complex z) const {
  const double r = std::abs(z);
  if (r >= outer_radius) return -1;
  const auto it = std::upper_bound(ring_edges.begin(), ring_edges.end(), r);
  int ring = static_cast<int>(it - ring_edges.begin()) - 1;
  ring = std::clamp(ring, 0, n_rings() - 1);
  const double dtheta = 2.0 * kPi / n_theta;
  int sector = static_cast<int>(wrap_angle(std::arg(z)) / dtheta);
  sector = std::clamp(sector, 0, n_theta - 1);
  return ring * n_theta + sector;
}

DiskGrid make_grid(int nr, int n_theta, double outer_radius) {
  check_grid_params(nr, n_theta, outer_radius, "make_grid");
  std::vector<double> edges(static_cast<size_t>(nr) + 1);
  for (int j = 0; j <= nr; ++j) edges[static_cast<size_t>(j)] = outer_radius * j / nr;
  return build_from_edges(std::move(edges), n_theta, outer_radius);
}

DiskGrid make_boundary_grid(int nr, int n_theta, double outer_radius) {
  check_grid_params(nr, n_theta, outer_radius, "make_boundary_grid");
  std::vector<double> edges(static_cast<size_t>(nr) + 1);
  edges[0] = 0.0;
  for (int j = 1; j <= nr; ++j) {
    edges[static_cast<size_t>(j)] =
        1.0 - std::pow(1.0 - outer_radius, static_cast<double>(j) / nr);
  }
  edges[static_cast<size_t>(nr)] = outer_radius;
  return build_from_edges(std::move(edges), n_theta, outer_radius);
}

namespace {

double green_sum(const std::vector<double>& node_density, double density_at_lambda,
                 Complex lambda, const DiskGrid& grid) {
  if (std::abs(lambda) >= grid.outer_radius) {
    throw DomainError("green_potential: |lambda| must be < grid outer radius");
  }
  const int sing = grid.cell_index(lambda);
  double acc = 0.0;
  const Complex lc = std::conj(lambda);
  for (int i = 0; i < static_cast<int>(grid.nodes.size()); ++i) {
    if (i == sing) continue;
    const auto& node = grid.nodes[static_cast<size_t>(i)];
    const double rho = node_density[static_cast<size_t>(i)];
    if (rho == 0.0) continue;
    if (!std::isfinite(rho)) throw NumericalError("green_potential: density not finite at a node");
    const double num = std::norm(node.z - lambda);
    const double den = std::norm(1.0 - lc * node.z);
    acc += node.weight * rho * 0.5 * std::log(num / den);
  }
  if (sing >= 0) {
    // closed-form integral of log|z - lambda| over the equal-area disk,
    // plus the smooth Blaschke-denominator factor frozen at lambda
    const double wc = grid.nodes[static_cast<size_t>(sing)].weight;
    const double r_eq = std::sqrt(wc / kPi);
    double cell = wc * (std::log(r_eq) - 0.5);
    cell -= wc * std::log(std::abs(1.0 - lc * lambda));
    acc += density_at_lambda * cell;
  }
  return (2.0 / kPi) * acc;
}

}  // namespace

double green_potential(const std::vector<double>& node_density, double density_at_lambda,
                       Complex lambda, const DiskGrid& grid) {
  if (node_density.size() != grid.nodes.size()) {
    throw DimensionError("green_potential: node density size mismatch");
  }
  return green_sum(node_density, density_at_lambda, lambda, grid);
}

double green_potential(const DensityFn& density, Complex lambda, const DiskGrid& grid) {
  std::vector<double> values(grid.nodes.size());
  for (size_t i = 0; i < grid.nodes.size(); ++i) values[i] = density(grid.nodes[i].z);
  return green_sum(values, density(lambda), lambda, grid);
}

double laplacian_fd(const std::function<double(Complex)>& u, Complex z, double h) {
  if (!(h > 0.0)) throw DomainError("laplacian_fd: step must be > 0");
  const Complex ih(0.0, h);
  return (u(z + h) + u(z - h) + u(z + ih) + u(z - ih) - 4.0 * u(z)) / (4.0 * h * h);
}

double poisson_residual(const DensityFn& density, const DiskGrid& grid,
                        const std::vector<Complex>& sample, double h) {
  std::vector<double> values(grid.nodes.size());
  for (size_t i = 0; i < grid.nodes.size(); ++i) values[i] = density(grid.nodes[i].z);
  const auto g = [&](Complex w) { return green_sum(values, density(w), w, grid); };
  double sup = 0.0;
  for (const Complex lambda : sample) {
    if (std::abs(lambda) + h >= grid.outer_radius) {
      throw DomainError("poisson_residual: sample point too close to the grid boundary");
    }
    sup = std::max(sup, std::abs(laplacian_fd(g, lambda, h) - density(lambda)));
  }
  return sup;
}

CarlesonTable carleson_constant(const DensityFn& density, const DiskGrid& grid,
                                int level_lo, int level_hi) {
  if (level_lo < 0 || level_hi < level_lo) {
    throw DomainError("carleson_constant: need 0 <= level_lo <= level_hi");
  }
  // per-node mass, plus depth 1 - |z| and angle for box membership
  struct Entry {
    double depth;
    double angle;
    double mass;
  };
  std::vector<Entry> entries;
  entries.reserve(grid.nodes.size());
  for (const auto& node : grid.nodes) {
    const double rho = density(node.z);
    if (!std::isfinite(rho)) {
      throw NumericalError("carleson_constant: density not finite at a node");
    }
    if (rho == 0.0) continue;
    entries.push_back({1.0 - std::abs(node.z), wrap_angle(std::arg(node.z)), node.weight * rho});
  }

  CarlesonTable table;
  double cumulative = 0.0;
  for (int level = level_lo; level <= level_hi; ++level) {
    const double len = std::ldexp(1.0, -level);  // |I| = 2^-level radians
    // overlapping arcs starting at multiples of len/2; bin sums first
    const int n_bins = static_cast<int>(std::ceil(2.0 * kPi / (0.5 * len)));
    std::vector<double> bins(static_cast<size_t>(n_bins), 0.0);
    for (const auto& e : entries) {
      if (e.depth > len) continue;
      int b = static_cast<int>(e.angle / (0.5 * len));
      b = std::min(b, n_bins - 1);
      bins[static_cast<size_t>(b)] += e.mass;
    }
    CarlesonLevel row;
    row.level = level;
    for (int b = 0; b < n_bins; ++b) {
      const double arc_mass = bins[static_cast<size_t>(b)] + bins[static_cast<size_t>((b + 1) % n_bins)];
      row.box_mass_max = std::max(row.box_mass_max, arc_mass);
    }
    if (!std::isfinite(row.box_mass_max)) {
      throw NumericalError("carleson_constant: non-finite box integral");
    }
    row.ratio_max = row.box_mass_max / len;
    cumulative = std::max(cumulative, row.ratio_max);
    row.cumulative_max = cumulative;
    table.levels.push_back(row);
  }
  table.estimate = cumulative;
  return table;
}

std::vector<GrowthRow> derivative_growth_check(const Frame& f,
                                               const std::vector<double>& radii,
                                               int n_theta) {
  std::vector<GrowthRow> rows;
  for (const double r : radii) {
    if (!(r >= 0.0) || !(r < 1.0)) throw DomainError("derivative_growth_check: radii must be in [0, 1)");
    GrowthRow row;
    row.radius = r;
    for (int l = 0; l < n_theta; ++l) {
      const double th = 2.0 * kPi * l / n_theta;
      const Complex z = std::polar(r, th);
      row.sup = std::max(row.sup, f.deriv(z).norm() * (1.0 - r));
    }
    rows.push_back(row);
  }
  return rows;
}

UchiyamaReport uchiyama_check(const Frame& f, const DiskGrid& grid, double h) {
  UchiyamaReport report;
  const auto norm_sq = [&](Complex z) { return f.eval(z).squaredNorm(); };
  // interior sample kept an h-margin inside the grid
  const double r_max = std::min(0.85, grid.outer_radius - 4.0 * h);
  for (int i = 0; i < 5; ++i) {
    const double r = r_max * i / 4.0;
    for (int l = 0; l < 8; ++l) {
      const Complex z = std::polar(r, 2.0 * kPi * (l + 0.31) / 8.0);
      const double lap = laplacian_fd(norm_sq, z, h);
      report.fd_residual_sup =
          std::max(report.fd_residual_sup, std::abs(lap - f.deriv(z).squaredNorm()));
    }
  }
  report.carleson = carleson_constant(
      [&](Complex z) { return f.deriv(z).squaredNorm() * (1.0 - std::abs(z)); }, grid, 0, 8);
  return report;
}

std::string trend_name(Trend t) {
  switch (t) {
    case Trend::kBoundedLooking: return "bounded-looking";
    case Trend::kGrowing: return "growing";
    case Trend::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

// trend of a nonnegative series over its last three steps; thresholds are an
// engineering choice, surfaced as such in reports
Trend series_trend(const std::vector<double>& values) {
  const size_t n = values.size();
  if (n < 4) return Trend::kInconclusive;
  const double eps = 1e-14;
  bool all_small = true;
  bool bounded = true;
  bool growing = true;
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

PotentialField bounded_solution_estimate(const DensityFn& density,
                                         const std::vector<double>& rings,
                                         const DiskGrid& grid, int n_theta) {
  PotentialField field;
  field.rings = rings;
  std::vector<double> values(grid.nodes.size());
  for (size_t i = 0; i < grid.nodes.size(); ++i) values[i] = density(grid.nodes[i].z);
  for (const double r : rings) {
    if (!(r >= 0.0) || !(r < grid.outer_radius)) {
      throw DomainError("bounded_solution_estimate: ring radius outside the grid");
    }
    double sup = 0.0;
    const int samples = r == 0.0 ? 1 : n_theta;
    for (int l = 0; l < samples; ++l) {
      const Complex lambda = std::polar(r, 2.0 * kPi * l / n_theta);
      sup = std::max(sup, std::abs(green_sum(values, density(lambda), lambda, grid)));
    }
    field.sup_abs.push_back(sup);
  }

  // |G| at fixed probes while the integration domain is cut at dyadic radii
  // 1 - 2^-k; grid nodes come ring-major, so one radial pass snapshots every
  // cutoff. Near the rim a kernel-integrable density adds geometrically less
  // per halving while a log-divergent one keeps adding a constant amount.
  for (int k = 1; ; ++k) {
    const double r = 1.0 - std::ldexp(1.0, -k);
    if (r >= grid.outer_radius) break;
    field.domain_radii.push_back(r);
  }
  field.domain_radii.push_back(grid.outer_radius);
  field.domain_sup.assign(field.domain_radii.size(), 0.0);
  const Complex probes[] = {Complex(0.0, 0.0), std::polar(0.35, 0.4), std::polar(0.55, 2.7)};
  for (const Complex lambda : probes) {
    const int sing = grid.cell_index(lambda);
    const Complex lc = std::conj(lambda);
    double acc = 0.0;
    size_t node = 0;
    for (size_t k = 0; k < field.domain_radii.size(); ++k) {
      for (; node < grid.nodes.size() && std::abs(grid.nodes[node].z) <= field.domain_radii[k];
           ++node) {
        const auto& cell = grid.nodes[node];
        if (static_cast<int>(node) == sing) {
          const double r_eq = std::sqrt(cell.weight / kPi);
          acc += density(lambda) * (cell.weight * (std::log(r_eq) - 0.5) -
                                    cell.weight * std::log(std::abs(1.0 - lc * lambda)));
          continue;
        }
        const double rho = values[node];
        if (rho == 0.0) continue;
        acc += cell.weight * rho * 0.5 *
               std::log(std::norm(cell.z - lambda) / std::norm(1.0 - lc * cell.z));
      }
      field.domain_sup[k] = std::max(field.domain_sup[k], std::abs((2.0 / kPi) * acc));
    }
  }

  const Trend ring_trend = series_trend(field.sup_abs);
  const Trend domain_trend = series_trend(field.domain_sup);
  if (ring_trend == Trend::kGrowing || domain_trend == Trend::kGrowing) {
    field.verdict = Trend::kGrowing;
  } else if (ring_trend == Trend::kBoundedLooking && domain_trend == Trend::kBoundedLooking) {
    field.verdict = Trend::kBoundedLooking;
  } else {
    field.verdict = Trend::kInconclusive;
  }
  return field;
}

}  // namespace bergsim
