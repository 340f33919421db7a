#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bergsim/bundle.hpp"
#include "bergsim/frame.hpp"
#include "bergsim/potential.hpp"
#include "bergsim/space.hpp"
#include "bergsim/types.hpp"

namespace bergsim {

/// Canonical intertwiner for the frame: the conjugate-analytic Toeplitz
/// operator with symbol built from F, mapping the m-fiber truncation into the
/// E-fiber truncation. On kernel eigenvectors it acts by
/// k_{conj(lambda)} (x) e  |->  k_{conj(lambda)} (x) F(lambda) e,
/// and it commutes with the backward shifts on the truncation interior.
Matrix canonical_intertwiner(const Frame& f, const SpaceParams& p);

/// Restriction of the backward shift to the range of the canonical
/// intertwiner, presented on an orthonormal column basis from column-pivoted
/// QR. The range is shift-invariant on the truncation, so the compression is
/// a genuine restriction.
struct ModelOperator {
  SpaceParams params;  // ambient space, fiber_dim = dim E
  int frame_cols = 0;  // m
  Matrix subspace_basis;
  Matrix matrix;
  double invariance_residual = 0.0;
};

ModelOperator model_operator(const Frame& f, const SpaceParams& p);

struct IntertwinerReport {
  std::vector<int> degrees;
  std::vector<double> sigma_max;
  std::vector<double> sigma_min;
  std::vector<double> condition;
  bool has_left_inverse = false;
  double left_inverse_norm = 0.0;        // ||T_{Q_G}|| at the largest degree
  double left_identity_residual = 0.0;   // ||T_{Q_G} T_{Q_F} - I||
};

/// Extremal singular values of the canonical intertwiner per truncation
/// degree. When the frame carries an analytic left inverse G with G F = I,
/// the product T_{Q_G} T_{Q_F} is verified to be the identity and ||T_{Q_G}||
/// is reported as a constructive left-invertibility certificate.
IntertwinerReport intertwiner_sweep(const Frame& f, const std::vector<int>& degrees);

struct PowerDecayRow {
  std::string label;
  std::vector<double> norms;  // ||T^k h||, k = 1..K
};

/// ||T^k h|| tables for kernel-type and seeded random test vectors.
std::vector<PowerDecayRow> power_decay_check(const ModelOperator& model, int k_max,
                                             std::uint64_t seed, int n_random = 2);

/// For a contraction T (||T|| <= 1 + tol required), reports the minimal
/// eigenvalues of the binomial defects at levels 1..order. Positivity of the
/// whole chain is expected whenever the top level is positive.
HypercontractionReport defect_chain_check(const Matrix& T, int order, double tol);

enum class Flag { kPass, kFail, kInconclusive };

std::string flag_name(Flag f);

struct Evidence {
  std::string metric;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct StatementVerdict {
  std::string statement;
  Flag flag = Flag::kInconclusive;
  std::vector<Evidence> evidence;
};

struct DefectFieldStats {
  double sup = 0.0;
  double integral = 0.0;
  int rank_deficient_nodes = 0;
  std::vector<double> ring_radii;
  std::vector<double> ring_sup_scaled;  // sup over ring of sqrt(defect) (1-|z|)
};

struct ReportConfig {
  std::vector<int> degrees = {50, 100, 200};
  int grid_nr = 128;
  int grid_ntheta = 128;
  double grid_radius = 1.0 - 0x1p-10;
  int bounds_nr = 48;
  int bounds_ntheta = 64;
  double bounds_radius = 1.0 - 0x1p-24;
  std::vector<double> rings = {0.0, 0.3, 0.5, 0.7, 0.85, 0.95};
  int ring_samples = 64;
  int level_lo = 0;
  int level_hi = 8;
  double psd_tol = 1e-10;
  int model_degree = 60;
  int power_k = 30;
  std::uint64_t seed = 1;
};

struct SimilarityReport {
  int order = 1;
  int e_dim = 1;
  int m = 1;
  FrameBounds bounds;
  DefectFieldStats defect;
  CarlesonTable carleson;
  PotentialField green;
  IntertwinerReport intertwiner;
  double model_invariance_residual = 0.0;
  HypercontractionReport hyper;
  std::vector<PowerDecayRow> power_decay;
  std::vector<StatementVerdict> verdict;
  Flag overall = Flag::kInconclusive;
};

/// Runs every sub-analysis and aggregates the per-statement verdict flags.
/// Sub-failures are recorded in the relevant section; the report is still
/// emitted. Condition numbers are relative to the supplied frame: any other
/// bundle map differs from the canonical one by an analytic automorphism.
SimilarityReport assemble_report(const Frame& f, const ReportConfig& config);

/// Deterministic JSON serialization (fixed key order, value/tolerance/pass
/// triples for every verdict-bearing number).
std::string report_to_json(const SimilarityReport& report, const ReportConfig& config);

}  // namespace bergsim
