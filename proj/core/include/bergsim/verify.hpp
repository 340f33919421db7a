#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bergsim/frame.hpp"
#include "bergsim/types.hpp"

namespace bergsim {

/// Parameters of the built-in identity suites. The defaults match the
/// tolerances the library promises; tests tighten or widen per scenario.
struct VerifyConfig {
  std::vector<int> orders = {1, 2, 3, 5};
  std::vector<int> toeplitz_orders = {1, 2, 3};
  int kernel_degree = 300;     // truncation for kernel identity sums
  int kernel_samples = 20;     // lambda values, |lambda| <= 0.7
  int bundle_degree = 200;     // truncation for the shift-bundle suite
  int bundle_samples = 40;     // lambda values, |lambda| <= 0.9
  int tensor_degree = 150;
  int tensor_frames = 10;
  int frame_count = 20;        // random frames for projection identities
  int point_count = 20;        // random points per frame
  int toeplitz_degree = 50;
  double kernel_tol = 1e-10;
  double bundle_rel_tol = 1e-6;
  double projection_tol = 1e-10;
  double tensor_tol = 1e-8;
  double toeplitz_tol = 1e-12;
  std::uint64_t seed = 1;

  /// Fault injection for harness self-checks: shifts the order used in the
  /// closed-form targets, so a nonzero value must make the suites fail.
  int weight_order_offset = 0;
};

struct SuiteResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool all_pass = false;
};

VerifyReport run_verify_suites(const VerifyConfig& config);

/// Deterministic random polynomial frame with a unit leading block, so the
/// Gram matrix stays well conditioned on the whole disk.
Frame random_polynomial_frame(int order, int e_dim, int m, int poly_degree,
                              std::mt19937_64& rng);

}  // namespace bergsim
