#include <doctest.h>

#include "bergsim/verify.hpp"

using namespace bergsim;

namespace {

// shrunk sizes: the full-budget run lives in the acceptance suite
VerifyConfig quick_config() {
  VerifyConfig config;
  config.orders = {1, 2, 3};
  config.kernel_degree = 150;
  config.kernel_samples = 8;
  config.bundle_degree = 150;
  config.bundle_samples = 10;
  config.tensor_degree = 80;
  config.tensor_frames = 4;
  config.frame_count = 6;
  config.point_count = 8;
  config.toeplitz_degree = 30;
  return config;
}

}  // namespace

TEST_CASE("verify suites pass at reduced budgets") {
  const VerifyReport report = run_verify_suites(quick_config());
  for (const auto& suite : report.suites) {
    INFO(suite.name, " residual ", suite.max_residual, " tol ", suite.tolerance);
    CHECK(suite.pass);
  }
  CHECK(report.all_pass);
  CHECK(report.suites.size() == 5);
}

TEST_CASE("injected wrong weight order makes the suites fail") {
  VerifyConfig config = quick_config();
  config.weight_order_offset = 1;
  const VerifyReport report = run_verify_suites(config);
  CHECK_FALSE(report.all_pass);
}

TEST_CASE("suite results are reproducible for a fixed seed") {
  VerifyConfig config = quick_config();
  config.seed = 1234;
  const VerifyReport a = run_verify_suites(config);
  const VerifyReport b = run_verify_suites(config);
  REQUIRE(a.suites.size() == b.suites.size());
  for (size_t i = 0; i < a.suites.size(); ++i) {
    CHECK(a.suites[i].max_residual == b.suites[i].max_residual);
  }
}
