#include <doctest.h>

#include <cmath>
#include <random>

#include "bergsim/similarity.hpp"
#include "bergsim/verify.hpp"

using namespace bergsim;

namespace {

Frame one_z_frame(int order) {
  Frame f;
  f.order = order;
  f.rows = 2;
  f.cols = 1;
  f.entries = {Atom::poly({Complex(1.0)}), Atom::poly({Complex(0.0), Complex(1.0)})};
  return f;
}

Frame one_z_frame_with_left_inverse(int order) {
  Frame f = one_z_frame(order);
  // G = (1, 0) satisfies G F = 1
  f.left_inverse = std::vector<Atom>{Atom::poly({Complex(1.0)}), Atom::poly({Complex(0.0)})};
  return f;
}

}  // namespace

TEST_CASE("canonical intertwiner") {
  SUBCASE("identity frame maps to the identity") {
    const SpaceParams p{2, 10, 2};
    const Matrix a = canonical_intertwiner(identity_frame(2, 2), p);
    CHECK((a - Matrix::Identity(22, 22)).norm() == 0.0);
  }
  SUBCASE("scaling the frame scales the operator") {
    Frame f = identity_frame(2, 2);
    for (auto& atom : f.entries) atom = Atom::scale(2.0, atom);
    const SpaceParams p{2, 10, 2};
    const Matrix a = canonical_intertwiner(f, p);
    CHECK((a - 2.0 * Matrix::Identity(22, 22)).norm() == 0.0);
  }
  SUBCASE("eigenvector mapping for the (1, z) frame") {
    const SpaceParams p{2, 100, 2};
    const Frame f = one_z_frame(2);
    const Matrix a = canonical_intertwiner(f, p);
    const Complex lambda(0.3, 0.0);
    Vector e(1);
    e[0] = 1.0;
    const Vector lhs = a * kernel_tensor_vector(p.with_fiber(1), lambda, e);
    Vector fiber(2);
    fiber << 1.0, lambda;
    const Vector rhs = kernel_tensor_vector(p, lambda, fiber);
    CHECK((lhs - rhs).norm() < 1e-12);
  }
}

TEST_CASE("model operator") {
  SUBCASE("identity frame reproduces the backward shift") {
    const SpaceParams p{2, 30, 1};
    const ModelOperator model = model_operator(identity_frame(2, 1), p);
    CHECK(model.invariance_residual < 1e-12);
    // same singular values as the shift itself
    Eigen::BDCSVD<Matrix> svd_model(model.matrix);
    Eigen::BDCSVD<Matrix> svd_shift(backward_shift(p));
    CHECK((svd_model.singularValues() - svd_shift.singularValues()).norm() < 1e-10);
    // nilpotent truncation: spectrum is {0}
    Matrix power = Matrix::Identity(model.matrix.rows(), model.matrix.cols());
    for (int i = 0; i <= p.degree; ++i) power = power * model.matrix;
    CHECK(power.norm() < 1e-12);
  }
  SUBCASE("invariance residual for polynomial frames") {
    std::mt19937_64 rng(43);
    const Frame f = random_polynomial_frame(2, 3, 2, 3, rng);
    const SpaceParams p{2, 40, 3};
    CHECK(model_operator(f, p).invariance_residual < 1e-10);
  }
  SUBCASE("kernel directions are near-eigenvectors") {
    const Frame f = one_z_frame(2);
    const SpaceParams p{2, 100, 2};
    const ModelOperator model = model_operator(f, p);
    for (const Complex lambda : {Complex(0.5, 0.0), Complex(-0.2, 0.4)}) {
      Vector fiber(2);
      fiber << 1.0, lambda;
      Vector v = model.subspace_basis.adjoint() * kernel_tensor_vector(p, lambda, fiber);
      v /= v.norm();
      CHECK((model.matrix * v - lambda * v).norm() < 1e-6);
    }
  }
  SUBCASE("fiber mismatch is rejected") {
    CHECK_THROWS_AS(model_operator(one_z_frame(2), SpaceParams{2, 20, 3}), DimensionError);
  }
}

TEST_CASE("intertwiner sweep") {
  SUBCASE("identity frame has condition one at every degree") {
    const IntertwinerReport r = intertwiner_sweep(identity_frame(2, 2), {10, 20, 40});
    for (const double c : r.condition) CHECK(c == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("(1, z) condition stabilizes and respects the frame bounds") {
    const IntertwinerReport r = intertwiner_sweep(one_z_frame(2), {50, 100, 200});
    REQUIRE(r.condition.size() == 3);
    const double change = std::abs(r.condition[2] - r.condition[1]) / r.condition[1];
    CHECK(change < 0.01);
    CHECK(r.condition[2] <= std::sqrt(2.0) * 1.05);
  }
  SUBCASE("degrading family: condition grows as epsilon shrinks") {
    double previous = 0.0;
    for (const double eps : {0.5, 0.1, 0.02}) {
      Frame f;
      f.order = 2;
      f.rows = 2;
      f.cols = 1;
      f.entries = {Atom::poly({Complex(eps)}), Atom::blaschke(0.5)};
      const IntertwinerReport r = intertwiner_sweep(f, {60});
      CHECK(r.condition[0] > previous);
      previous = r.condition[0];
    }
  }
  SUBCASE("left inverse certificate") {
    const Frame f = one_z_frame_with_left_inverse(2);
    const IntertwinerReport r = intertwiner_sweep(f, {40, 80});
    CHECK(r.has_left_inverse);
    CHECK(r.left_identity_residual < 1e-12);
    CHECK(r.left_inverse_norm >= 1.0);
  }
  SUBCASE("wrong left inverse is a configuration error") {
    Frame f = one_z_frame(2);
    f.left_inverse = std::vector<Atom>{Atom::poly({Complex(0.5)}), Atom::poly({Complex(0.0)})};
    CHECK_THROWS_AS(intertwiner_sweep(f, {40}), DomainError);
  }
  SUBCASE("degree list must increase") {
    CHECK_THROWS_AS(intertwiner_sweep(one_z_frame(2), {40, 40}), DomainError);
  }
}

TEST_CASE("power decay") {
  const Frame f = one_z_frame(2);
  const SpaceParams p{2, 25, 2};
  const ModelOperator model = model_operator(f, p);
  const auto rows = power_decay_check(model, p.degree + 1, 7);
  REQUIRE(!rows.empty());
  for (const auto& row : rows) {
    // contraction: norms never exceed the unit starting norm
    for (const double n : row.norms) CHECK(n <= 1.0 + 1e-12);
    // truncation nilpotency at k = N + 1
    CHECK(row.norms.back() < 1e-12);
  }
  // kernel vector decays monotonically
  const auto& kernel_row = rows.front();
  for (size_t k = 1; k < kernel_row.norms.size(); ++k) {
    CHECK(kernel_row.norms[k] <= kernel_row.norms[k - 1] + 1e-12);
  }
}

TEST_CASE("defect chain check") {
  SUBCASE("model operator of a polynomial frame at order 2") {
    std::mt19937_64 rng(47);
    const Frame f = random_polynomial_frame(2, 3, 2, 2, rng);
    const SpaceParams p{2, 40, 3};
    const ModelOperator model = model_operator(f, p);
    const auto report = defect_chain_check(model.matrix, 2, 1e-10);
    CHECK(report.passed);
    for (const auto& level : report.levels) CHECK(level.min_eigenvalue >= -1e-10);
  }
  SUBCASE("Hardy backward shift at order 1") {
    const auto report = defect_chain_check(backward_shift({1, 30, 1}), 1, 1e-10);
    CHECK(report.passed);
  }
  SUBCASE("scaled forward shift with order-2 weights") {
    const Matrix t = 0.7 * forward_shift({2, 30, 1});
    const auto report = defect_chain_check(t, 2, 1e-10);
    CHECK(report.passed);
    CHECK(report.levels.size() == 2);
  }
  SUBCASE("expansive operator violates the precondition") {
    const Matrix t = 1.5 * Matrix::Identity(4, 4);
    CHECK_THROWS_AS(defect_chain_check(t, 2, 1e-10), DomainError);
  }
}

TEST_CASE("scale invariance of the diagnostics") {
  const Frame f = one_z_frame(2);
  Frame scaled = f;
  for (auto& atom : scaled.entries) atom = Atom::scale(Complex(0.0, 3.0), atom);

  for (const Complex z : {Complex(0.0, 0.0), Complex(0.3, -0.4)}) {
    CHECK(curvature_defect(f, z) == doctest::Approx(curvature_defect(scaled, z)).epsilon(1e-10));
  }
  const IntertwinerReport rf = intertwiner_sweep(f, {40});
  const IntertwinerReport rs = intertwiner_sweep(scaled, {40});
  CHECK(rs.condition[0] == doctest::Approx(rf.condition[0]).epsilon(1e-10));
  CHECK(rs.sigma_max[0] == doctest::Approx(3.0 * rf.sigma_max[0]).epsilon(1e-10));
}

TEST_CASE("similarity report") {
  ReportConfig config;
  config.degrees = {20, 40, 80};
  config.grid_nr = 48;
  config.grid_ntheta = 48;
  config.model_degree = 30;
  config.power_k = 10;

  SUBCASE("identity frame passes everything") {
    const SimilarityReport report = assemble_report(identity_frame(2, 2), config);
    CHECK(report.overall == Flag::kPass);
    CHECK(report.defect.sup == 0.0);
    CHECK(report.carleson.estimate == 0.0);
    for (const auto& v : report.verdict) CHECK(v.flag == Flag::kPass);
  }
  SUBCASE("(1, z) frame is coherent") {
    const SimilarityReport report = assemble_report(one_z_frame(2), config);
    CHECK(report.overall != Flag::kFail);
    CHECK(report.bounds.c == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(report.green.verdict == Trend::kBoundedLooking);
    CHECK(report.hyper.passed);
  }
  SUBCASE("serialization is deterministic") {
    const Frame f = one_z_frame(2);
    const std::string a = report_to_json(assemble_report(f, config), config);
    const std::string b = report_to_json(assemble_report(f, config), config);
    CHECK(a == b);
    CHECK(!a.empty());
    // every verdict carries value, tolerance and pass fields
    CHECK(a.find("\"tolerance\"") != std::string::npos);
    CHECK(a.find("\"evidence\"") != std::string::npos);
  }
}
