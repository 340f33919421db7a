#include <doctest.h>

#include <cmath>
#include <random>

#include "bergsim/bundle.hpp"
#include "bergsim/space.hpp"
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

}  // namespace

TEST_CASE("projection from the (1, z) frame") {
  const Frame f = one_z_frame(1);

  SUBCASE("hand-evaluated closed form at the origin") {
    const ProjectionPoint pt = projection_from_frame(f, 0.0);
    Matrix proj_expect(2, 2);
    proj_expect << 1, 0, 0, 0;
    Matrix dproj_expect(2, 2);
    dproj_expect << 0, 0, 1, 0;
    CHECK((pt.proj - proj_expect).norm() < 1e-14);
    CHECK((pt.dproj - dproj_expect).norm() < 1e-14);
    CHECK(pt.hs_sq == doctest::Approx(1.0));
  }
  SUBCASE("closed form 1/(1+|z|^2)^2 at general points") {
    for (const Complex z : {Complex(0.4, 0.0), Complex(-0.2, 0.55), Complex(0.0, -0.8)}) {
      const double t = std::norm(z);
      CHECK(projection_from_frame(f, z).hs_sq ==
            doctest::Approx(1.0 / ((1.0 + t) * (1.0 + t))).epsilon(1e-12));
    }
  }
  SUBCASE("constant frame is flat") {
    const ProjectionPoint pt = projection_from_frame(identity_frame(1, 2), Complex(0.3, 0.3));
    CHECK(pt.dproj.norm() == 0.0);
    CHECK(pt.hs_sq == 0.0);
  }
}

TEST_CASE("projection invariants at random frames") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> radius(0.0, 0.8);
  std::uniform_real_distribution<double> angle(0.0, 6.2831853);
  for (int trial = 0; trial < 8; ++trial) {
    const Frame f = random_polynomial_frame(2, 3, 2, 3, rng);
    for (int j = 0; j < 5; ++j) {
      const Complex z = std::polar(radius(rng), angle(rng));
      const ProjectionPoint pt = projection_from_frame(f, z);
      CHECK((pt.proj * pt.proj - pt.proj).norm() < 1e-10);
      CHECK((pt.proj - Matrix(pt.proj.adjoint())).norm() < 1e-10);
      CHECK((pt.proj * pt.dproj).norm() < 1e-8);
    }
  }
}

TEST_CASE("projection identity residuals") {
  CHECK(projection_identity_residuals(identity_frame(1, 2), Complex(0.2, 0.1)) ==
        std::pair<double, double>(0.0, 0.0));

  const auto [r1, r2] = projection_identity_residuals(one_z_frame(1), Complex(0.4, 0.2));
  CHECK(r1 < 1e-12);
  CHECK(r2 < 1e-12);

  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> radius(0.0, 0.8);
  std::uniform_real_distribution<double> angle(0.0, 6.2831853);
  const Frame f = random_polynomial_frame(3, 3, 2, 3, rng);
  double worst = 0.0;
  for (int j = 0; j < 20; ++j) {
    const Complex z = std::polar(radius(rng), angle(rng));
    const auto [a, b] = projection_identity_residuals(f, z);
    worst = std::max({worst, a, b});
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("rank deficiency is refused, not regularized") {
  Frame f;
  f.order = 1;
  f.rows = 2;
  f.cols = 1;
  // both entries vanish at z = 0.5
  f.entries = {Atom::blaschke(0.5), Atom::scale(2.0, Atom::blaschke(0.5))};
  CHECK_THROWS_AS(projection_from_frame(f, 0.5), NumericalError);
}

TEST_CASE("shift bundle projection") {
  SUBCASE("at the origin") {
    const SpaceParams p{3, 80, 1};
    const ProjectionPoint pt = shift_bundle_projection(p, 0.0);
    CHECK(std::abs(pt.proj(0, 0) - Complex(1.0)) < 1e-14);
    CHECK(pt.proj.norm() == doctest::Approx(1.0));
    CHECK(pt.hs_sq == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("derivative has rank one") {
    const SpaceParams p{2, 120, 1};
    const ProjectionPoint pt = shift_bundle_projection(p, Complex(0.4, 0.3));
    Eigen::BDCSVD<Matrix> svd(pt.dproj);
    const auto& sigma = svd.singularValues();
    CHECK(sigma(0) > 1e-8);
    CHECK(sigma(1) < 1e-10 * sigma(0));
  }
  SUBCASE("curvature identity n/(1-|lambda|^2)^2") {
    for (const int n : {1, 2, 5}) {
      const SpaceParams p{n, 200, 1};
      for (const Complex lambda : {Complex(0.0, 0.0), Complex(0.6, -0.3), Complex(-0.85, 0.2)}) {
        const double t = std::norm(lambda);
        const double expect = n / ((1.0 - t) * (1.0 - t));
        CHECK(shift_bundle_projection(p, lambda).hs_sq ==
              doctest::Approx(expect).epsilon(1e-6));
      }
    }
  }
  SUBCASE("under-resolved truncation is flagged") {
    const SpaceParams p{2, 10, 1};
    CHECK_THROWS_AS(shift_bundle_projection(p, Complex(0.95, 0.0)), NumericalError);
  }
}

TEST_CASE("curvature defect") {
  CHECK(curvature_defect(identity_frame(2, 2), Complex(0.1, 0.7)) == 0.0);
  CHECK(curvature_defect(one_z_frame(2), 0.0) == doctest::Approx(1.0));

  SUBCASE("line-bundle oracle agreement for (eps, -z)") {
    Frame f;
    f.order = 1;
    f.rows = 2;
    f.cols = 1;
    f.entries = {Atom::poly({Complex(0.5)}), Atom::blaschke(0.0)};
    const double defect = curvature_defect(f, 0.0);
    // log(eps^2 + |z|^2) has normalized Laplacian eps^2/(eps^2+|z|^2)^2,
    // which is 1/eps^2 = 4 at the origin for eps = 1/2
    CHECK(defect == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(defect == doctest::Approx(line_bundle_oracle(f, 0.0, 1e-4)).epsilon(1e-6));
  }
  SUBCASE("oracle agreement at random points for random line frames") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> radius(0.0, 0.7);
    std::uniform_real_distribution<double> angle(0.0, 6.2831853);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const Frame f = random_polynomial_frame(1, 2, 1, 3, rng);
      for (int j = 0; j < 10; ++j) {
        const Complex z = std::polar(radius(rng), angle(rng));
        worst = std::max(worst,
                         std::abs(curvature_defect(f, z) - line_bundle_oracle(f, z, 1e-3)));
      }
    }
    CHECK(worst < 1e-5);
  }
  SUBCASE("nonnegativity") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> radius(0.0, 0.9);
    std::uniform_real_distribution<double> angle(0.0, 6.2831853);
    const Frame f = random_polynomial_frame(2, 3, 2, 2, rng);
    for (int j = 0; j < 50; ++j) {
      CHECK(curvature_defect(f, std::polar(radius(rng), angle(rng))) >= -1e-8);
    }
  }
}

TEST_CASE("tensor split") {
  SUBCASE("constant frame at the origin gives total m n") {
    const SpaceParams p{2, 40, 2};
    const Frame f = identity_frame(2, 2);
    CHECK(tensor_split_residual(f, p, 0.0) < 1e-12);
    const double hs1 = shift_bundle_projection(p.with_fiber(1), 0.0).hs_sq;
    const double hs2 = projection_from_frame(f, 0.0).hs_sq;
    CHECK(f.cols * hs1 + hs2 == doctest::Approx(4.0).epsilon(1e-10));  // m n = 2 * 2
  }
  SUBCASE("(1, z) at order 1") {
    const SpaceParams p{1, 150, 2};
    CHECK(tensor_split_residual(one_z_frame(1), p, Complex(0.3, 0.0)) < 1e-8);
  }
  SUBCASE("random 3 x 2 frame at order 2") {
    std::mt19937_64 rng(41);
    const Frame f = random_polynomial_frame(2, 3, 2, 2, rng);
    const SpaceParams p{2, 150, 3};
    CHECK(tensor_split_residual(f, p, Complex(0.0, 0.5)) < 1e-8);
  }
  SUBCASE("memory guard") {
    const SpaceParams p{1, 2000, 3};
    CHECK_THROWS_AS(tensor_split_residual(one_z_frame(1), p, 0.0), DomainError);
  }
}

TEST_CASE("line bundle oracle basics") {
  CHECK(std::abs(line_bundle_oracle(identity_frame(1, 1), Complex(0.2, 0.2), 1e-3)) < 1e-9);
  // log(1 + |z|^2) has normalized Laplacian 1/(1+|z|^2)^2 = 1 at the origin
  CHECK(line_bundle_oracle(one_z_frame(1), 0.0, 1e-3) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK_THROWS_AS(line_bundle_oracle(one_z_frame(1), Complex(0.999, 0.0), 1e-2), DomainError);
  CHECK_THROWS_AS(line_bundle_oracle(identity_frame(1, 2), 0.0, 1e-3), DimensionError);
}
