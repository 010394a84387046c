#include <cmath>
#include <vector>

#include "doctest.h"
#include "pstat/fields.hpp"
#include "support.hpp"

using namespace pstat;

TEST_CASE("fundamental solution values and derivatives") {
  const ScalarField2D u = fundamental_solution(1.5);
  // exponent (p-2)/(p-1) = -1 at p = 3/2
  CHECK(u.value({1.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(u.value({2.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-14));

  const Vec2 g = u.gradient({1.0, 0.0});
  CHECK(g.x1 == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(g.x2 == doctest::Approx(0.0).epsilon(1e-13));
  // cross-check against centered differences, step 1e-5
  const Vec2 fd = testing::fd_gradient(u, {1.0, 0.0}, 1e-5);
  CHECK(std::abs(fd.x1 - g.x1) <= 1e-7);
  CHECK(std::abs(fd.x2 - g.x2) <= 1e-7);
}

TEST_CASE("fundamental solution rejects p outside (1,2)") {
  CHECK_THROWS_AS(fundamental_solution(2.0), std::invalid_argument);
  CHECK_THROWS_AS(fundamental_solution(1.0), std::invalid_argument);
  CHECK_THROWS_AS(fundamental_solution(3.0), std::invalid_argument);
}

TEST_CASE("fundamental solution is radial") {
  const ScalarField2D u = fundamental_solution(1.3);
  for (const Point2 x : {Point2{0.3, 0.4}, Point2{-1.2, 0.7}, Point2{2.0, -2.0}}) {
    const double r = std::hypot(x.x1, x.x2);
    CHECK(std::abs(u.value(x) - u.value({r, 0.0})) <= 1e-14 * std::abs(u.value(x)) + 1e-15);
  }
}

TEST_CASE("fundamental solution domain excludes the origin") {
  const ScalarField2D u = fundamental_solution(1.5);
  CHECK(!u.admissible({0.0, 0.0}));
  CHECK(u.admissible({1e-6, 0.0}));
  CHECK_THROWS_AS(u.checked_value({0.0, 0.0}), InadmissiblePointError);
}

TEST_CASE("consistency: affine gradient is exact") {
  const ScalarField2D f = affine_field(3, -4, 2);
  const std::vector<Point2> pts{{0, 0}, {1.5, -2.25}, {10, 3}};
  const auto report = check_field_consistency(f, pts, 1e-4);
  CHECK(report.max_grad_deviation <= 1e-9);
}

TEST_CASE("consistency: quadratic Hessian vs finite differences") {
  const ScalarField2D f = quadratic_field(1, 2);
  const std::vector<Point2> pts{{1, 1}};
  const auto report = check_field_consistency(f, pts, 1e-4);
  CHECK(report.max_hess_deviation <= 1e-6);
}

TEST_CASE("consistency: fundamental solution near the benchmark point") {
  const ScalarField2D u = fundamental_solution(1.5);
  const std::vector<Point2> pts{{1, 0}};
  const auto report = check_field_consistency(u, pts, 1e-5);
  CHECK(report.max_grad_deviation <= 1e-7);
}

TEST_CASE("consistency rejects stencils that leave the domain") {
  const ScalarField2D u = fundamental_solution(1.5, 1e-3);
  const std::vector<Point2> pts{{1e-3, 0.0}};
  CHECK_THROWS_AS(check_field_consistency(u, pts, 1e-3), InadmissiblePointError);
}

TEST_CASE("battery: at least 20 named fields, all self-consistent") {
  const auto& fields = battery();
  CHECK(fields.size() >= 20);
  std::mt19937_64 rng(7);
  for (const auto& f : fields) {
    CAPTURE(f.id);
    std::vector<Point2> pts;
    for (int i = 0; i < 5; ++i) {
      // [0.6, 1.6]: away from the fundsol singularity, where fundsol:1.1's
      // high-order derivatives (r^{-9} family) would dominate the FD error
      pts.push_back(testing::random_nondegenerate_point(rng, f, 0.6, 1.6, 0.0));
    }
    const auto report = check_field_consistency(f, pts, 1e-5);
    CHECK(report.max_grad_deviation <= 1e-6);
    CHECK(report.max_hess_deviation <= 5e-4);
    for (const Point2 x : pts) {
      const SymMat2 H = f.hessian(x);
      const SymMat2 FD = testing::fd_hessian(f, x, 1e-4);
      CHECK(std::abs(H.a12 - FD.a12) <= 5e-5 * (1.0 + std::abs(H.a12)));
    }
  }
}

TEST_CASE("field ids resolve and round-trip") {
  CHECK(field_by_id("affine:3,-4,2").value({1.0, 1.0}) == doctest::Approx(1.0));
  CHECK(field_by_id("fundsol:1.5").value({2.0, 0.0}) == doctest::Approx(0.5));
  CHECK(field_by_id("quad:1,-1").value({2.0, 1.0}) == doctest::Approx(3.0));
  CHECK(field_by_id("const:7").value({5.0, 5.0}) == doctest::Approx(7.0));
  CHECK(field_by_id("sinexp").id == "sinexp");
  CHECK_THROWS_AS(field_by_id("nosuch"), std::invalid_argument);
  CHECK_THROWS_AS(field_by_id("affine:1,2"), std::invalid_argument);
  CHECK_THROWS_AS(field_by_id("quad:1,zzz"), std::invalid_argument);
}
