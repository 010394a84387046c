#include <cmath>
#include <vector>

#include "doctest.h"
#include "pstat/asymptotics.hpp"
#include "pstat/operators.hpp"

using namespace pstat;

TEST_CASE("scheme weights: normalization and signs") {
  for (const double p : {1.1, 1.5, 2.0, 3.0, 10.0, 100.0}) {
    CAPTURE(p);
    for (const Scheme s : {Scheme::Fe1, Scheme::Fe2, Scheme::Manfredi}) {
      CHECK(scheme_weights(s, p).sum() == doctest::Approx(1.0).epsilon(1e-15));
    }
    const SchemeWeights fe2 = scheme_weights(Scheme::Fe2, p);
    CHECK(fe2.median > 0.0);
    CHECK(fe2.extreme > 0.0);
  }
  // Fe1's median weight changes sign at p=2, as does Manfredi's alpha.
  CHECK(scheme_weights(Scheme::Fe1, 1.5).median > 0.0);
  CHECK(scheme_weights(Scheme::Fe1, 2.0).median == 0.0);
  CHECK(scheme_weights(Scheme::Fe1, 3.0).median < 0.0);
  CHECK(scheme_weights(Scheme::Manfredi, 1.5).extreme < 0.0);
  CHECK(scheme_weights(Scheme::Manfredi, 2.0).extreme == 0.0);
  CHECK(scheme_weights(Scheme::Manfredi, 3.0).extreme > 0.0);
  // monotonicity flag follows the sign structure
  for (const double p : {1.1, 1.5, 2.0, 3.0, 10.0}) {
    CHECK(scheme_monotone(Scheme::Fe2, p));
    CHECK(scheme_monotone(Scheme::Fe1, p) == (p <= 2.0));
    CHECK(scheme_monotone(Scheme::Manfredi, p) == (p >= 2.0));
  }
}

TEST_CASE("expansion coefficients fixed") {
  CHECK(expansion_coefficient(ExpansionKind::BoundaryMeanLaplacian) == 0.25);
  CHECK(expansion_coefficient(ExpansionKind::BallMeanLaplacian) == 0.125);
  CHECK(expansion_coefficient(ExpansionKind::MedianOneLaplacian) == 0.5);
  CHECK(expansion_coefficient(ExpansionKind::MidrangeInftyLaplacian) == 0.5);
  CHECK_THROWS_AS(expansion_coefficient(ExpansionKind::SchemeFe1),
                  std::invalid_argument);
}

TEST_CASE("kind names round-trip") {
  for (const ExpansionKind k :
       {ExpansionKind::BoundaryMeanLaplacian, ExpansionKind::BallMeanLaplacian,
        ExpansionKind::MedianOneLaplacian, ExpansionKind::MidrangeInftyLaplacian,
        ExpansionKind::SchemeFe1, ExpansionKind::SchemeFe2,
        ExpansionKind::SchemeManfredi}) {
    CHECK(expansion_kind_from_name(expansion_kind_name(k)) == k);
  }
  CHECK_THROWS_AS(expansion_kind_from_name("nope"), std::invalid_argument);
}

TEST_CASE("affine residuals vanish for every kind") {
  const ScalarField2D aff = affine_field(3, -4, 2);
  for (const ExpansionKind k :
       {ExpansionKind::BoundaryMeanLaplacian, ExpansionKind::BallMeanLaplacian,
        ExpansionKind::MedianOneLaplacian, ExpansionKind::MidrangeInftyLaplacian,
        ExpansionKind::SchemeFe1, ExpansionKind::SchemeFe2,
        ExpansionKind::SchemeManfredi}) {
    CAPTURE(expansion_kind_name(k));
    CHECK(std::abs(residual(aff, {0.2, -0.4}, 0.25, k, 1.5)) <= 1e-13);
  }
  const auto rep = expansion_report(aff, {0.2, -0.4}, ExpansionKind::SchemeFe2, 1.5,
                                    default_radius_ladder());
  CHECK(rep.all_below_floor);
  CHECK(!rep.slope_valid);
}

TEST_CASE("median expansion matches the one-Laplacian coefficient") {
  // f = x^2 + 2y^2 at (1,1): one-Laplacian 2.4 (hand value, operators suite).
  const ScalarField2D f = quadratic_field(1, 2);
  const double eps = 1e-2;
  const double med = median_antipodal(f, {{1, 1}, eps, 64}).value;
  const double fx = f.value({1, 1});
  // f(x) - median ~ -(eps^2/2) * 2.4
  CHECK(fx - med == doctest::Approx(-0.5 * eps * eps * 2.4).epsilon(2e-3));
  CHECK(std::abs(residual(f, {1, 1}, eps, ExpansionKind::MedianOneLaplacian, 2.0)) <=
        1e-7);
  // dense-sampling oracle for the same statistic
  const double dense = median_sampled(f, {{1, 1}, eps, 8192});
  CHECK(med == doctest::Approx(dense).epsilon(1e-6));
}

TEST_CASE("boundary-mean remainder is fourth order on a non-harmonic field") {
  // Circle averaging kills odd orders, so after removing the eps^2 Laplacian
  // term the remainder is -(eps^4/64) lap^2 f + O(eps^6). For exp(x+2y),
  // lap^2 f = 25 f.
  const ScalarField2D f = field_by_id("expxy");
  const Point2 x{0.1, 0.2};
  const double predicted = -std::exp(0.5) * 25.0 / 64.0;  // eps^4 coefficient
  for (const double eps : {0.125, 0.0625}) {
    const double r = residual(f, x, eps, ExpansionKind::BoundaryMeanLaplacian, 2.0);
    CHECK(r / std::pow(eps, 4) == doctest::Approx(predicted).epsilon(0.02));
  }
  std::vector<double> radii;
  for (int k = 3; k <= 9; ++k) radii.push_back(std::ldexp(1.0, -k));
  const auto rep =
      expansion_report(f, x, ExpansionKind::BoundaryMeanLaplacian, 2.0, radii);
  CHECK(rep.slope_valid);
  CHECK(rep.fitted_slope == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("expansion ladder on sin(x1)exp(x2) at (0.3, 0.2)") {
  const ScalarField2D f = field_by_id("sinexp");
  const Point2 x{0.3, 0.2};
  std::vector<double> radii;
  for (int k = 3; k <= 9; ++k) radii.push_back(std::ldexp(1.0, -k));

  // sin(x)e^y is harmonic: the circle and ball means reproduce f(x) exactly,
  // so those residuals sit at the rounding floor.
  for (const ExpansionKind k :
       {ExpansionKind::BoundaryMeanLaplacian, ExpansionKind::BallMeanLaplacian}) {
    const auto rep = expansion_report(f, x, k, 2.0, radii);
    CAPTURE(expansion_kind_name(k));
    CHECK(rep.all_below_floor);
  }

  // Median and midrange see the one- and infty-Laplacians; the measured
  // remainder order is ~3 (the o(eps^2) statements do not pin it).
  const auto med = expansion_report(f, x, ExpansionKind::MedianOneLaplacian, 2.0, radii);
  CHECK(med.slope_valid);
  CHECK(med.fitted_slope >= 2.5);
  for (size_t i = 0; i + 1 < med.normalized.size(); ++i) {
    CHECK(std::abs(med.normalized[i + 1]) < std::abs(med.normalized[i]));
  }
  const auto mid =
      expansion_report(f, x, ExpansionKind::MidrangeInftyLaplacian, 2.0, radii);
  CHECK(mid.slope_valid);
  CHECK(mid.fitted_slope >= 2.5);
}

TEST_CASE("scheme residual ladder on the fundamental solution") {
  const ScalarField2D u = fundamental_solution(1.5);
  const auto radii = default_radius_ladder();
  const auto rep = expansion_report(u, {1, 0}, ExpansionKind::SchemeFe2, 1.5, radii);
  // normalized residuals tend to zero (o(eps^2) holds for the right p)
  CHECK(std::abs(rep.normalized.back()) < 1e-3 * std::abs(rep.normalized.front()) + 1e-13);
  CHECK(rep.slope_valid);
  CHECK(rep.fitted_slope >= 3.5);  // measured: the Fe2 remainder is quartic here
}

TEST_CASE("p=2 reduces Fe1 to the plain mean-value statistic") {
  const ScalarField2D f = field_by_id("expxy");
  const Point2 x{0.3, -0.1};
  const double eps = 1.0 / 16;
  const double direct = f.value(x) - boundary_mean(f, {x, eps, 256});
  CHECK(residual(f, x, eps, ExpansionKind::SchemeFe1, 2.0) == direct);
}

TEST_CASE("expansion_report validates the ladder") {
  const ScalarField2D f = field_by_id("expxy");
  const std::vector<double> increasing{0.1, 0.2};
  CHECK_THROWS_AS(
      expansion_report(f, {0, 0}, ExpansionKind::SchemeFe1, 1.5, increasing),
      std::invalid_argument);
  const std::vector<double> empty;
  CHECK_THROWS_AS(expansion_report(f, {0, 0}, ExpansionKind::SchemeFe1, 1.5, empty),
                  std::invalid_argument);
  // two usable points cannot support a slope
  const std::vector<double> two{0.25, 0.125};
  const auto rep = expansion_report(f, {0.3, -0.1}, ExpansionKind::SchemeFe1, 1.5, two);
  CHECK(!rep.slope_valid);
}

TEST_CASE("theorem-1 consistency: right p passes, wrong p fails") {
  const ScalarField2D u = fundamental_solution(1.5);
  const std::vector<Point2> pts{{1.0, 0.0}, {0.0, 0.8}, {-0.9, 0.7}};
  const auto radii = default_radius_ladder();

  const auto good = verify_theorem1_consistency(u, pts, 1.5, radii);
  CHECK(good.consistent);
  CHECK(good.max_abs_p_laplacian <= 1e-9);
  for (const auto& pv : good.points) {
    CHECK(pv.fe1.passes);
    CHECK(pv.fe2.passes);
  }

  const auto bad = verify_theorem1_consistency(u, pts, 4.0, radii);
  CHECK(!bad.consistent);
  CHECK(bad.max_abs_p_laplacian > 1e-3);
}

TEST_CASE("theorem-1 consistency: harmonic saddle at p=2") {
  const ScalarField2D f = quadratic_field(1, -1);
  const std::vector<Point2> pts{{0.7, 0.3}, {1.1, 0.6}};
  const auto rep = verify_theorem1_consistency(f, pts, 2.0, default_radius_ladder());
  CHECK(rep.consistent);
}
