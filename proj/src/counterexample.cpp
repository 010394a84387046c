#include "pstat/counterexample.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "pstat/numeric.hpp"

namespace pstat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kQuadTol = 1e-13;
constexpr int kMaxNodes = 1 << 21;

/// Periodic trapezoid with node doubling until two successive levels agree to
/// kQuadTol (absolute, relative to max(1,|I|)). Returns the mean of the
/// integrand over the period.
double periodic_mean(const std::function<double(double)>& g, int nodes) {
  if (nodes < 8) nodes = 8;
  auto level = [&](int n) {
    CompensatedSum acc;
    for (int j = 0; j < n; ++j) acc.add(g(kTwoPi * j / n));
    return acc.value() / n;
  };
  double prev = level(nodes);
  for (int n = 2 * nodes; n <= kMaxNodes; n *= 2) {
    const double cur = level(n);
    if (std::abs(cur - prev) <= kQuadTol * std::max(1.0, std::abs(cur))) {
      return cur;
    }
    prev = cur;
  }
  throw QuadratureBudgetError(
      "periodic_mean: no convergence to 1e-13 within the node budget");
}

double median_exponent(double p) { return (p - 2.0) / (2.0 * (p - 1.0)); }

}  // namespace

void validate(const CounterexampleCase& c) {
  if (!(c.p > 1.0 && c.p < 2.0)) {
    throw std::invalid_argument("CounterexampleCase: p must lie in (1, 2)");
  }
  if (!(c.x1 > 0.0)) {
    throw std::invalid_argument("CounterexampleCase: x1 must be > 0");
  }
  if (!(c.eps > 0.0 && c.eps < c.x1)) {
    throw std::invalid_argument("CounterexampleCase: eps must lie in (0, x1)");
  }
}

double fundsol_median(const CounterexampleCase& c) {
  validate(c);
  return std::pow(c.x1 * c.x1 + c.eps * c.eps, median_exponent(c.p));
}

double fundsol_mean(const CounterexampleCase& c, int quadrature_nodes) {
  validate(c);
  const double sigma = median_exponent(c.p);
  const double a = c.x1 * c.x1 + c.eps * c.eps;
  const double b = 2.0 * c.x1 * c.eps;
  return periodic_mean(
      [=](double t) { return std::pow(a + b * std::cos(t), sigma); },
      quadrature_nodes);
}

double residual_fe1_nonasymptotic(const CounterexampleCase& c) {
  validate(c);
  const double u = std::pow(c.x1, (c.p - 2.0) / (c.p - 1.0));
  const double w_med = 2.0 / c.p - 1.0;
  const double w_mean = 2.0 - 2.0 / c.p;
  return u - w_med * fundsol_median(c) - w_mean * fundsol_mean(c);
}

double fe1_residual_eps_derivative(const CounterexampleCase& c) {
  validate(c);
  const double sigma = median_exponent(c.p);
  const double w_med = 2.0 / c.p - 1.0;
  const double w_mean = 2.0 - 2.0 / c.p;
  const double dmed =
      sigma * 2.0 * c.eps * std::pow(c.x1 * c.x1 + c.eps * c.eps, sigma - 1.0);
  const double a = c.x1 * c.x1 + c.eps * c.eps;
  const double b = 2.0 * c.x1 * c.eps;
  const double dmean = 2.0 * sigma *
                       periodic_mean(
                           [=](double t) {
                             return std::pow(a + b * std::cos(t), sigma - 1.0) *
                                    (c.x1 * std::cos(t) + c.eps);
                           },
                           64);
  return -w_med * dmed - w_mean * dmean;
}

double derivative_identity_deviation(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument(
        "derivative_identity_deviation: eps must lie in (0, 1)");
  }
  const double denom = 1.0 + eps * eps;
  // Factor of 2: this integral is written over 1/pi instead of 1/(2 pi).
  return 2.0 * periodic_mean(
                   [=](double t) {
                     const double ratio = (1.0 + 2.0 * eps * std::cos(t) + eps * eps) / denom;
                     return std::pow(ratio, -1.5) * (std::cos(t) + eps);
                   },
                   64);
}

double residual_fe2_nonasymptotic(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("residual_fe2_nonasymptotic: eps must lie in (0, 1)");
  }
  const double median = 1.0 / std::sqrt(1.0 + eps * eps);
  const double max_ball = 1.0 / (1.0 - eps);
  const double min_ball = 1.0 / (1.0 + eps);
  return (2.0 / 3.0) * median + (1.0 / 6.0) * (max_ball + min_ball) - 1.0;
}

}  // namespace pstat
