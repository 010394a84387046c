#include "pstat/circle_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pstat/numeric.hpp"

namespace pstat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double field_at(const ScalarField2D& f, Point2 q) { return f.checked_value(q); }

double circle_average(const ScalarField2D& f, Point2 center, double radius,
                      int samples) {
  CompensatedSum acc;
  for (int j = 0; j < samples; ++j) {
    const double theta = kTwoPi * j / samples;
    acc.add(field_at(f, center + radius * unit_vector(theta)));
  }
  return acc.value() / samples;
}

/// Golden-section maximization of g on [a, b]; assumes g unimodal there.
template <typename G>
double golden_max(const G& g, double a, double b) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double g1 = g(x1), g2 = g(x2);
  for (int it = 0; it < 90 && (b - a) > 1e-14; ++it) {
    if (g1 < g2) {
      a = x1;
      x1 = x2;
      g1 = g2;
      x2 = a + invphi * (b - a);
      g2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      g2 = g1;
      x1 = b - invphi * (b - a);
      g1 = g(x1);
    }
  }
  return std::max(g1, g2);
}

}  // namespace

void validate(const CircleSpec& spec) {
  if (!(spec.radius > 0.0) || !std::isfinite(spec.radius)) {
    throw std::invalid_argument("CircleSpec: radius must be positive");
  }
  if (spec.samples < 8 || spec.samples % 2 != 0) {
    throw std::invalid_argument("CircleSpec: samples must be even and >= 8");
  }
}

std::vector<std::pair<double, double>> sample_circle(const ScalarField2D& f,
                                                     const CircleSpec& spec) {
  validate(spec);
  std::vector<std::pair<double, double>> out;
  out.reserve(spec.samples);
  for (int j = 0; j < spec.samples; ++j) {
    const double theta = kTwoPi * j / spec.samples;
    out.emplace_back(theta, field_at(f, spec.center + spec.radius * unit_vector(theta)));
  }
  return out;
}

double boundary_mean(const ScalarField2D& f, const CircleSpec& spec) {
  validate(spec);
  return circle_average(f, spec.center, spec.radius, spec.samples);
}

double ball_mean(const ScalarField2D& f, const CircleSpec& spec, int rings) {
  validate(spec);
  if (rings < 1) throw std::invalid_argument("ball_mean: rings must be >= 1");
  CompensatedSum acc;
  for (int i = 0; i < rings; ++i) {
    // Midpoint radii in the area variable s = r^2: equal-area rings.
    const double r = spec.radius * std::sqrt((2.0 * i + 1.0) / (2.0 * rings));
    acc.add(circle_average(f, spec.center, r, spec.samples));
  }
  return acc.value() / rings;
}

double median_sampled(const ScalarField2D& f, const CircleSpec& spec) {
  validate(spec);
  std::vector<double> values;
  values.reserve(spec.samples);
  for (int j = 0; j < spec.samples; ++j) {
    const double theta = kTwoPi * j / spec.samples;
    values.push_back(field_at(f, spec.center + spec.radius * unit_vector(theta)));
  }
  const size_t hi = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + hi, values.end());
  const double upper = values[hi];
  const double lower = *std::max_element(values.begin(), values.begin() + hi);
  return 0.5 * (lower + upper);
}

AntipodalMedian median_antipodal(const ScalarField2D& f, const CircleSpec& spec,
                                 double gradient_floor) {
  validate(spec);
  const Vec2 g = f.gradient(spec.center);
  if (g.norm() < gradient_floor) {
    throw DegenerateGradientError(
        "median_antipodal: gradient below floor at the circle center");
  }
  const auto diff = [&](double theta) {
    const Vec2 v = spec.radius * unit_vector(theta);
    return field_at(f, spec.center + v) - field_at(f, spec.center - v);
  };
  // diff(theta + pi) = -diff(theta), so a root is guaranteed in [0, pi) if the
  // scan brackets a sign change.
  constexpr int kPanels = 64;
  const double step = std::numbers::pi / kPanels;
  double a = 0.0;
  double fa = diff(a);
  double b = 0.0, fb = 0.0;
  bool bracketed = false;
  for (int k = 1; k <= kPanels; ++k) {
    b = k * step;
    fb = diff(b);
    if (fa == 0.0 || fa * fb <= 0.0) {
      bracketed = true;
      break;
    }
    a = b;
    fa = fb;
  }
  if (!bracketed) {
    std::ostringstream os;
    os << "median_antipodal: no antipodal bracket on [0, pi) for field '" << f.id
       << "' at radius " << spec.radius << " (radius too large?)";
    throw AntipodalBracketError(os.str());
  }
  if (fa == 0.0) {
    b = a;
  } else {
    while (b - a > 1e-13) {
      const double mid = 0.5 * (a + b);
      const double fm = diff(mid);
      if (fm == 0.0) {
        a = b = mid;
        break;
      }
      if (fa * fm < 0.0) {
        b = mid;
      } else {
        a = mid;
        fa = fm;
      }
    }
  }
  AntipodalMedian result;
  result.angle = 0.5 * (a + b);
  if (result.angle >= std::numbers::pi) result.angle -= std::numbers::pi;
  const Vec2 v = spec.radius * unit_vector(result.angle);
  result.value =
      0.5 * (field_at(f, spec.center + v) + field_at(f, spec.center - v));
  return result;
}

std::pair<double, double> ball_extrema(const ScalarField2D& f,
                                       const CircleSpec& spec, int rings) {
  validate(spec);
  if (rings < 1) throw std::invalid_argument("ball_extrema: rings must be >= 1");
  const int M = spec.samples;

  double max_v = field_at(f, spec.center);
  double min_v = max_v;
  int arg_max = 0, arg_min = 0;
  for (int j = 0; j < M; ++j) {
    const double theta = kTwoPi * j / M;
    const double v = field_at(f, spec.center + spec.radius * unit_vector(theta));
    if (v > max_v) {
      max_v = v;
      arg_max = j;
    }
    if (v < min_v) {
      min_v = v;
      arg_min = j;
    }
  }
  for (int i = 0; i < rings; ++i) {
    const double r = spec.radius * std::sqrt((2.0 * i + 1.0) / (2.0 * rings));
    for (int j = 0; j < M; ++j) {
      const double v = field_at(f, spec.center + r * unit_vector(kTwoPi * j / M));
      max_v = std::max(max_v, v);
      min_v = std::min(min_v, v);
    }
  }

  const auto on_boundary = [&](double theta) {
    return field_at(f, spec.center + spec.radius * unit_vector(theta));
  };
  const double dtheta = kTwoPi / M;
  max_v = std::max(max_v, golden_max(on_boundary, (arg_max - 1) * dtheta,
                                     (arg_max + 1) * dtheta));
  min_v = std::min(min_v, -golden_max([&](double t) { return -on_boundary(t); },
                                      (arg_min - 1) * dtheta, (arg_min + 1) * dtheta));
  return {max_v, min_v};
}

CircleStats compute_stats(const ScalarField2D& f, const CircleSpec& spec,
                          int rings) {
  CircleStats stats;
  stats.spec = spec;
  stats.boundary_mean = boundary_mean(f, spec);
  stats.ball_mean = ball_mean(f, spec, rings);
  stats.median = median_sampled(f, spec);
  const auto [mx, mn] = ball_extrema(f, spec, rings);
  stats.max_ball = mx;
  stats.min_ball = mn;
  stats.midrange = 0.5 * (mx + mn);
  return stats;
}

}  // namespace pstat
