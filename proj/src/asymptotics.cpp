#include "pstat/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

#include "pstat/operators.hpp"

namespace pstat {

double expansion_coefficient(ExpansionKind kind) {
  switch (kind) {
    case ExpansionKind::BoundaryMeanLaplacian: return 0.25;
    case ExpansionKind::BallMeanLaplacian: return 0.125;
    case ExpansionKind::MedianOneLaplacian: return 0.5;
    case ExpansionKind::MidrangeInftyLaplacian: return 0.5;
    default:
      throw std::invalid_argument(
          "expansion_coefficient: scheme kinds carry weights, not a coefficient");
  }
}

std::string_view expansion_kind_name(ExpansionKind kind) {
  switch (kind) {
    case ExpansionKind::BoundaryMeanLaplacian: return "boundary-mean";
    case ExpansionKind::BallMeanLaplacian: return "ball-mean";
    case ExpansionKind::MedianOneLaplacian: return "median";
    case ExpansionKind::MidrangeInftyLaplacian: return "midrange";
    case ExpansionKind::SchemeFe1: return "scheme-fe1";
    case ExpansionKind::SchemeFe2: return "scheme-fe2";
    case ExpansionKind::SchemeManfredi: return "scheme-manfredi";
  }
  return "?";
}

ExpansionKind expansion_kind_from_name(std::string_view name) {
  for (ExpansionKind k :
       {ExpansionKind::BoundaryMeanLaplacian, ExpansionKind::BallMeanLaplacian,
        ExpansionKind::MedianOneLaplacian, ExpansionKind::MidrangeInftyLaplacian,
        ExpansionKind::SchemeFe1, ExpansionKind::SchemeFe2,
        ExpansionKind::SchemeManfredi}) {
    if (expansion_kind_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown expansion kind '" + std::string(name) + "'");
}

namespace {

/// Median for residual purposes: the antipodal construction when the gradient
/// is nondegenerate (root-finder accuracy), dense sampling otherwise. Sampling
/// error O(1/M) would pollute the eps^3-scale signals.
double median_for_residual(const ScalarField2D& f, const CircleSpec& spec,
                           const StatOptions& opts) {
  const Vec2 g = f.gradient(spec.center);
  if (g.norm() >= opts.gradient_floor) {
    return median_antipodal(f, spec, opts.gradient_floor).value;
  }
  CircleSpec dense = spec;
  dense.samples = opts.median_fallback_samples;
  return median_sampled(f, dense);
}

}  // namespace

double residual(const ScalarField2D& f, Point2 x, double eps, ExpansionKind kind,
                double p, const StatOptions& opts) {
  if (!(eps > 0.0)) throw std::invalid_argument("residual: eps must be > 0");
  const CircleSpec spec{x, eps, opts.samples};
  const double fx = f.checked_value(x);

  switch (kind) {
    case ExpansionKind::BoundaryMeanLaplacian: {
      const OperatorValues v = evaluate_operators(f, x, 2.0, opts.gradient_floor);
      return fx - boundary_mean(f, spec) +
             expansion_coefficient(kind) * eps * eps * v.laplacian;
    }
    case ExpansionKind::BallMeanLaplacian: {
      const OperatorValues v = evaluate_operators(f, x, 2.0, opts.gradient_floor);
      return fx - ball_mean(f, spec, opts.rings) +
             expansion_coefficient(kind) * eps * eps * v.laplacian;
    }
    case ExpansionKind::MedianOneLaplacian: {
      const OperatorValues v = evaluate_operators(f, x, 2.0, opts.gradient_floor);
      return fx - median_for_residual(f, spec, opts) +
             expansion_coefficient(kind) * eps * eps * v.one_laplacian;
    }
    case ExpansionKind::MidrangeInftyLaplacian: {
      const OperatorValues v = evaluate_operators(f, x, 2.0, opts.gradient_floor);
      const auto [mx, mn] = ball_extrema(f, spec, opts.rings);
      return fx - 0.5 * (mx + mn) +
             expansion_coefficient(kind) * eps * eps * v.infty_laplacian;
    }
    case ExpansionKind::SchemeFe1: {
      const SchemeWeights w = scheme_weights(Scheme::Fe1, p);
      return fx - w.median * median_for_residual(f, spec, opts) -
             w.boundary_mean * boundary_mean(f, spec);
    }
    case ExpansionKind::SchemeFe2: {
      const SchemeWeights w = scheme_weights(Scheme::Fe2, p);
      const auto [mx, mn] = ball_extrema(f, spec, opts.rings);
      return fx - w.median * median_for_residual(f, spec, opts) -
             w.extreme * (mx + mn);
    }
    case ExpansionKind::SchemeManfredi: {
      const SchemeWeights w = scheme_weights(Scheme::Manfredi, p);
      const auto [mx, mn] = ball_extrema(f, spec, opts.rings);
      return fx - w.extreme * (mx + mn) -
             w.ball_mean * ball_mean(f, spec, opts.rings);
    }
  }
  throw std::invalid_argument("residual: unknown kind");
}

std::vector<double> default_radius_ladder() {
  std::vector<double> radii;
  for (int k = 3; k <= 10; ++k) radii.push_back(std::ldexp(1.0, -k));
  return radii;
}

namespace {

/// Least-squares slope of log|res| vs log(eps) over points above the noise
/// floor. Returns false when fewer than 3 survive.
bool fit_slope(std::span<const double> radii, std::span<const double> residuals,
               double& slope) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < radii.size(); ++i) {
    const double r = std::abs(residuals[i]);
    if (r <= kResidualNoiseFloor) continue;
    const double lx = std::log(radii[i]);
    const double ly = std::log(r);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 3) return false;
  slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return true;
}

}  // namespace

ExpansionReport expansion_report(const ScalarField2D& f, Point2 x,
                                 ExpansionKind kind, double p,
                                 std::span<const double> radii,
                                 const StatOptions& opts) {
  if (radii.empty()) throw std::invalid_argument("expansion_report: empty ladder");
  for (size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] < radii[i - 1])) {
      throw std::invalid_argument("expansion_report: radii must be strictly decreasing");
    }
  }
  ExpansionReport report;
  report.kind = kind;
  report.point = x;
  report.radii.assign(radii.begin(), radii.end());
  for (const double eps : radii) {
    const double r = residual(f, x, eps, kind, p, opts);
    report.residuals.push_back(r);
    report.normalized.push_back(r / (eps * eps));
  }
  report.slope_valid = fit_slope(report.radii, report.residuals, report.fitted_slope);
  report.all_below_floor = true;
  for (const double r : report.residuals) {
    if (std::abs(r) > kResidualNoiseFloor) {
      report.all_below_floor = false;
      break;
    }
  }
  return report;
}

namespace {

SchemeVerdict judge_scheme(const ExpansionReport& rep, double slope_margin) {
  SchemeVerdict v;
  v.fitted_slope = rep.fitted_slope;
  v.slope_valid = rep.slope_valid;
  v.all_below_floor = rep.all_below_floor;
  v.first_normalized = rep.normalized.front();
  v.last_normalized = rep.normalized.back();

  v.tail_decreasing = true;
  const size_t n = rep.normalized.size();
  for (size_t i = n / 2; i + 1 < n; ++i) {
    if (std::abs(rep.normalized[i + 1]) >= std::abs(rep.normalized[i])) {
      v.tail_decreasing = false;
      break;
    }
  }
  // "Tends to 0" needs the tail to both decrease and actually shrink; a
  // nonzero-limit sequence can be monotone as well.
  const bool shrinks =
      std::abs(v.last_normalized) <= 0.25 * std::abs(v.first_normalized);
  v.passes = v.all_below_floor ||
             (v.slope_valid && v.fitted_slope >= 2.0 + slope_margin) ||
             (v.tail_decreasing && shrinks);
  return v;
}

}  // namespace

Theorem1Report verify_theorem1_consistency(const ScalarField2D& f,
                                           std::span<const Point2> pts, double p,
                                           std::span<const double> radii,
                                           double slope_margin,
                                           const StatOptions& opts) {
  Theorem1Report report;
  report.consistent = true;
  for (const Point2 x : pts) {
    const OperatorValues v = evaluate_operators(f, x, p, opts.gradient_floor);
    report.max_abs_p_laplacian =
        std::max(report.max_abs_p_laplacian, std::abs(v.p_laplacian));
    PointVerdict pv;
    pv.point = x;
    pv.fe1 = judge_scheme(
        expansion_report(f, x, ExpansionKind::SchemeFe1, p, radii, opts),
        slope_margin);
    pv.fe2 = judge_scheme(
        expansion_report(f, x, ExpansionKind::SchemeFe2, p, radii, opts),
        slope_margin);
    report.consistent = report.consistent && pv.fe1.passes && pv.fe2.passes;
    report.points.push_back(pv);
  }
  return report;
}

}  // namespace pstat
