#ifndef PSTAT_ASYMPTOTICS_HPP
#define PSTAT_ASYMPTOTICS_HPP

#include <span>
#include <string_view>
#include <vector>

#include "pstat/circle_stats.hpp"
#include "pstat/fields.hpp"
#include "pstat/schemes.hpp"

namespace pstat {

/// The Taylor identities under test. The first four pair a statistic with an
/// operator and an eps^2 coefficient; the scheme kinds measure the full
/// functional-equation residual.
enum class ExpansionKind {
  BoundaryMeanLaplacian,   // coeff 1/4, operator lap
  BallMeanLaplacian,       // coeff 1/8, operator lap      (eps^2/(2(N+2)), N=2)
  MedianOneLaplacian,      // coeff 1/2, operator one-lap
  MidrangeInftyLaplacian,  // coeff 1/2, operator infty-lap
  SchemeFe1,
  SchemeFe2,
  SchemeManfredi,
};

/// eps^2 multiplier of the operator term; only defined for the four
/// statistic/operator kinds.
double expansion_coefficient(ExpansionKind kind);

std::string_view expansion_kind_name(ExpansionKind kind);
ExpansionKind expansion_kind_from_name(std::string_view name);

struct StatOptions {
  int samples = 256;              // circle quadrature angles
  int rings = 64;                 // ball-average / extrema rings
  int median_fallback_samples = 4096;  // sampled median when antipodal unusable
  double gradient_floor = kGradientFloor;
};

/// The o(eps^2) remainder of the identity at one radius:
///   expansion kinds: f(x) - statistic + coeff * eps^2 * operator
///   scheme kinds:    f(x) - weighted statistic combination
double residual(const ScalarField2D& f, Point2 x, double eps, ExpansionKind kind,
                double p, const StatOptions& opts = {});

inline constexpr double kResidualNoiseFloor = 1e-13;

struct ExpansionReport {
  ExpansionKind kind;
  Point2 point;
  std::vector<double> radii;       // strictly decreasing
  std::vector<double> residuals;   // one per radius
  std::vector<double> normalized;  // residual / eps^2
  double fitted_slope = 0.0;       // log|residual| vs log eps, least squares
  bool slope_valid = false;        // >= 3 residuals above the noise floor
  bool all_below_floor = false;    // degenerate: remainder at rounding level
};

ExpansionReport expansion_report(const ScalarField2D& f, Point2 x,
                                 ExpansionKind kind, double p,
                                 std::span<const double> radii,
                                 const StatOptions& opts = {});

/// eps = 2^-3 .. 2^-10.
std::vector<double> default_radius_ladder();

struct SchemeVerdict {
  bool passes = false;
  double fitted_slope = 0.0;
  bool slope_valid = false;
  bool all_below_floor = false;
  bool tail_decreasing = false;
  double first_normalized = 0.0;
  double last_normalized = 0.0;
};

struct PointVerdict {
  Point2 point;
  SchemeVerdict fe1;
  SchemeVerdict fe2;
};

struct Theorem1Report {
  bool consistent = false;          // every point passes both schemes
  double max_abs_p_laplacian = 0.0; // pointwise p-harmonicity of the input
  std::vector<PointVerdict> points;
};

/// Checks that the Fe1 and Fe2 residuals vanish faster than eps^2 at every
/// point: normalized residuals must have a decreasing tail that actually
/// shrinks, or the fitted slope must exceed 2 + slope_margin (residuals at the
/// rounding floor pass trivially).
Theorem1Report verify_theorem1_consistency(const ScalarField2D& f,
                                           std::span<const Point2> pts, double p,
                                           std::span<const double> radii,
                                           double slope_margin = 0.3,
                                           const StatOptions& opts = {});

}  // namespace pstat

#endif
