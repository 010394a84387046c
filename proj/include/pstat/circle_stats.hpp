#ifndef PSTAT_CIRCLE_STATS_HPP
#define PSTAT_CIRCLE_STATS_HPP

#include <stdexcept>
#include <utility>
#include <vector>

#include "pstat/fields.hpp"
#include "pstat/geometry.hpp"
#include "pstat/operators.hpp"

namespace pstat {

/// Raised by median_antipodal when no sign change brackets an antipodal pair:
/// the radius is too large for the level lines to foliate the ball.
class AntipodalBracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CircleSpec {
  Point2 center;
  double radius = 0.0;
  int samples = 64;  // angular sample count, even and >= 8
};

void validate(const CircleSpec& spec);

/// The statistics consumed by the mean/median/midrange characterizations.
struct CircleStats {
  double boundary_mean = 0.0;
  double ball_mean = 0.0;
  double median = 0.0;
  double max_ball = 0.0;
  double min_ball = 0.0;
  double midrange = 0.0;
  CircleSpec spec;
};

/// Equispaced (angle, value) pairs on the circle, theta_j = 2 pi j / M.
std::vector<std::pair<double, double>> sample_circle(const ScalarField2D& f,
                                                     const CircleSpec& spec);

/// Periodic-trapezoid average over the circle (equal weights, spectrally
/// accurate for smooth integrands).
double boundary_mean(const ScalarField2D& f, const CircleSpec& spec);

/// Area average over the closed ball: composite midpoint rule over `rings`
/// equal-area concentric circles (radii eps*sqrt((2i-1)/(2n)), equal weights),
/// each averaged with spec.samples angles. Exact for fields whose circle
/// average is linear in the enclosed area, e.g. quadratics.
double ball_mean(const ScalarField2D& f, const CircleSpec& spec, int rings);

/// Average of the two middle order statistics of the sampled values; the
/// discrete surrogate for the equal-arc-measure split. spec.samples must be
/// even so the middle pair is well defined.
double median_sampled(const ScalarField2D& f, const CircleSpec& spec);

struct AntipodalMedian {
  double angle = 0.0;  // in [0, pi)
  double value = 0.0;
};

/// Median via the antipodal level-set construction: finds the angle where
/// f(x + eps*v) = f(x - eps*v) by a 64-panel scan of [0, pi) followed by
/// bisection to 1e-13 in the angle. Requires a nondegenerate gradient at the
/// center.
AntipodalMedian median_antipodal(const ScalarField2D& f, const CircleSpec& spec,
                                 double gradient_floor = kGradientFloor);

/// (max, min) over the closed ball: ring/angle sampling plus the center,
/// refined by golden-section over the boundary angle (extrema of a field with
/// nonvanishing gradient lie on the boundary circle).
std::pair<double, double> ball_extrema(const ScalarField2D& f,
                                       const CircleSpec& spec, int rings);

CircleStats compute_stats(const ScalarField2D& f, const CircleSpec& spec,
                          int rings = 64);

}  // namespace pstat

#endif
