#ifndef PSTAT_SOLVER_HPP
#define PSTAT_SOLVER_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pstat/fields.hpp"
#include "pstat/geometry.hpp"
#include "pstat/schemes.hpp"

namespace pstat {

enum class DomainShape { Rectangle, Annulus };

struct DomainSpec {
  DomainShape shape = DomainShape::Rectangle;
  // rectangle corners
  double x_lo = 0.0, y_lo = 0.0, x_hi = 1.0, y_hi = 1.0;
  // annulus radii (bounding box is [-r1, r1]^2)
  double r0 = 0.0, r1 = 0.0;

  static DomainSpec rectangle(double x_lo, double y_lo, double x_hi, double y_hi);
  static DomainSpec annulus(double r0, double r1);
  double diameter() const;
};

enum class NodeKind : std::uint8_t {
  Interior,  // closed eps-ball inside the domain: updated by sweeps
  Collar,    // within eps of the boundary: pinned to extended boundary data
  Inactive,  // bounding-box filler, never read (NaN-poisoned)
};

/// Uniform node lattice over the domain's bounding box with per-node
/// classification for a statistic radius eps.
struct GridDomain {
  DomainSpec spec;
  double h = 0.0;
  double eps = 0.0;  // classification radius
  int nx = 0, ny = 0;
  double x_lo = 0.0, y_lo = 0.0;
  std::vector<NodeKind> kinds;       // nx*ny, row-major (ix fastest)
  std::vector<int> interior_nodes;   // flat indices

  Point2 node(int ix, int iy) const {
    return {x_lo + ix * h, y_lo + iy * h};
  }
  Point2 node(int flat) const { return node(flat % nx, flat / nx); }
  int num_nodes() const { return nx * ny; }
};

/// Builds the lattice; h must divide the box sides to rounding accuracy and
/// eps >= 2h (bilinear interpolation accuracy floor).
GridDomain build_grid(const DomainSpec& spec, double h, double eps);

enum class InitialGuess {
  CollarMean,     // the mean of the boundary data on the collar (default)
  Constant,       // init_constant everywhere
  BoundaryField,  // boundary_data evaluated at every active node
  Values,         // caller-provided grid
};

struct SolverProblem {
  DomainSpec domain;
  double h = 0.0;
  double eps = 0.0;  // statistic radius, >= 2h
  double p = 2.0;
  Scheme scheme = Scheme::Fe2;
  int samples = 64;  // circle samples M, even
  int rings = 8;     // ball-average rings (Manfredi only)
  ScalarField2D boundary_data;
  double damping = 1.0;
  double tol = 1e-10;
  int max_iters = 0;  // 0 = ceil(10 (diameter/eps)^2)
  InitialGuess init = InitialGuess::CollarMean;
  double init_constant = 0.0;
  std::vector<double> init_values;

  int effective_max_iters() const;
};

struct SolverResult {
  std::vector<double> values;  // nx*ny grid (inactive nodes NaN)
  int iterations = 0;
  double final_change = 0.0;
  bool converged = false;
  std::vector<double> residual_profile;  // sup change per sweep
  /// Worst excursion of a new interior value outside the old grid's
  /// [min, max] range, over all sweeps; 0 for a range-bounded run.
  double max_range_violation = 0.0;
};

/// Bilinear interpolation from the four enclosing nodes; q must lie in the
/// bounding box.
double interpolate(const GridDomain& grid, std::span<const double> values,
                   Point2 q);

/// One damped Jacobi sweep of the scheme's functional-equation update:
/// every interior node is recomputed from the old grid, collar nodes are
/// kept. Returns the new grid and the sup-norm change.
std::pair<std::vector<double>, double> scheme_update(
    const SolverProblem& problem, const std::vector<double>& values);

SolverResult solve(const SolverProblem& problem);

/// Grid values from a field (exact-solution layout helper); inactive nodes
/// are NaN.
std::vector<double> grid_from_field(const GridDomain& grid,
                                    const ScalarField2D& f);

/// Sup-norm error over interior nodes against a reference field.
double sup_error_vs_field(const GridDomain& grid, std::span<const double> values,
                          const ScalarField2D& reference);

struct ConvergenceRow {
  double eps = 0.0;
  double h = 0.0;
  int iterations = 0;
  bool converged = false;
  double sup_error = 0.0;
  double max_range_violation = 0.0;
};

/// Re-solves the problem along an eps ladder with h = eps/eps_over_h tied to
/// the radius, reporting sup errors against the exact field (which also
/// supplies the boundary data in the template).
std::vector<ConvergenceRow> convergence_study(const SolverProblem& base,
                                              const ScalarField2D& exact,
                                              std::span<const double> eps_ladder,
                                              double eps_over_h = 4.0);

}  // namespace pstat

#endif
