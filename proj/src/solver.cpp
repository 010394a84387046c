#include "pstat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "pstat/parallel.hpp"

namespace pstat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double rounded_count(double length, double h, const char* what) {
  const double ratio = length / h;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument(std::string("build_grid: h must divide the ") +
                                what + " length");
  }
  return rounded;
}

double distance_outside(const DomainSpec& spec, Point2 q) {
  switch (spec.shape) {
    case DomainShape::Rectangle: {
      const double dx = std::max({spec.x_lo - q.x1, q.x1 - spec.x_hi, 0.0});
      const double dy = std::max({spec.y_lo - q.x2, q.x2 - spec.y_hi, 0.0});
      return std::hypot(dx, dy);
    }
    case DomainShape::Annulus: {
      const double r = std::hypot(q.x1, q.x2);
      if (r < spec.r0) return spec.r0 - r;
      if (r > spec.r1) return r - spec.r1;
      return 0.0;
    }
  }
  return 0.0;
}

bool ball_inside(const DomainSpec& spec, Point2 q, double eps) {
  constexpr double slack = 1e-12;
  switch (spec.shape) {
    case DomainShape::Rectangle:
      return q.x1 - spec.x_lo >= eps - slack && spec.x_hi - q.x1 >= eps - slack &&
             q.x2 - spec.y_lo >= eps - slack && spec.y_hi - q.x2 >= eps - slack;
    case DomainShape::Annulus: {
      const double r = std::hypot(q.x1, q.x2);
      return r - spec.r0 >= eps - slack && spec.r1 - r >= eps - slack;
    }
  }
  return false;
}

/// Precomputed bilinear read: four grid loads at a fixed flat-index offset
/// from the node, dotted with fixed weights. Identical for every interior
/// node because the lattice is uniform.
struct SampleStencil {
  int base = 0;  // flat offset of the lower-left corner
  double w00 = 0, w10 = 0, w01 = 0, w11 = 0;
};

SampleStencil make_stencil(Vec2 offset, double h, int nx) {
  const double ox = offset.x1 / h;
  const double oy = offset.x2 / h;
  int ix = static_cast<int>(std::floor(ox));
  int iy = static_cast<int>(std::floor(oy));
  double fx = ox - ix;
  double fy = oy - iy;
  // Samples landing exactly on a node at the positive extreme would read one
  // column/row past it; shift the cell down (the weights stay consistent).
  if (fx < 1e-9 && ix > 0) {
    ix -= 1;
    fx += 1.0;
  }
  if (fy < 1e-9 && iy > 0) {
    iy -= 1;
    fy += 1.0;
  }
  SampleStencil s;
  s.base = iy * nx + ix;
  s.w00 = (1.0 - fx) * (1.0 - fy);
  s.w10 = fx * (1.0 - fy);
  s.w01 = (1.0 - fx) * fy;
  s.w11 = fx * fy;
  return s;
}

struct SweepContext {
  GridDomain grid;
  SchemeWeights weights;
  std::vector<SampleStencil> circle;  // M boundary samples
  std::vector<SampleStencil> rings;   // rings*M ball samples (Manfredi)
  bool needs_median = false;
  bool needs_extrema = false;
  bool needs_mean = false;
  bool needs_ball_mean = false;
};

SweepContext make_context(const SolverProblem& pb) {
  SweepContext ctx;
  ctx.grid = build_grid(pb.domain, pb.h, pb.eps);
  ctx.weights = scheme_weights(pb.scheme, pb.p);
  if (pb.samples < 8 || pb.samples % 2 != 0) {
    throw std::invalid_argument("SolverProblem: samples must be even and >= 8");
  }
  const int nx = ctx.grid.nx;
  const double dtheta = 2.0 * std::numbers::pi / pb.samples;
  ctx.circle.reserve(pb.samples);
  for (int j = 0; j < pb.samples; ++j) {
    ctx.circle.push_back(make_stencil(pb.eps * unit_vector(dtheta * j), pb.h, nx));
  }
  // Statistics with weight zero are skipped entirely, so Fe1 at p=2 is pure
  // circle-mean averaging and Manfredi at p=2 a pure ball mean.
  ctx.needs_median = ctx.weights.median != 0.0;
  ctx.needs_mean = ctx.weights.boundary_mean != 0.0;
  ctx.needs_extrema = ctx.weights.extreme != 0.0;
  ctx.needs_ball_mean = ctx.weights.ball_mean != 0.0;
  if (ctx.needs_ball_mean) {
    if (pb.rings < 1) {
      throw std::invalid_argument("SolverProblem: rings must be >= 1");
    }
    ctx.rings.reserve(static_cast<size_t>(pb.rings) * pb.samples);
    for (int i = 0; i < pb.rings; ++i) {
      const double r = pb.eps * std::sqrt((2.0 * i + 1.0) / (2.0 * pb.rings));
      for (int j = 0; j < pb.samples; ++j) {
        ctx.rings.push_back(make_stencil(r * unit_vector(dtheta * j), pb.h, nx));
      }
    }
  }

  // Every stencil read from every interior node must land on active cells;
  // NaN poisoning alone would slip through the max/min statistics (std::max
  // drops NaN), so the invariant is enforced here once.
  const auto corners_active = [&](int node, const SampleStencil& s) {
    const int b = node + s.base;
    if (b < 0 || b + nx + 1 >= ctx.grid.num_nodes()) return false;
    return ctx.grid.kinds[b] != NodeKind::Inactive &&
           ctx.grid.kinds[b + 1] != NodeKind::Inactive &&
           ctx.grid.kinds[b + nx] != NodeKind::Inactive &&
           ctx.grid.kinds[b + nx + 1] != NodeKind::Inactive;
  };
  for (const int node : ctx.grid.interior_nodes) {
    for (const auto& s : ctx.circle) {
      if (!corners_active(node, s)) {
        throw std::logic_error("scheme stencil reaches an inactive node");
      }
    }
    for (const auto& s : ctx.rings) {
      if (!corners_active(node, s)) {
        throw std::logic_error("scheme stencil reaches an inactive node");
      }
    }
  }
  return ctx;
}

inline double read_sample(const std::vector<double>& v, int node,
                          const SampleStencil& s, int nx) {
  const int b = node + s.base;
  return s.w00 * v[b] + s.w10 * v[b + 1] + s.w01 * v[b + nx] + s.w11 * v[b + nx + 1];
}

/// One Jacobi sweep; returns the sup change over interior nodes.
double sweep(const SolverProblem& pb, const SweepContext& ctx,
             const std::vector<double>& old_values,
             std::vector<double>& new_values, double* range_violation) {
  const int nx = ctx.grid.nx;
  const int n_interior = static_cast<int>(ctx.grid.interior_nodes.size());
  const int M = pb.samples;

  // Old-grid range over active nodes, for the range-bound diagnostic.
  double old_min = std::numeric_limits<double>::infinity();
  double old_max = -std::numeric_limits<double>::infinity();
  if (range_violation) {
    for (int i = 0; i < ctx.grid.num_nodes(); ++i) {
      if (ctx.grid.kinds[i] == NodeKind::Inactive) continue;
      old_min = std::min(old_min, old_values[i]);
      old_max = std::max(old_max, old_values[i]);
    }
  }

  std::vector<double> chunk_change(kMaxChunks, 0.0);
  std::vector<double> chunk_violation(chunk_change.size(), 0.0);

  parallel_for(n_interior, [&](int begin, int end, int slot) {
    double local_change = 0.0;
    double local_violation = 0.0;
    std::vector<double> scratch(M);
    for (int k = begin; k < end; ++k) {
      const int node = ctx.grid.interior_nodes[k];
      for (int j = 0; j < M; ++j) {
        scratch[j] = read_sample(old_values, node, ctx.circle[j], nx);
      }
      double rhs = 0.0;
      if (ctx.needs_mean) {
        double sum = 0.0;
        for (const double v : scratch) sum += v;
        rhs += ctx.weights.boundary_mean * (sum / M);
      }
      if (ctx.needs_extrema) {
        double mx = old_values[node];  // the center belongs to the closed ball
        double mn = mx;
        for (const double v : scratch) {
          mx = std::max(mx, v);
          mn = std::min(mn, v);
        }
        rhs += ctx.weights.extreme * (mx + mn);
      }
      if (ctx.needs_ball_mean) {
        // equal-area rings with equal weights: a flat average over all samples
        double sum = 0.0;
        for (const auto& s : ctx.rings) sum += read_sample(old_values, node, s, nx);
        rhs += ctx.weights.ball_mean * (sum / ctx.rings.size());
      }
      if (ctx.needs_median) {
        // Average of the two middle order statistics; scratch is reordered.
        const auto mid = scratch.begin() + M / 2;
        std::nth_element(scratch.begin(), mid, scratch.end());
        const double upper = *mid;
        const double lower = *std::max_element(scratch.begin(), mid);
        rhs += ctx.weights.median * 0.5 * (lower + upper);
      }
      const double old_v = old_values[node];
      const double new_v = old_v + pb.damping * (rhs - old_v);
      new_values[node] = new_v;
      local_change = std::max(local_change, std::abs(new_v - old_v));
      if (range_violation) {
        local_violation = std::max({local_violation, new_v - old_max, old_min - new_v});
      }
    }
    chunk_change[slot] = std::max(chunk_change[slot], local_change);
    chunk_violation[slot] = std::max(chunk_violation[slot], local_violation);
  });

  if (range_violation) {
    for (const double v : chunk_violation) {
      *range_violation = std::max(*range_violation, v);
    }
  }
  double change = 0.0;
  for (const double c : chunk_change) change = std::max(change, c);
  return change;
}

std::vector<double> initial_values(const SolverProblem& pb, const GridDomain& grid) {
  std::vector<double> values(grid.num_nodes(), kNaN);
  double collar_sum = 0.0;
  int collar_count = 0;
  for (int i = 0; i < grid.num_nodes(); ++i) {
    if (grid.kinds[i] != NodeKind::Collar) continue;
    values[i] = pb.boundary_data.checked_value(grid.node(i));
    collar_sum += values[i];
    ++collar_count;
  }
  if (collar_count == 0) {
    throw std::invalid_argument("solve: grid has no collar nodes");
  }
  for (const int i : grid.interior_nodes) {
    switch (pb.init) {
      case InitialGuess::CollarMean:
        values[i] = collar_sum / collar_count;
        break;
      case InitialGuess::Constant:
        values[i] = pb.init_constant;
        break;
      case InitialGuess::BoundaryField:
        values[i] = pb.boundary_data.checked_value(grid.node(i));
        break;
      case InitialGuess::Values: {
        if (pb.init_values.size() != values.size()) {
          throw std::invalid_argument("solve: init_values size mismatch");
        }
        values[i] = pb.init_values[i];
        break;
      }
    }
  }
  return values;
}

void validate_problem(const SolverProblem& pb) {
  if (!(pb.h > 0.0)) throw std::invalid_argument("SolverProblem: h must be > 0");
  if (!(pb.eps >= 2.0 * pb.h - 1e-12)) {
    throw std::invalid_argument("SolverProblem: eps must be >= 2h");
  }
  if (!(pb.p > 1.0)) throw std::invalid_argument("SolverProblem: p must be > 1");
  if (!(pb.tol > 0.0)) throw std::invalid_argument("SolverProblem: tol must be > 0");
  if (!(pb.damping > 0.0 && pb.damping <= 1.0)) {
    throw std::invalid_argument("SolverProblem: damping must lie in (0, 1]");
  }
  if (!pb.boundary_data.value) {
    throw std::invalid_argument("SolverProblem: boundary_data is unset");
  }
}

}  // namespace

DomainSpec DomainSpec::rectangle(double x_lo, double y_lo, double x_hi, double y_hi) {
  if (!(x_lo < x_hi && y_lo < y_hi)) {
    throw std::invalid_argument("DomainSpec: degenerate rectangle");
  }
  DomainSpec s;
  s.shape = DomainShape::Rectangle;
  s.x_lo = x_lo;
  s.y_lo = y_lo;
  s.x_hi = x_hi;
  s.y_hi = y_hi;
  return s;
}

DomainSpec DomainSpec::annulus(double r0, double r1) {
  if (!(r0 > 0.0 && r0 < r1)) {
    throw std::invalid_argument("DomainSpec: annulus needs 0 < r0 < r1");
  }
  DomainSpec s;
  s.shape = DomainShape::Annulus;
  s.r0 = r0;
  s.r1 = r1;
  s.x_lo = -r1;
  s.y_lo = -r1;
  s.x_hi = r1;
  s.y_hi = r1;
  return s;
}

double DomainSpec::diameter() const {
  switch (shape) {
    case DomainShape::Rectangle: return std::hypot(x_hi - x_lo, y_hi - y_lo);
    case DomainShape::Annulus: return 2.0 * r1;
  }
  return 0.0;
}

int SolverProblem::effective_max_iters() const {
  if (max_iters > 0) return max_iters;
  const double d = domain.diameter() / eps;
  return static_cast<int>(std::ceil(10.0 * d * d));
}

GridDomain build_grid(const DomainSpec& spec, double h, double eps) {
  if (!(h > 0.0) || !(eps > 0.0)) {
    throw std::invalid_argument("build_grid: h and eps must be > 0");
  }
  GridDomain grid;
  grid.spec = spec;
  grid.h = h;
  grid.eps = eps;
  grid.x_lo = spec.x_lo;
  grid.y_lo = spec.y_lo;
  grid.nx = static_cast<int>(rounded_count(spec.x_hi - spec.x_lo, h, "x")) + 1;
  grid.ny = static_cast<int>(rounded_count(spec.y_hi - spec.y_lo, h, "y")) + 1;
  grid.kinds.resize(static_cast<size_t>(grid.nx) * grid.ny, NodeKind::Inactive);
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const int flat = iy * grid.nx + ix;
      const Point2 q = grid.node(ix, iy);
      if (ball_inside(spec, q, eps)) {
        grid.kinds[flat] = NodeKind::Interior;
        grid.interior_nodes.push_back(flat);
      } else if (distance_outside(spec, q) <= eps + 1e-12) {
        grid.kinds[flat] = NodeKind::Collar;
      }
    }
  }
  if (grid.interior_nodes.empty()) {
    throw std::invalid_argument("build_grid: no interior nodes (eps too large?)");
  }
  return grid;
}

double interpolate(const GridDomain& grid, std::span<const double> values,
                   Point2 q) {
  const double gx = (q.x1 - grid.x_lo) / grid.h;
  const double gy = (q.x2 - grid.y_lo) / grid.h;
  if (gx < -1e-9 || gy < -1e-9 || gx > grid.nx - 1 + 1e-9 || gy > grid.ny - 1 + 1e-9) {
    throw std::invalid_argument("interpolate: point outside the grid hull");
  }
  const int ix = std::clamp(static_cast<int>(std::floor(gx)), 0, grid.nx - 2);
  const int iy = std::clamp(static_cast<int>(std::floor(gy)), 0, grid.ny - 2);
  const double fx = gx - ix;
  const double fy = gy - iy;
  const int base = iy * grid.nx + ix;
  return (1.0 - fx) * (1.0 - fy) * values[base] + fx * (1.0 - fy) * values[base + 1] +
         (1.0 - fx) * fy * values[base + grid.nx] + fx * fy * values[base + grid.nx + 1];
}

std::pair<std::vector<double>, double> scheme_update(
    const SolverProblem& problem, const std::vector<double>& values) {
  validate_problem(problem);
  const SweepContext ctx = make_context(problem);
  if (values.size() != static_cast<size_t>(ctx.grid.num_nodes())) {
    throw std::invalid_argument("scheme_update: grid size mismatch");
  }
  std::vector<double> next = values;
  const double change = sweep(problem, ctx, values, next, nullptr);
  return {std::move(next), change};
}

SolverResult solve(const SolverProblem& problem) {
  validate_problem(problem);
  const SweepContext ctx = make_context(problem);
  const GridDomain& grid = ctx.grid;

  SolverResult result;
  std::vector<double> values = initial_values(problem, grid);
  std::vector<double> next = values;
  const int max_iters = problem.effective_max_iters();
  result.residual_profile.reserve(std::min(max_iters, 1 << 16));

  for (int it = 0; it < max_iters; ++it) {
    const double change =
        sweep(problem, ctx, values, next, &result.max_range_violation);
    values.swap(next);
    result.iterations = it + 1;
    result.final_change = change;
    result.residual_profile.push_back(change);
    if (!std::isfinite(change)) {
      throw std::runtime_error("solve: NaN/Inf detected in sweep " +
                               std::to_string(it + 1));
    }
    if (change <= problem.tol) {
      result.converged = true;
      break;
    }
  }
  result.values = std::move(values);
  return result;
}

std::vector<double> grid_from_field(const GridDomain& grid,
                                    const ScalarField2D& f) {
  std::vector<double> values(grid.num_nodes(), kNaN);
  for (int i = 0; i < grid.num_nodes(); ++i) {
    if (grid.kinds[i] == NodeKind::Inactive) continue;
    values[i] = f.checked_value(grid.node(i));
  }
  return values;
}

double sup_error_vs_field(const GridDomain& grid, std::span<const double> values,
                          const ScalarField2D& reference) {
  double err = 0.0;
  for (const int i : grid.interior_nodes) {
    err = std::max(err, std::abs(values[i] - reference.checked_value(grid.node(i))));
  }
  return err;
}

std::vector<ConvergenceRow> convergence_study(const SolverProblem& base,
                                              const ScalarField2D& exact,
                                              std::span<const double> eps_ladder,
                                              double eps_over_h) {
  if (!(eps_over_h >= 2.0)) {
    throw std::invalid_argument("convergence_study: eps_over_h must be >= 2");
  }
  std::vector<ConvergenceRow> rows;
  for (const double eps : eps_ladder) {
    SolverProblem pb = base;
    pb.eps = eps;
    pb.h = eps / eps_over_h;
    const SolverResult res = solve(pb);
    const GridDomain grid = build_grid(pb.domain, pb.h, pb.eps);
    ConvergenceRow row;
    row.eps = eps;
    row.h = pb.h;
    row.iterations = res.iterations;
    row.converged = res.converged;
    row.sup_error = sup_error_vs_field(grid, res.values, exact);
    row.max_range_violation = res.max_range_violation;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pstat
