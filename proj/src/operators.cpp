#include "pstat/operators.hpp"

#include <cmath>
#include <sstream>

namespace pstat {

namespace {

void require_valid_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("operators: p must lie in (1, inf), got " +
                                std::to_string(p));
  }
}

}  // namespace

OperatorValues evaluate_operators(const ScalarField2D& f, Point2 x, double p,
                                  double gradient_floor) {
  require_valid_p(p);
  if (!f.admissible(x)) {
    throw InadmissiblePointError("evaluate_operators: point outside field domain");
  }
  const Vec2 g = f.gradient(x);
  const double gn = g.norm();
  if (gn < gradient_floor) {
    std::ostringstream os;
    os << "evaluate_operators: |Du| = " << gn << " below floor " << gradient_floor
       << " at (" << x.x1 << ", " << x.x2 << ")";
    throw DegenerateGradientError(os.str());
  }
  const SymMat2 H = f.hessian(x);
  const double g2 = g.squared_norm();

  OperatorValues out;
  out.grad_norm = gn;
  out.laplacian = H.trace();
  out.infty_laplacian = H.quad(g) / g2;
  out.one_laplacian = H.quad(g.perp()) / g2;
  out.p_laplacian =
      std::pow(gn, p - 2.0) * (out.laplacian + (p - 2.0) * out.infty_laplacian);
  return out;
}

DecompositionResiduals check_decompositions(const ScalarField2D& f, Point2 x,
                                            double p, double gradient_floor) {
  const OperatorValues v = evaluate_operators(f, x, p, gradient_floor);
  const double scale = std::pow(v.grad_norm, p - 2.0);
  DecompositionResiduals r;
  r.grad_infty_form =
      v.p_laplacian - scale * (v.laplacian + (p - 2.0) * v.infty_laplacian);
  r.lap_one_form =
      v.p_laplacian - scale * ((p - 1.0) * v.laplacian + (2.0 - p) * v.one_laplacian);
  r.one_infty_form =
      v.p_laplacian - scale * (v.one_laplacian + (p - 1.0) * v.infty_laplacian);
  return r;
}

PHarmonicCheck verify_p_harmonic_pointwise(const ScalarField2D& f,
                                           std::span<const Point2> pts, double p,
                                           double tol, double gradient_floor) {
  PHarmonicCheck check;
  for (const Point2 x : pts) {
    const OperatorValues v = evaluate_operators(f, x, p, gradient_floor);
    check.max_abs_p_laplacian =
        std::max(check.max_abs_p_laplacian, std::abs(v.p_laplacian));
  }
  check.p_harmonic = check.max_abs_p_laplacian <= tol;
  return check;
}

}  // namespace pstat
