#ifndef PSTAT_TESTS_SUPPORT_HPP
#define PSTAT_TESTS_SUPPORT_HPP

#include <cmath>
#include <random>

#include "pstat/fields.hpp"
#include "pstat/geometry.hpp"

namespace pstat::testing {

/// Centered finite-difference gradient of the field's value: the independent
/// oracle for analytic gradients.
inline Vec2 fd_gradient(const ScalarField2D& f, Point2 x, double h) {
  return {(f.value({x.x1 + h, x.x2}) - f.value({x.x1 - h, x.x2})) / (2 * h),
          (f.value({x.x1, x.x2 + h}) - f.value({x.x1, x.x2 - h})) / (2 * h)};
}

/// Centered second differences of the value: oracle for analytic Hessians.
inline SymMat2 fd_hessian(const ScalarField2D& f, Point2 x, double h) {
  const double c = f.value(x);
  const double a11 =
      (f.value({x.x1 + h, x.x2}) - 2 * c + f.value({x.x1 - h, x.x2})) / (h * h);
  const double a22 =
      (f.value({x.x1, x.x2 + h}) - 2 * c + f.value({x.x1, x.x2 - h})) / (h * h);
  const double a12 = (f.value({x.x1 + h, x.x2 + h}) - f.value({x.x1 + h, x.x2 - h}) -
                      f.value({x.x1 - h, x.x2 + h}) + f.value({x.x1 - h, x.x2 - h})) /
                     (4 * h * h);
  return {a11, a12, a22};
}

/// f composed with a rotation by angle alpha: g(x) = f(R x). Used for the
/// rotation-invariance properties.
inline ScalarField2D rotated_field(const ScalarField2D& f, double alpha) {
  const double c = std::cos(alpha), s = std::sin(alpha);
  auto rot = [c, s](Point2 p) { return Point2{c * p.x1 - s * p.x2, s * p.x1 + c * p.x2}; };
  ScalarField2D g;
  g.id = f.id + "+rot";
  g.value = [f, rot](Point2 p) { return f.value(rot(p)); };
  g.gradient = [f, rot, c, s](Point2 p) {
    const Vec2 gr = f.gradient(rot(p));
    return Vec2{c * gr.x1 + s * gr.x2, -s * gr.x1 + c * gr.x2};
  };
  g.hessian = [f, rot, c, s](Point2 p) {
    const SymMat2 H = f.hessian(rot(p));
    // R^T H R with R = [[c,-s],[s,c]].
    const double b11 = c * (H.a11 * c + H.a12 * s) + s * (H.a12 * c + H.a22 * s);
    const double b12 = c * (-H.a11 * s + H.a12 * c) + s * (-H.a12 * s + H.a22 * c);
    const double b22 = -s * (-H.a11 * s + H.a12 * c) + c * (-H.a12 * s + H.a22 * c);
    return SymMat2{b11, b12, b22};
  };
  if (f.domain) {
    auto dom = f.domain;
    g.domain = [dom, rot](Point2 p) { return dom(rot(p)); };
  }
  return g;
}

/// f translated by t: g(x) = f(x + t).
inline ScalarField2D translated_field(const ScalarField2D& f, Vec2 t) {
  ScalarField2D g;
  g.id = f.id + "+shift";
  g.value = [f, t](Point2 p) { return f.value(p + t); };
  g.gradient = [f, t](Point2 p) { return f.gradient(p + t); };
  g.hessian = [f, t](Point2 p) { return f.hessian(p + t); };
  if (f.domain) {
    auto dom = f.domain;
    g.domain = [dom, t](Point2 p) { return dom(p + t); };
  }
  return g;
}

/// Deterministic point sampler over a box, rejecting near-degenerate
/// gradients and inadmissible points.
inline Point2 random_nondegenerate_point(std::mt19937_64& rng, const ScalarField2D& f,
                                         double lo, double hi,
                                         double min_grad = 1e-6) {
  std::uniform_real_distribution<double> dist(lo, hi);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const Point2 x{dist(rng), dist(rng)};
    if (!f.admissible(x)) continue;
    if (f.gradient(x).norm() < min_grad) continue;
    return x;
  }
  throw std::runtime_error("random_nondegenerate_point: sampling failed for " + f.id);
}

}  // namespace pstat::testing

#endif
