#ifndef PSTAT_GEOMETRY_HPP
#define PSTAT_GEOMETRY_HPP

#include <cmath>

namespace pstat {

struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;

  double norm() const { return std::hypot(x1, x2); }
  double squared_norm() const { return x1 * x1 + x2 * x2; }
  Vec2 perp() const { return {-x2, x1}; }
};

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;
};

inline Vec2 operator*(double s, Vec2 v) { return {s * v.x1, s * v.x2}; }
inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
inline double dot(Vec2 a, Vec2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }

inline Point2 operator+(Point2 p, Vec2 v) { return {p.x1 + v.x1, p.x2 + v.x2}; }
inline Point2 operator-(Point2 p, Vec2 v) { return {p.x1 - v.x1, p.x2 - v.x2}; }
inline Vec2 operator-(Point2 a, Point2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }

/// Symmetric 2x2 matrix, stored as the three independent entries.
struct SymMat2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;

  double trace() const { return a11 + a22; }
  /// Quadratic form v^T A v.
  double quad(Vec2 v) const {
    return a11 * v.x1 * v.x1 + 2.0 * a12 * v.x1 * v.x2 + a22 * v.x2 * v.x2;
  }
};

/// Unit vector at angle theta.
inline Vec2 unit_vector(double theta) { return {std::cos(theta), std::sin(theta)}; }

}  // namespace pstat

#endif
