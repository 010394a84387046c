#ifndef PSTAT_FIELDS_HPP
#define PSTAT_FIELDS_HPP

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pstat/geometry.hpp"

namespace pstat {

class InadmissiblePointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A smooth scalar function of two variables with analytic first and second
/// derivatives. Derivatives are exact; finite differences are used only as a
/// cross-check (see check_field_consistency).
struct ScalarField2D {
  std::string id;
  std::function<double(Point2)> value;
  std::function<Vec2(Point2)> gradient;
  std::function<SymMat2(Point2)> hessian;
  /// Where the field is smooth; empty means the whole plane.
  std::function<bool(Point2)> domain;

  bool admissible(Point2 p) const { return !domain || domain(p); }
  /// Value with an admissibility check; throws InadmissiblePointError.
  double checked_value(Point2 p) const;
};

ScalarField2D constant_field(double c);
ScalarField2D affine_field(double a, double b, double c);
/// a*x1^2 + b*x2^2
ScalarField2D quadratic_field(double a, double b);

/// |x|^{(p-2)/(p-1)} for 1 < p < 2, singular at the origin. The domain
/// excludes a disk of radius origin_margin around the singularity.
ScalarField2D fundamental_solution(double p, double origin_margin = 1e-8);

/// The named battery: every field downstream tests refer to, addressable by id.
const std::vector<ScalarField2D>& battery();

/// Resolves a field identifier: any battery name, or one of the parametric
/// forms "const:c", "affine:a,b,c", "quad:a,b", "fundsol:p".
ScalarField2D field_by_id(std::string_view id);

struct ConsistencyRow {
  Point2 point;
  double grad_deviation;  // max-abs difference, analytic vs centered FD of value
  double hess_deviation;  // max-abs difference, analytic vs centered FD of gradient
};

struct ConsistencyReport {
  std::vector<ConsistencyRow> rows;
  double max_grad_deviation = 0.0;
  double max_hess_deviation = 0.0;
};

/// Cross-checks the analytic derivatives against centered finite differences
/// with step h. Every point must be admissible with margin 2h.
ConsistencyReport check_field_consistency(const ScalarField2D& f,
                                          std::span<const Point2> pts, double h);

}  // namespace pstat

#endif
