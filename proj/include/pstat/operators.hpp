#ifndef PSTAT_OPERATORS_HPP
#define PSTAT_OPERATORS_HPP

#include <span>
#include <stdexcept>

#include "pstat/fields.hpp"
#include "pstat/geometry.hpp"

namespace pstat {

/// Raised when an operator that divides by |Du| is requested at a point where
/// the gradient is (numerically) zero. The definitions exclude critical
/// points; there is no conventional value to return.
class DegenerateGradientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kGradientFloor = 1e-10;

struct OperatorValues {
  double laplacian = 0.0;        // trace of the Hessian
  double one_laplacian = 0.0;    // second derivative along the level-line direction
  double infty_laplacian = 0.0;  // second derivative along the gradient direction
  double p_laplacian = 0.0;      // |Du|^{p-2} (lap + (p-2) infty)
  double grad_norm = 0.0;
};

OperatorValues evaluate_operators(const ScalarField2D& f, Point2 x, double p,
                                  double gradient_floor = kGradientFloor);

/// Residuals of the three algebraically equivalent forms of the p-Laplacian,
/// all measured against the canonical |Du|^{p-2}(lap + (p-2) infty) value.
struct DecompositionResiduals {
  double grad_infty_form = 0.0;  // lap + (p-2) infty
  double lap_one_form = 0.0;     // (p-1) lap + (2-p) one
  double one_infty_form = 0.0;   // one + (p-1) infty
};

DecompositionResiduals check_decompositions(const ScalarField2D& f, Point2 x,
                                            double p,
                                            double gradient_floor = kGradientFloor);

struct PHarmonicCheck {
  bool p_harmonic = false;
  double max_abs_p_laplacian = 0.0;
};

PHarmonicCheck verify_p_harmonic_pointwise(const ScalarField2D& f,
                                           std::span<const Point2> pts, double p,
                                           double tol,
                                           double gradient_floor = kGradientFloor);

}  // namespace pstat

#endif
