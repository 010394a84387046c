#ifndef PSTAT_COUNTEREXAMPLE_HPP
#define PSTAT_COUNTEREXAMPLE_HPP

#include <stdexcept>

namespace pstat {

class QuadratureBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Circle statistics of the fundamental solution u_p(x) = |x|^{(p-2)/(p-1)}
/// around a center (x1, 0) on the positive axis, with the circle kept away
/// from the singularity: 0 < eps < x1.
struct CounterexampleCase {
  double p;    // in (1, 2)
  double x1;   // > 0
  double eps;  // in (0, x1)
};

void validate(const CounterexampleCase& c);

/// Closed form (x1^2 + eps^2)^{(p-2)/(2(p-1))}: the median over the circle,
/// attained at the vertical antipodal pair because u_p is radial and radially
/// decreasing.
double fundsol_median(const CounterexampleCase& c);

/// (1/2pi) Int_0^{2pi} (x1^2 + 2 x1 eps cos t + eps^2)^{(p-2)/(2(p-1))} dt by
/// periodic trapezoid with node doubling until successive values agree to
/// 1e-13.
double fundsol_mean(const CounterexampleCase& c, int quadrature_nodes = 64);

/// u_p(x) - (2/p - 1) median - (2 - 2/p) mean: how far the median/mean
/// identity is from holding at a fixed radius. Zero would mean the identity
/// holds non-asymptotically.
double residual_fe1_nonasymptotic(const CounterexampleCase& c);

/// d/d(eps) of residual_fe1_nonasymptotic via the differentiated closed
/// forms (the integrand-based route, not finite differences).
double fe1_residual_eps_derivative(const CounterexampleCase& c);

/// D(eps) = (1/pi) Int_0^{2pi} ((1 + 2 eps cos t + eps^2)/(1 + eps^2))^{-3/2}
/// (cos t + eps) dt at the specialization p = 3/2, x1 = 1. The median/mean
/// identity would force D(eps) = -eps; instead D(eps) = -eps - (21/8) eps^3
/// + O(eps^5).
double derivative_identity_deviation(double eps);

/// RHS - 1 of the median/midrange identity at p = 3/2, x1 = 1 using closed
/// forms: (2/3)(1+eps^2)^{-1/2} + (1/6)(1/(1-eps) + 1/(1+eps)) - 1.
/// Positive for 0 < eps < 1; expands to (7/12) eps^4 + O(eps^6).
double residual_fe2_nonasymptotic(double eps);

}  // namespace pstat

#endif
