#ifndef PSTAT_SCHEMES_HPP
#define PSTAT_SCHEMES_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace pstat {

/// The three statistical functional equations used both as identities to
/// verify and as fixed-point update rules.
enum class Scheme {
  Fe1,       // (2/p - 1) median + (2 - 2/p) boundary mean
  Fe2,       // (1/p) median + ((p-1)/(2p)) (max + min)
  Manfredi,  // (alpha/2)(max + min) + beta ball mean, alpha=(p-2)/(p+2), beta=4/(p+2)
};

/// Statistic weights of a scheme at exponent p. `extreme` multiplies max and
/// min separately, so the weights sum to
/// median + boundary_mean + ball_mean + 2*extreme == 1.
struct SchemeWeights {
  double median = 0.0;
  double boundary_mean = 0.0;
  double ball_mean = 0.0;
  double extreme = 0.0;

  double sum() const { return median + boundary_mean + ball_mean + 2.0 * extreme; }
};

inline SchemeWeights scheme_weights(Scheme scheme, double p) {
  if (!(p > 1.0)) {
    throw std::invalid_argument("scheme_weights: p must lie in (1, inf)");
  }
  SchemeWeights w;
  switch (scheme) {
    case Scheme::Fe1:
      w.median = 2.0 / p - 1.0;
      w.boundary_mean = 2.0 - 2.0 / p;
      break;
    case Scheme::Fe2:
      w.median = 1.0 / p;
      w.extreme = (p - 1.0) / (2.0 * p);
      break;
    case Scheme::Manfredi: {
      // N = 2: alpha = (p-2)/(p+N), beta = (2+N)/(p+N).
      const double alpha = (p - 2.0) / (p + 2.0);
      w.extreme = 0.5 * alpha;
      w.ball_mean = 4.0 / (p + 2.0);
      break;
    }
  }
  return w;
}

/// True when every statistic weight is nonnegative, i.e. the fixed-point
/// update is monotone (Fe2 for all p; Fe1 needs p <= 2, Manfredi p >= 2).
inline bool scheme_monotone(Scheme scheme, double p) {
  const SchemeWeights w = scheme_weights(scheme, p);
  return w.median >= 0.0 && w.boundary_mean >= 0.0 && w.ball_mean >= 0.0 &&
         w.extreme >= 0.0;
}

inline std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Fe1: return "fe1";
    case Scheme::Fe2: return "fe2";
    case Scheme::Manfredi: return "manfredi";
  }
  return "?";
}

inline Scheme scheme_from_name(std::string_view name) {
  if (name == "fe1") return Scheme::Fe1;
  if (name == "fe2") return Scheme::Fe2;
  if (name == "manfredi") return Scheme::Manfredi;
  throw std::invalid_argument("unknown scheme '" + std::string(name) +
                              "' (expected fe1, fe2 or manfredi)");
}

}  // namespace pstat

#endif
