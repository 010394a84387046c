#ifndef PSTAT_NUMERIC_HPP
#define PSTAT_NUMERIC_HPP

#include <cmath>
#include <cstddef>

namespace pstat {

/// Neumaier compensated accumulator. Circle averages feed differences that
/// must resolve residuals near 1e-13, so plain summation noise is not
/// acceptable there.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace pstat

#endif
