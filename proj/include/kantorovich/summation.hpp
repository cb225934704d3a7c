#pragma once

#include <cmath>

namespace kantorovich {

/// Neumaier-compensated accumulator. Results depend only on the order of
/// add() calls, so a fixed loop order gives bit-identical sums.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
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

}  // namespace kantorovich
