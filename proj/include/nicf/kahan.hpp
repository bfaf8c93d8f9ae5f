#pragma once

#include <cmath>

namespace nicf {

// Neumaier-compensated accumulator. The branch sums behind the transfer
// operators run over ~10^4 terms whose partition identities must hold to
// 1e-12; plain accumulation loses ~4e-12 there, compensation keeps the
// residual at the few-ulp level.
class Accumulator {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double total() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace nicf
