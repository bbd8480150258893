#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace heisenclone::logspace {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)), exact for -inf operands.
inline double add(double a, double b) {
  if (a == neg_inf) return b;
  if (b == neg_inf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// Neumaier-compensated running sum. Summation order is the call order.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// log(sum_i exp(x_i)) with a compensated inner sum; -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> xs);

// Streaming form of log_sum_exp for values produced on the fly.
class LogAccumulator {
 public:
  void add(double log_x);
  double value() const;

 private:
  double max_ = neg_inf;
  CompensatedSum scaled_;
};

}  // namespace heisenclone::logspace
