#include "heisenclone/logspace.hpp"

#include <algorithm>

namespace heisenclone::logspace {

double log_sum_exp(std::span<const double> xs) {
  double hi = neg_inf;
  for (double x : xs) hi = std::max(hi, x);
  if (hi == neg_inf) return neg_inf;
  if (std::isinf(hi)) return hi;
  CompensatedSum s;
  for (double x : xs) {
    if (x != neg_inf) s.add(std::exp(x - hi));
  }
  return hi + std::log(s.value());
}

void LogAccumulator::add(double log_x) {
  if (log_x == neg_inf) return;
  if (log_x > max_) {
    // rescale what we have so far to the new maximum
    double scale = (max_ == neg_inf) ? 0.0 : std::exp(max_ - log_x);
    CompensatedSum rescaled;
    rescaled.add(scaled_.value() * scale);
    scaled_ = rescaled;
    max_ = log_x;
  }
  scaled_.add(std::exp(log_x - max_));
}

double LogAccumulator::value() const {
  if (max_ == neg_inf) return neg_inf;
  return max_ + std::log(scaled_.value());
}

}  // namespace heisenclone::logspace
