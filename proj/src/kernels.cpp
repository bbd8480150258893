#include "heisenclone/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "heisenclone/logspace.hpp"

namespace heisenclone::kernels {

namespace {

inline double convolve_one(std::span<const double> in, std::span<const std::int64_t> shifts,
                           std::span<const double> log_p, std::int64_t j) {
  const auto n_in = static_cast<std::int64_t>(in.size());
  double hi = logspace::neg_inf;
  for (std::size_t k = 0; k < shifts.size(); ++k) {
    std::int64_t src = j - shifts[k];
    if (src < 0 || src >= n_in) continue;
    hi = std::max(hi, in[src] + log_p[k]);
  }
  if (hi == logspace::neg_inf) return hi;
  double acc = 0.0;
  for (std::size_t k = 0; k < shifts.size(); ++k) {
    std::int64_t src = j - shifts[k];
    if (src < 0 || src >= n_in) continue;
    double v = in[src] + log_p[k];
    if (v != logspace::neg_inf) acc += std::exp(v - hi);
  }
  return hi + std::log(acc);
}

inline double overlap_one(std::span<const double> a, std::span<const double> b, std::int64_t shift) {
  const auto nb = static_cast<std::int64_t>(b.size());
  const auto na = static_cast<std::int64_t>(a.size());
  std::int64_t lo = std::max<std::int64_t>(0, -shift);
  std::int64_t hi = std::min<std::int64_t>(na, nb - shift);
  logspace::CompensatedSum sum;
  for (std::int64_t i = lo; i < hi; ++i) {
    double v = a[i] + b[i + shift];
    if (v != logspace::neg_inf) sum.add(std::exp(v));
  }
  return sum.value();
}

inline double window_one(std::span<const std::int64_t> offsets, std::span<const double> b, std::int64_t shift) {
  const auto nb = static_cast<std::int64_t>(b.size());
  logspace::CompensatedSum sum;
  for (std::int64_t off : offsets) {
    std::int64_t idx = off + shift;
    if (idx >= 0 && idx < nb) sum.add(b[idx]);
  }
  return sum.value();
}

}  // namespace

void convolve_step(std::span<const double> in, std::span<const std::int64_t> shifts,
                   std::span<const double> log_p, std::span<double> out, Exec exec) {
  const auto n_out = static_cast<std::int64_t>(out.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < n_out; ++j) out[j] = convolve_one(in, shifts, log_p, j);
  } else {
    for (std::int64_t j = 0; j < n_out; ++j) out[j] = convolve_one(in, shifts, log_p, j);
  }
}

void shifted_overlap(std::span<const double> a, std::span<const double> b, std::int64_t first_shift,
                     std::span<double> out, Exec exec) {
  const auto n_out = static_cast<std::int64_t>(out.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t s = 0; s < n_out; ++s) out[s] = overlap_one(a, b, first_shift + s);
  } else {
    for (std::int64_t s = 0; s < n_out; ++s) out[s] = overlap_one(a, b, first_shift + s);
  }
}

void window_sums(std::span<const std::int64_t> offsets, std::span<const double> b, std::int64_t first_shift,
                 std::span<double> out, Exec exec) {
  const auto n_out = static_cast<std::int64_t>(out.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t s = 0; s < n_out; ++s) out[s] = window_one(offsets, b, first_shift + s);
  } else {
    for (std::int64_t s = 0; s < n_out; ++s) out[s] = window_one(offsets, b, first_shift + s);
  }
}

}  // namespace heisenclone::kernels
