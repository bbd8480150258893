#pragma once

#include <cstdint>
#include <span>

// Data-parallel inner loops. Every kernel has a serial reference and an OpenMP version that
// computes each output element with the same arithmetic in the same order, so the two agree
// bit for bit.
namespace heisenclone {

enum class Exec { serial, parallel };

namespace kernels {

// One log-space convolution step:
//   out[j] = log sum_k exp(in[j - shifts[k]] + log_p[k])
// with out.size() == in.size() + max(shifts). Shifts are non-negative and ascending.
void convolve_step(std::span<const double> in, std::span<const std::int64_t> shifts,
                   std::span<const double> log_p, std::span<double> out, Exec exec);

// Overlap of two half-log vectors under a family of shifts:
//   out[s] = sum_i exp(a[i] + b[i + first_shift + s])
// where out-of-range b indices contribute nothing.
void shifted_overlap(std::span<const double> a, std::span<const double> b, std::int64_t first_shift,
                     std::span<double> out, Exec exec);

// Sums of a linear-space vector over a fixed index pattern moved along the grid:
//   out[s] = sum_i b[offsets[i] + first_shift + s]
// with out-of-range indices skipped.
void window_sums(std::span<const std::int64_t> offsets, std::span<const double> b, std::int64_t first_shift,
                 std::span<double> out, Exec exec);

// Runs fn(i) for i in [0, count) across threads when exec is parallel.
template <class Fn>
void for_each_index(std::int64_t count, Exec exec, Fn&& fn) {
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) fn(i);
  } else {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
  }
}

}  // namespace kernels
}  // namespace heisenclone
