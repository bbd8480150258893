#include "heisenclone/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "heisenclone/error.hpp"
#include "heisenclone/logspace.hpp"

namespace heisenclone {

// ---------------------------------------------------------------------------------------------
// Spectrum

double Spectrum::p_min() const { return *std::min_element(probs_.begin(), probs_.end()); }

double Spectrum::mean_grid() const {
  logspace::CompensatedSum s;
  for (std::size_t k = 0; k < size(); ++k) s.add(probs_[k] * static_cast<double>(int_energies_[k]));
  return s.value();
}

double Spectrum::norm_inf() const {
  double out = 0.0;
  for (const auto& e : energies_) out = std::max(out, std::abs(e.to_double()));
  return out;
}

double Spectrum::centered_norm_inf_grid() const {
  double mean = mean_grid();
  double out = 0.0;
  for (auto e : int_energies_) out = std::max(out, std::abs(static_cast<double>(e) - mean));
  return out;
}

Spectrum normalize_spectrum(std::span<const RawLevel> raw) {
  std::map<Rational, double> merged;
  double total = 0.0;
  for (const auto& level : raw) {
    Rational energy = Rational::parse(level.energy);
    if (std::isnan(level.prob) || std::isinf(level.prob))
      throw ValidationError("probability for energy " + level.energy + " is not finite");
    if (level.prob < 0.0)
      throw ValidationError("negative probability for energy " + level.energy);
    total += level.prob;
    if (level.prob == 0.0) continue;
    merged[energy] += level.prob;
  }
  if (merged.size() < 2)
    throw ValidationError("degenerate spectrum: fewer than 2 levels with positive probability");
  if (std::abs(total - 1.0) > 1e-9)
    throw ValidationError("probabilities sum to " + std::to_string(total) + ", expected 1 within 1e-9");

  std::int64_t lcm = 1;
  for (const auto& [e, p] : merged) {
    std::int64_t g = std::gcd(lcm, e.den());
    std::int64_t next = 0;
    if (__builtin_mul_overflow(lcm / g, e.den(), &next))
      throw ValidationError("energy denominators are too large for an exact integer grid");
    lcm = next;
  }

  Spectrum s;
  s.grid_unit_ = Rational(1, lcm);
  logspace::CompensatedSum norm;
  for (const auto& [e, p] : merged) norm.add(p);
  for (const auto& [e, p] : merged) {
    std::int64_t scaled = 0;
    if (__builtin_mul_overflow(e.num(), lcm / e.den(), &scaled))
      throw ValidationError("energy " + e.str() + " does not fit the integer grid");
    s.energies_.push_back(e);
    s.int_energies_.push_back(scaled);
    s.probs_.push_back(p / norm.value());
  }
  for (double p : s.probs_) s.log_probs_.push_back(std::log(p));
  return s;
}

// ---------------------------------------------------------------------------------------------
// EnergyDistribution

EnergyDistribution::EnergyDistribution(int n_copies, std::int64_t offset, std::vector<double> log_weights)
    : n_copies_(n_copies), offset_(offset), log_weights_(std::move(log_weights)) {
  support_size_ = static_cast<std::size_t>(
      std::count_if(log_weights_.begin(), log_weights_.end(), [](double w) { return w != logspace::neg_inf; }));
}

double EnergyDistribution::log_prob(std::int64_t energy) const {
  if (energy < min_energy() || energy > max_energy()) return logspace::neg_inf;
  return log_weights_[static_cast<std::size_t>(energy - offset_)];
}

double EnergyDistribution::prob(std::int64_t energy) const { return std::exp(log_prob(energy)); }

bool EnergyDistribution::in_support(std::int64_t energy) const { return log_prob(energy) != logspace::neg_inf; }

namespace {

std::size_t checked_grid_size(const Spectrum& s, int n, const Limits& limits) {
  if (n < 1) throw DomainError("number of copies must be at least 1, got " + std::to_string(n));
  __int128 size = static_cast<__int128>(n) * s.span() + 1;
  if (size > static_cast<__int128>(limits.support_cap))
    throw ResourceError("energy grid of " + std::to_string(static_cast<double>(size)) +
                            " points exceeds the support cap of " + std::to_string(limits.support_cap),
                        static_cast<double>(size));
  return static_cast<std::size_t>(size);
}

void normalize_in_place(std::vector<double>& lw) {
  double z = logspace::log_sum_exp(lw);
  for (double& w : lw)
    if (w != logspace::neg_inf) w -= z;
}

// Binomial law on a two-level grid. Log-ratios are accumulated outward from the mode.
EnergyDistribution two_level_distribution(const Spectrum& s, int n, std::size_t grid) {
  const std::int64_t stride = s.span();
  const double lp0 = s.log_probs()[0];
  const double lp1 = s.log_probs()[1];
  std::vector<double> lw(grid, logspace::neg_inf);
  int mode = std::clamp(static_cast<int>(std::floor((n + 1) * s.probs()[1])), 0, n);
  std::vector<double> rel(static_cast<std::size_t>(n) + 1);
  rel[mode] = 0.0;
  for (int j = mode; j < n; ++j)
    rel[j + 1] = rel[j] + std::log(static_cast<double>(n - j)) - std::log(static_cast<double>(j + 1)) + lp1 - lp0;
  for (int j = mode; j > 0; --j)
    rel[j - 1] = rel[j] + std::log(static_cast<double>(j)) - std::log(static_cast<double>(n - j + 1)) + lp0 - lp1;
  for (int j = 0; j <= n; ++j) lw[static_cast<std::size_t>(j * stride)] = rel[j];
  normalize_in_place(lw);
  return EnergyDistribution(n, static_cast<std::int64_t>(n) * s.min_int_energy(), std::move(lw));
}

}  // namespace

EnergyDistribution n_copy_distribution_convolution(const Spectrum& s, int n, const Limits& limits, Exec exec) {
  const std::size_t grid = checked_grid_size(s, n, limits);
  std::vector<std::int64_t> shifts;
  for (auto e : s.int_energies()) shifts.push_back(e - s.min_int_energy());

  std::vector<double> cur(static_cast<std::size_t>(s.span()) + 1, logspace::neg_inf);
  for (std::size_t k = 0; k < s.size(); ++k) cur[static_cast<std::size_t>(shifts[k])] = s.log_probs()[k];
  std::vector<double> next;
  next.reserve(grid);
  for (int copies = 2; copies <= n; ++copies) {
    next.assign(cur.size() + static_cast<std::size_t>(s.span()), logspace::neg_inf);
    kernels::convolve_step(cur, shifts, s.log_probs(), next, exec);
    std::swap(cur, next);
  }
  normalize_in_place(cur);
  return EnergyDistribution(n, static_cast<std::int64_t>(n) * s.min_int_energy(), std::move(cur));
}

EnergyDistribution n_copy_distribution(const Spectrum& s, int n, const Limits& limits) {
  const std::size_t grid = checked_grid_size(s, n, limits);
  if (s.size() == 2) return two_level_distribution(s, n, grid);
  return n_copy_distribution_convolution(s, n, limits, Exec::parallel);
}

// ---------------------------------------------------------------------------------------------
// Partitions

int Partition::total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

std::uint64_t partition_count(int n, int k) {
  if (n < 0 || k < 1) return 0;
  // C(n+k-1, r) with r = min(k-1, n), computed incrementally; each prefix is itself a binomial.
  const std::uint64_t top = static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(k) - 1;
  const std::uint64_t r = std::min<std::uint64_t>(static_cast<std::uint64_t>(k) - 1, static_cast<std::uint64_t>(n));
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    c = c * (top - r + i) / i;
    if (c > static_cast<unsigned __int128>(UINT64_MAX)) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(c);
}

namespace {

void enumerate_rec(int remaining, std::size_t pos, std::vector<int>& cur, std::vector<Partition>& out) {
  if (pos + 1 == cur.size()) {
    cur[pos] = remaining;
    out.push_back(Partition{cur});
    return;
  }
  for (int c = 0; c <= remaining; ++c) {
    cur[pos] = c;
    enumerate_rec(remaining - c, pos + 1, cur, out);
  }
}

}  // namespace

std::vector<Partition> enumerate_partitions(int n, int k, const Limits& limits) {
  if (n < 0 || k < 1) throw DomainError("partitions need n >= 0 and k >= 1");
  std::uint64_t count = partition_count(n, k);
  if (count > limits.partition_cap)
    throw ResourceError("enumerating partitions of " + std::to_string(n) + " into " + std::to_string(k) +
                            " parts would produce " + std::to_string(count) + " entries, cap is " +
                            std::to_string(limits.partition_cap),
                        static_cast<double>(count));
  std::vector<Partition> out;
  out.reserve(count);
  std::vector<int> cur(static_cast<std::size_t>(k), 0);
  enumerate_rec(n, 0, cur, out);
  return out;
}

double multinomial_weight(const Spectrum& s, const Partition& n) {
  if (n.counts.size() != s.size())
    throw DomainError("partition has " + std::to_string(n.counts.size()) + " parts, spectrum has " +
                      std::to_string(s.size()) + " levels");
  double out = std::lgamma(static_cast<double>(n.total()) + 1.0);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const int c = n.counts[k];
    if (c < 0) throw DomainError("partition has a negative part");
    if (c > 0) out += c * s.log_probs()[k];
    out -= std::lgamma(static_cast<double>(c) + 1.0);
  }
  return out;
}

std::int64_t partition_energy(const Spectrum& s, const Partition& n) {
  std::int64_t e = 0;
  for (std::size_t k = 0; k < s.size(); ++k) e += static_cast<std::int64_t>(n.counts[k]) * s.int_energies()[k];
  return e;
}

// ---------------------------------------------------------------------------------------------
// Anchors

namespace {

constexpr double kTieTolerance = 1e-12;

// Indices sorted by decreasing fractional part, ties toward the lower-energy level.
std::vector<std::size_t> remainder_order(const std::vector<double>& frac) {
  std::vector<std::size_t> order(frac.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (std::abs(frac[a] - frac[b]) <= kTieTolerance) return a < b;
    return frac[a] > frac[b];
  });
  return order;
}

}  // namespace

Partition largest_remainder(const Spectrum& s, int total) {
  const std::size_t k = s.size();
  std::vector<int> counts(k);
  std::vector<double> frac(k);
  int assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    double quota = static_cast<double>(total) * s.probs()[i];
    double fl = std::floor(quota + kTieTolerance);
    counts[i] = static_cast<int>(fl);
    frac[i] = std::max(0.0, quota - fl);
    assigned += counts[i];
  }
  auto order = remainder_order(frac);
  int residual = total - assigned;
  for (std::size_t j = 0; residual > 0; j = (j + 1) % k, --residual) ++counts[order[j]];
  // residual < 0 only through floating-point overshoot of the floors
  while (residual < 0) {
    for (auto it = order.rbegin(); it != order.rend() && residual < 0; ++it)
      if (counts[*it] > 0) --counts[*it], ++residual;
  }
  return Partition{counts};
}

AnchorPair anchor_shift(const Spectrum& s, int n, int m) {
  if (n < 1 || m < n)
    throw DomainError("anchor shift needs 1 <= N <= M, got N=" + std::to_string(n) + ", M=" + std::to_string(m));
  AnchorPair out{largest_remainder(s, n), largest_remainder(s, m), 0};

  // Largest-remainder rounding is not monotone in the total (the Alabama paradox), so m0 may
  // fall below n0 on some level. m0 >= n0 is what keeps every shifted N-copy energy inside the
  // M-copy spectrum; restore it within the |m0_E - M p_E| <= 1 band.
  bool monotone = true;
  for (std::size_t i = 0; i < s.size(); ++i) monotone &= out.m0.counts[i] >= out.n0.counts[i];
  if (!monotone) {
    const std::size_t k = s.size();
    std::vector<int> lo(k), hi(k);
    std::vector<double> frac(k);
    for (std::size_t i = 0; i < k; ++i) {
      double quota = static_cast<double>(m) * s.probs()[i];
      lo[i] = std::max({out.n0.counts[i], static_cast<int>(std::ceil(quota - 1.0 - kTieTolerance)), 0});
      hi[i] = static_cast<int>(std::floor(quota + 1.0 + kTieTolerance));
      frac[i] = quota - std::floor(quota + kTieTolerance);
    }
    auto& c = out.m0.counts;
    for (std::size_t i = 0; i < k; ++i) c[i] = std::clamp(c[i], lo[i], std::max(lo[i], hi[i]));
    auto order = remainder_order(frac);
    int sum = out.m0.total();
    for (std::size_t pass = 0; sum < m && pass < k; ++pass)
      for (auto i : order)
        if (sum < m && c[i] < hi[i]) ++c[i], ++sum;
    for (std::size_t pass = 0; sum > m && pass < k; ++pass)
      for (auto it = order.rbegin(); it != order.rend(); ++it)
        if (sum > m && c[*it] > lo[*it]) --c[*it], --sum;
    if (sum != m)
      throw ConstructionError("no anchor partition of M=" + std::to_string(m) + " dominates the anchor of N=" +
                              std::to_string(n));
  }
  out.delta_e0 = partition_energy(s, out.m0) - partition_energy(s, out.n0);
  return out;
}

}  // namespace heisenclone
