#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "heisenclone/kernels.hpp"
#include "heisenclone/rational.hpp"

namespace heisenclone {

inline constexpr std::size_t kDefaultSupportCap = 100'000'000;
inline constexpr std::size_t kDefaultPartitionCap = 10'000'000;

// Resource caps shared by every operation that allocates grid- or partition-sized buffers.
struct Limits {
  std::size_t support_cap = kDefaultSupportCap;
  std::size_t partition_cap = kDefaultPartitionCap;
};

struct RawLevel {
  std::string energy;  // exact rational, e.g. "-1/2"
  double prob = 0.0;
};

// Energy levels of a single-system Hamiltonian restricted to the support of the input state,
// rescaled onto an integer grid: energy_k = int_energies[k] * grid_unit.
class Spectrum {
 public:
  std::size_t size() const { return probs_.size(); }
  const std::vector<Rational>& energies() const { return energies_; }
  const std::vector<double>& probs() const { return probs_; }
  const std::vector<double>& log_probs() const { return log_probs_; }
  const std::vector<std::int64_t>& int_energies() const { return int_energies_; }
  const Rational& grid_unit() const { return grid_unit_; }
  double unit() const { return grid_unit_.to_double(); }

  std::int64_t min_int_energy() const { return int_energies_.front(); }
  std::int64_t max_int_energy() const { return int_energies_.back(); }
  std::int64_t span() const { return max_int_energy() - min_int_energy(); }

  double p_min() const;
  // <H> in grid units and in physical units.
  double mean_grid() const;
  double mean_energy() const { return mean_grid() * unit(); }
  // max_E |E| of the uncentered Hamiltonian, physical units.
  double norm_inf() const;
  // max_E |E - <H>| in grid units.
  double centered_norm_inf_grid() const;
  // E_max - E_min, physical units.
  double energy_span() const { return static_cast<double>(span()) * unit(); }

  friend Spectrum normalize_spectrum(std::span<const RawLevel> raw);

 private:
  std::vector<Rational> energies_;
  std::vector<double> probs_;
  std::vector<double> log_probs_;
  std::vector<std::int64_t> int_energies_;
  Rational grid_unit_{1};
};

// Parses, validates, merges and renormalizes a list of levels.
Spectrum normalize_spectrum(std::span<const RawLevel> raw);

// Law of the total energy of N copies, stored in log-space over the integer grid
// [offset, offset + log_weights.size()).
class EnergyDistribution {
 public:
  EnergyDistribution(int n_copies, std::int64_t offset, std::vector<double> log_weights);

  int n_copies() const { return n_copies_; }
  std::int64_t offset() const { return offset_; }
  std::int64_t min_energy() const { return offset_; }
  std::int64_t max_energy() const { return offset_ + static_cast<std::int64_t>(log_weights_.size()) - 1; }
  const std::vector<double>& log_weights() const { return log_weights_; }
  std::size_t grid_size() const { return log_weights_.size(); }
  std::size_t support_size() const { return support_size_; }

  double log_prob(std::int64_t energy) const;
  double prob(std::int64_t energy) const;
  bool in_support(std::int64_t energy) const;

 private:
  int n_copies_;
  std::int64_t offset_;
  std::vector<double> log_weights_;
  std::size_t support_size_ = 0;
};

// p_{N,E}. Two-level spectra use the closed-form binomial; otherwise iterated convolution.
EnergyDistribution n_copy_distribution(const Spectrum& s, int n, const Limits& limits = {});
// Always the iterated log-space convolution, with the requested kernel.
EnergyDistribution n_copy_distribution_convolution(const Spectrum& s, int n, const Limits& limits = {},
                                                   Exec exec = Exec::parallel);

struct Partition {
  std::vector<int> counts;
  int total() const;
  friend bool operator==(const Partition&, const Partition&) = default;
};

// Number of partitions of n into k non-negative parts, C(n+k-1, k-1), saturating at 2^64-1.
std::uint64_t partition_count(int n, int k);

// All partitions of n into k parts in lexicographic order.
std::vector<Partition> enumerate_partitions(int n, int k, const Limits& limits = {});

// log q_N(n) = log(N! prod_E p_E^{n_E} / n_E!).
double multinomial_weight(const Spectrum& s, const Partition& n);

// Grid energy sum_E n_E * e_E.
std::int64_t partition_energy(const Spectrum& s, const Partition& n);

struct AnchorPair {
  Partition n0;
  Partition m0;
  std::int64_t delta_e0 = 0;
};

// Largest-remainder rounding of total * p (ties toward lower energy).
Partition largest_remainder(const Spectrum& s, int total);

AnchorPair anchor_shift(const Spectrum& s, int n, int m);

}  // namespace heisenclone
