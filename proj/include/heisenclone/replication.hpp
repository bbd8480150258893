#pragma once

#include <cstdint>
#include <optional>

#include "heisenclone/filters.hpp"
#include "heisenclone/spectra.hpp"

namespace heisenclone {

struct ReplicationResult {
  int n = 0;
  int m = 0;
  double fidelity = 0.0;
  double p_yes = 1.0;
  FilterKind filter_kind = FilterKind::identity;
  std::int64_t delta_e0 = 0;
};

struct BoundReport {
  double lower = 0.0;
  std::optional<double> exact;
  double upper = 1.0;
  double e_delta = 0.0;  // grid units, measured from the centered energy N<H>
  double p_yes_used = 1.0;
};

// Worst-case fidelity of filter + shift isometry |N,E> -> |M,E+dE0>:
//   F = (sum_E pi_E sqrt(p_{N,E} p_{M,E+dE0}))^2 / sum_E pi_E^2 p_{N,E}.
// The identity filter uses the anchor shift of (N, M).
ReplicationResult exact_fidelity(const Spectrum& s, int n, int m, const Filter& flt, const Limits& limits = {});

// Best shift channel without a filter: max over shifts within one N-copy span of dE0.
ReplicationResult deterministic_fidelity(const Spectrum& s, int n, int m, const Limits& limits = {});

// 2 sqrt(MN) / (M + N).
double asymptotic_deterministic_fidelity(int n, int m);

// max(0, 1 - 2K exp(-2 N^2 p_min^2 / M + 4N / (K M))), valid for N >= 1/p_min.
double fidelity_lower_bound(const Spectrum& s, int n, int m);

// N * max_E |E - <H>| in grid units: the largest admissible e_delta.
double max_e_delta(const Spectrum& s, int n);

// Upper bound on the fidelity of any covariant filter+channel with success probability p_yes.
// e_delta is in grid units on the centered grid, 0 <= e_delta <= max_e_delta(s, n).
BoundReport lemma1_upper_bound(const Spectrum& s, int n, int m, double p_yes, double e_delta,
                               const Limits& limits = {});

// max(0, 1 - 2K exp(-2 xi f + 4 sqrt(xi f / M))).
double windowed_fidelity_bound(const Spectrum& s, int m, double f_value, double xi);

// ln(1/p_{E*}) with E* the level of largest |E - <H>| (ties toward higher energy).
double pyes_decay_rate(const Spectrum& s);

namespace detail {

double log_fidelity(const Filter& flt, const EnergyDistribution& pn, const EnergyDistribution& pm,
                    std::int64_t shift);
ReplicationResult deterministic_fidelity(const EnergyDistribution& pn, const EnergyDistribution& pm,
                                         std::int64_t delta_e0, Exec exec = Exec::parallel);
double lemma1_bound(const Spectrum& s, const EnergyDistribution& pn, const EnergyDistribution& pm, double p_yes,
                    double e_delta, Exec exec = Exec::parallel);

}  // namespace detail

}  // namespace heisenclone
