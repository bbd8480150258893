#include "heisenclone/replication.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "heisenclone/error.hpp"
#include "heisenclone/kernels.hpp"
#include "heisenclone/logspace.hpp"

namespace heisenclone {

namespace {

void check_sizes(int n, int m) {
  if (n < 1 || m < n)
    throw DomainError("replication needs 1 <= N <= M, got N=" + std::to_string(n) + ", M=" + std::to_string(m));
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

namespace detail {

double log_fidelity(const Filter& flt, const EnergyDistribution& pn, const EnergyDistribution& pm,
                    std::int64_t shift) {
  const double log_pyes = log_success_probability(flt, pn);
  if (log_pyes == logspace::neg_inf) throw NumericError("filter annihilates every input state");
  logspace::LogAccumulator amp;
  for (std::size_t i = 0; i < pn.grid_size(); ++i) {
    double lpi = flt.log_pi[i];
    double lpn = pn.log_weights()[i];
    if (lpi == logspace::neg_inf || lpn == logspace::neg_inf) continue;
    double lpm = pm.log_prob(pn.offset() + static_cast<std::int64_t>(i) + shift);
    amp.add(lpi + 0.5 * (lpn + lpm));
  }
  return std::min(0.0, 2.0 * amp.value() - log_pyes);
}

ReplicationResult deterministic_fidelity(const EnergyDistribution& pn, const EnergyDistribution& pm,
                                         std::int64_t delta_e0, Exec exec) {
  const auto width = static_cast<std::int64_t>(pn.grid_size()) - 1;
  std::vector<double> a(pn.log_weights()), b(pm.log_weights());
  for (double& x : a) x *= 0.5;
  for (double& x : b) x *= 0.5;
  std::vector<double> overlap(static_cast<std::size_t>(2 * width + 1));
  const std::int64_t first = pn.offset() + (delta_e0 - width) - pm.offset();
  kernels::shifted_overlap(a, b, first, overlap, exec);

  // best overlap; ties go to the shift closest to dE0, then the lower shift
  std::int64_t best = width;
  for (std::int64_t s = 0; s < static_cast<std::int64_t>(overlap.size()); ++s) {
    if (overlap[s] > overlap[best] ||
        (overlap[s] == overlap[best] && std::abs(s - width) < std::abs(best - width)))
      best = s;
  }
  ReplicationResult r;
  r.n = pn.n_copies();
  r.m = pm.n_copies();
  r.fidelity = clamp01(overlap[best] * overlap[best]);
  r.p_yes = 1.0;
  r.filter_kind = FilterKind::identity;
  r.delta_e0 = delta_e0 - width + best;
  return r;
}

double lemma1_bound(const Spectrum& s, const EnergyDistribution& pn, const EnergyDistribution& pm, double p_yes,
                    double e_delta, Exec exec) {
  const double center = static_cast<double>(pn.n_copies()) * s.mean_grid();
  std::vector<std::int64_t> inner;
  double log_outer_max = logspace::neg_inf;
  for (std::size_t i = 0; i < pn.grid_size(); ++i) {
    if (pn.log_weights()[i] == logspace::neg_inf) continue;
    std::int64_t energy = pn.offset() + static_cast<std::int64_t>(i);
    if (std::abs(static_cast<double>(energy) - center) <= e_delta + 1e-9)
      inner.push_back(energy);
    else
      log_outer_max = std::max(log_outer_max, pn.log_weights()[i]);
  }

  // first term: max over every shift mu whose window meets the M-copy grid
  double first = 0.0;
  if (!inner.empty()) {
    std::vector<std::int64_t> offsets;
    offsets.reserve(inner.size());
    for (auto e : inner) offsets.push_back(e - pm.offset());
    std::vector<double> linear(pm.grid_size());
    for (std::size_t j = 0; j < linear.size(); ++j) linear[j] = std::exp(pm.log_weights()[j]);
    const std::int64_t mu_lo = pm.min_energy() - inner.back();
    const std::int64_t mu_hi = pm.max_energy() - inner.front();
    std::vector<double> sums(static_cast<std::size_t>(mu_hi - mu_lo + 1));
    kernels::window_sums(offsets, linear, mu_lo, sums, exec);
    first = std::min(1.0, *std::max_element(sums.begin(), sums.end()));
  }

  double log_second = logspace::neg_inf;
  if (log_outer_max != logspace::neg_inf)
    log_second = log_outer_max - std::log(p_yes) +
                 static_cast<double>(s.size()) * std::log(static_cast<double>(pn.n_copies()) + 1.0);
  if (log_second >= 0.0) return 1.0;
  const double root = std::sqrt(first) + std::exp(0.5 * log_second);
  return clamp01(root * root);
}

}  // namespace detail

ReplicationResult exact_fidelity(const Spectrum& s, int n, int m, const Filter& flt, const Limits& limits) {
  check_sizes(n, m);
  if (flt.n_copies != n)
    throw DomainError("filter built for N=" + std::to_string(flt.n_copies) + ", asked for N=" + std::to_string(n));
  if (flt.kind != FilterKind::identity && flt.m_copies != m)
    throw DomainError("filter built for M=" + std::to_string(flt.m_copies) + ", asked for M=" + std::to_string(m));
  const auto pn = n_copy_distribution(s, n, limits);
  const auto pm = n_copy_distribution(s, m, limits);
  const std::int64_t shift = flt.kind == FilterKind::identity ? anchor_shift(s, n, m).delta_e0 : flt.delta_e0;

  ReplicationResult r;
  r.n = n;
  r.m = m;
  r.filter_kind = flt.kind;
  r.delta_e0 = shift;
  r.p_yes = clamp01(std::exp(detail::log_success_probability(flt, pn)));
  r.fidelity = clamp01(std::exp(detail::log_fidelity(flt, pn, pm, shift)));
  return r;
}

ReplicationResult deterministic_fidelity(const Spectrum& s, int n, int m, const Limits& limits) {
  check_sizes(n, m);
  return detail::deterministic_fidelity(n_copy_distribution(s, n, limits), n_copy_distribution(s, m, limits),
                                        anchor_shift(s, n, m).delta_e0);
}

double asymptotic_deterministic_fidelity(int n, int m) {
  return 2.0 * std::sqrt(static_cast<double>(m) * n) / (static_cast<double>(m) + n);
}

double fidelity_lower_bound(const Spectrum& s, int n, int m) {
  check_sizes(n, m);
  const double p_min = s.p_min();
  if (static_cast<double>(n) * p_min < 1.0 - 1e-12)
    throw DomainError("fidelity lower bound needs N >= 1/p_min = " + std::to_string(1.0 / p_min) +
                      ", got N=" + std::to_string(n));
  const double k = static_cast<double>(s.size());
  const double nn = n, mm = m;
  const double exponent = -2.0 * nn * nn * p_min * p_min / mm + 4.0 * nn / (k * mm);
  return clamp01(1.0 - 2.0 * k * std::exp(exponent));
}

double max_e_delta(const Spectrum& s, int n) { return static_cast<double>(n) * s.centered_norm_inf_grid(); }

BoundReport lemma1_upper_bound(const Spectrum& s, int n, int m, double p_yes, double e_delta, const Limits& limits) {
  check_sizes(n, m);
  if (!(p_yes > 0.0) || p_yes > 1.0) throw DomainError("p_yes must lie in (0, 1]");
  const double hi = max_e_delta(s, n);
  if (!(e_delta >= 0.0) || e_delta > hi * (1.0 + 1e-12) + 1e-9)
    throw DomainError("e_delta=" + std::to_string(e_delta) + " outside [0, " + std::to_string(hi) + "]");
  BoundReport report;
  report.e_delta = e_delta;
  report.p_yes_used = p_yes;
  report.upper = detail::lemma1_bound(s, n_copy_distribution(s, n, limits), n_copy_distribution(s, m, limits), p_yes,
                                      e_delta);
  report.lower = static_cast<double>(n) * s.p_min() >= 1.0 - 1e-12 ? fidelity_lower_bound(s, n, m) : 0.0;
  return report;
}

double windowed_fidelity_bound(const Spectrum& s, int m, double f_value, double xi) {
  if (!(f_value > 0.0) || !(xi > 0.0)) throw DomainError("windowed bound needs f_value > 0 and xi > 0");
  if (m < 1) throw DomainError("windowed bound needs M >= 1");
  const double k = static_cast<double>(s.size());
  const double xf = xi * f_value;
  return clamp01(1.0 - 2.0 * k * std::exp(-2.0 * xf + 4.0 * std::sqrt(xf / m)));
}

double pyes_decay_rate(const Spectrum& s) {
  const double mean = s.mean_grid();
  std::size_t star = 0;
  double best = -1.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    double dist = std::abs(static_cast<double>(s.int_energies()[k]) - mean);
    // levels are ascending, so >= hands ties to the higher energy
    if (dist >= best - 1e-12 * std::max(1.0, best)) {
      star = k;
      best = std::max(best, dist);
    }
  }
  return -s.log_probs()[star];
}

}  // namespace heisenclone
