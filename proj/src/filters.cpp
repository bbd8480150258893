#include "heisenclone/filters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "heisenclone/error.hpp"
#include "heisenclone/logspace.hpp"

namespace heisenclone {

const char* to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::super: return "super";
    case FilterKind::windowed: return "windowed";
    case FilterKind::identity: return "identity";
  }
  return "?";
}

FilterKind filter_kind_from_string(const std::string& text) {
  if (text == "super") return FilterKind::super;
  if (text == "windowed") return FilterKind::windowed;
  if (text == "identity") return FilterKind::identity;
  throw ValidationError("unknown filter kind '" + text + "'");
}

double Filter::log_coeff(std::int64_t energy) const {
  std::int64_t idx = energy - offset;
  if (idx < 0 || idx >= static_cast<std::int64_t>(log_pi.size())) return logspace::neg_inf;
  return log_pi[static_cast<std::size_t>(idx)];
}

double Filter::coeff(std::int64_t energy) const { return std::exp(log_coeff(energy)); }

double Filter::gamma() const { return std::exp(log_gamma); }

double default_window_function(int n) { return std::log(static_cast<double>(n) + 1.0); }

double window_xi(const Spectrum& s, double c2) {
  if (!(c2 > 1.0)) throw DomainError("window constant needs c2 > 1");
  return 2.0 * s.p_min() / (static_cast<double>(s.size()) * (c2 - 1.0));
}

namespace detail {

Filter identity_filter(const EnergyDistribution& pn) {
  Filter f;
  f.kind = FilterKind::identity;
  f.n_copies = pn.n_copies();
  f.offset = pn.offset();
  f.log_pi.assign(pn.grid_size(), logspace::neg_inf);
  for (std::size_t i = 0; i < pn.grid_size(); ++i)
    if (pn.log_weights()[i] != logspace::neg_inf) f.log_pi[i] = 0.0;
  return f;
}

Filter build_super_filter(const EnergyDistribution& pn, const EnergyDistribution& pm, const AnchorPair& anchor) {
  Filter f;
  f.kind = FilterKind::super;
  f.n_copies = pn.n_copies();
  f.m_copies = pm.n_copies();
  f.offset = pn.offset();
  f.delta_e0 = anchor.delta_e0;
  f.log_pi.assign(pn.grid_size(), logspace::neg_inf);

  // gamma^2 = min_E p_{N,E} / p_{M,E+dE0}: the largest value keeping every pi_E <= 1.
  double log_gamma2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pn.grid_size(); ++i) {
    double lpn = pn.log_weights()[i];
    if (lpn == logspace::neg_inf) continue;
    std::int64_t energy = pn.offset() + static_cast<std::int64_t>(i);
    double lpm = pm.log_prob(energy + anchor.delta_e0);
    if (lpm == logspace::neg_inf)
      throw ConstructionError("shift misalignment: N-copy energy " + std::to_string(energy) + " + " +
                              std::to_string(anchor.delta_e0) + " is outside the M-copy support");
    log_gamma2 = std::min(log_gamma2, lpn - lpm);
  }
  f.log_gamma = 0.5 * log_gamma2;
  for (std::size_t i = 0; i < pn.grid_size(); ++i) {
    double lpn = pn.log_weights()[i];
    if (lpn == logspace::neg_inf) continue;
    double lpm = pm.log_prob(pn.offset() + static_cast<std::int64_t>(i) + anchor.delta_e0);
    f.log_pi[i] = std::min(0.0, 0.5 * (log_gamma2 + lpm - lpn));
  }
  return f;
}

Filter build_windowed_filter(const Spectrum& s, const EnergyDistribution& pn, const AnchorPair& anchor, int m,
                             Window window, const Limits& limits) {
  if (!(window.radius >= 0.0)) throw DomainError("window radius must be non-negative");
  const int n = pn.n_copies();
  const auto parts = enumerate_partitions(n, static_cast<int>(s.size()), limits);

  std::vector<logspace::LogAccumulator> in_window(pn.grid_size());
  double log_gamma2 = std::numeric_limits<double>::infinity();
  bool any = false;
  Partition shifted{std::vector<int>(s.size())};
  for (const auto& part : parts) {
    bool inside = true;
    for (std::size_t k = 0; k < s.size() && inside; ++k)
      inside = std::abs(part.counts[k] - anchor.n0.counts[k]) <= window.radius + 1e-12;
    if (!inside) continue;
    bool valid = true;
    for (std::size_t k = 0; k < s.size(); ++k) {
      shifted.counts[k] = part.counts[k] - anchor.n0.counts[k] + anchor.m0.counts[k];
      valid &= shifted.counts[k] >= 0;
    }
    if (!valid) continue;  // q_M vanishes there
    const double lqn = multinomial_weight(s, part);
    const double lqm = multinomial_weight(s, shifted);
    log_gamma2 = std::min(log_gamma2, lqn - lqm);
    in_window[static_cast<std::size_t>(partition_energy(s, part) - pn.offset())].add(lqm);
    any = true;
  }
  if (!any) throw ConstructionError("empty window: no partition of N lies within the window radius");

  Filter f;
  f.kind = FilterKind::windowed;
  f.n_copies = n;
  f.m_copies = m;
  f.offset = pn.offset();
  f.delta_e0 = anchor.delta_e0;
  f.window = window;
  f.log_gamma = 0.5 * log_gamma2;
  f.log_pi.assign(pn.grid_size(), logspace::neg_inf);
  // Energies shared by several partitions get the q-weighted aggregate of their in-window members.
  for (std::size_t i = 0; i < pn.grid_size(); ++i) {
    double la = in_window[i].value();
    if (la == logspace::neg_inf) continue;
    f.log_pi[i] = std::min(0.0, 0.5 * (log_gamma2 + la - pn.log_weights()[i]));
  }
  return f;
}

double log_success_probability(const Filter& flt, const EnergyDistribution& pn) {
  if (flt.n_copies != pn.n_copies() || flt.offset != pn.offset() || flt.log_pi.size() != pn.grid_size())
    throw DomainError("filter was built for N=" + std::to_string(flt.n_copies) + " on a different grid");
  logspace::LogAccumulator acc;
  for (std::size_t i = 0; i < pn.grid_size(); ++i) {
    if (flt.log_pi[i] == logspace::neg_inf) continue;
    if (pn.log_weights()[i] == logspace::neg_inf)
      throw DomainError("filter has weight on an energy outside the N-copy support");
    acc.add(2.0 * flt.log_pi[i] + pn.log_weights()[i]);
  }
  return acc.value();
}

}  // namespace detail

Filter build_super_filter(const Spectrum& s, int n, int m, const Limits& limits) {
  auto anchor = anchor_shift(s, n, m);
  return detail::build_super_filter(n_copy_distribution(s, n, limits), n_copy_distribution(s, m, limits), anchor);
}

Filter build_windowed_filter(const Spectrum& s, int n, int m, double f_value, double xi, const Limits& limits) {
  if (!(f_value > 0.0) || !(xi > 0.0)) throw DomainError("windowed filter needs f_value > 0 and xi > 0");
  Window w{std::sqrt(xi * static_cast<double>(m) * f_value), xi, f_value};
  return detail::build_windowed_filter(s, n_copy_distribution(s, n, limits), anchor_shift(s, n, m), m, w, limits);
}

Filter build_windowed_filter_radius(const Spectrum& s, int n, int m, double radius, const Limits& limits) {
  return detail::build_windowed_filter(s, n_copy_distribution(s, n, limits), anchor_shift(s, n, m), m,
                                       Window{radius, 0.0, 0.0}, limits);
}

Filter identity_filter(const Spectrum& s, int n, const Limits& limits) {
  return detail::identity_filter(n_copy_distribution(s, n, limits));
}

double success_probability(const Filter& flt, const Spectrum& s, int n, const Limits& limits) {
  return std::exp(detail::log_success_probability(flt, n_copy_distribution(s, n, limits)));
}

}  // namespace heisenclone
