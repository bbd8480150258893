#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "heisenclone/spectra.hpp"

namespace heisenclone {

enum class FilterKind { super, windowed, identity };

const char* to_string(FilterKind kind);
FilterKind filter_kind_from_string(const std::string& text);

// Truncation window on partition deviations |n_E - n0_E| <= radius = sqrt(xi * M * f(N)).
// xi and f_value are zero when the filter was built from a radius directly.
struct Window {
  double radius = 0.0;
  double xi = 0.0;
  double f_value = 0.0;
};

// Diagonal filter on the N-copy energy eigenspaces. Coefficients live on the grid of p_{N,.}
// starting at `offset`; log_pi is -inf where the coefficient is zero.
struct Filter {
  FilterKind kind = FilterKind::identity;
  int n_copies = 0;
  int m_copies = 0;  // 0 for the identity filter, which is not tied to an output size
  std::int64_t offset = 0;
  std::vector<double> log_pi;
  double log_gamma = 0.0;
  std::int64_t delta_e0 = 0;
  std::optional<Window> window;

  double log_coeff(std::int64_t energy) const;
  double coeff(std::int64_t energy) const;
  double gamma() const;
};

// f(N) = ln(N + 1): grows without bound and slower than any power of N.
double default_window_function(int n);

// xi = 2 p_min / (K (c2 - 1)), the window constant that makes p_yes decay like e^{-f(N)} for M <= c2 N.
double window_xi(const Spectrum& s, double c2);

Filter build_super_filter(const Spectrum& s, int n, int m, const Limits& limits = {});
Filter build_windowed_filter(const Spectrum& s, int n, int m, double f_value, double xi, const Limits& limits = {});
Filter build_windowed_filter_radius(const Spectrum& s, int n, int m, double radius, const Limits& limits = {});
Filter identity_filter(const Spectrum& s, int n, const Limits& limits = {});

// p_yes = sum_E pi_E^2 p_{N,E}.
double success_probability(const Filter& flt, const Spectrum& s, int n, const Limits& limits = {});

namespace detail {

Filter build_super_filter(const EnergyDistribution& pn, const EnergyDistribution& pm, const AnchorPair& anchor);
Filter build_windowed_filter(const Spectrum& s, const EnergyDistribution& pn, const AnchorPair& anchor, int m,
                             Window window, const Limits& limits);
Filter identity_filter(const EnergyDistribution& pn);
// log p_yes; throws DomainError when the filter was not built on pn's grid.
double log_success_probability(const Filter& flt, const EnergyDistribution& pn);

}  // namespace detail

}  // namespace heisenclone
