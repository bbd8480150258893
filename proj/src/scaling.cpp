#include "heisenclone/scaling.hpp"

#include <cmath>
#include <exception>
#include <limits>

#include "heisenclone/error.hpp"
#include "heisenclone/kernels.hpp"
#include "heisenclone/replication.hpp"

namespace heisenclone {

namespace {

std::string at(int n, int m) { return " (N=" + std::to_string(n) + ", M=" + std::to_string(m) + ")"; }

}  // namespace

int output_copies(int n, double alpha, double c) {
  const double raw = c * std::pow(static_cast<double>(n), alpha);
  const double nearest = std::round(raw);
  const double value = std::abs(raw - nearest) <= 1e-9 * std::max(1.0, raw) ? nearest : std::ceil(raw);
  if (!(value < static_cast<double>(std::numeric_limits<int>::max())))
    throw ResourceError("M = c N^alpha does not fit in an int" + at(n, 0), raw);
  return static_cast<int>(value);
}

SweepSpec fig2_spec(Spectrum s) {
  SweepSpec spec(std::move(s));
  spec.n_values = {20};
  for (int m = 20; m <= 400; m += 20) spec.m_values.push_back(m);
  spec.policy.kind = FilterKind::super;
  return spec;
}

void validate(const SweepSpec& spec) {
  if (spec.n_values.empty()) throw ValidationError("sweep needs at least one N");
  for (std::size_t i = 0; i < spec.n_values.size(); ++i) {
    if (spec.n_values[i] < 1) throw ValidationError("sweep N values must be positive");
    if (i > 0 && spec.n_values[i] <= spec.n_values[i - 1]) throw ValidationError("sweep N values must be strictly ascending");
  }
  if (!spec.m_values.empty()) {
    if (spec.n_values.size() != 1) throw ValidationError("fixed-N mode needs exactly one N");
    for (int m : spec.m_values)
      if (m < spec.n_values[0]) throw ValidationError("fixed-N mode needs every M >= N");
    return;
  }
  if (!(spec.alpha >= 1.0) || spec.alpha > kMaxAlpha) throw ValidationError("alpha must lie in [1, 3]");
  if (!(spec.c > 0.0)) throw ValidationError("c must be positive");
}

SweepRow compute_row(const Spectrum& s, int n, int m, const FilterPolicy& policy, const Limits& limits, Exec exec) {
  if (n < 1 || m < n) throw DomainError("sweep rows need 1 <= N <= M" + at(n, m));
  const auto pn = n_copy_distribution(s, n, limits);
  const auto pm = n_copy_distribution(s, m, limits);
  const auto anchor = anchor_shift(s, n, m);

  Filter flt;
  double f_value = 0.0, xi = 0.0;
  switch (policy.kind) {
    case FilterKind::super:
      flt = detail::build_super_filter(pn, pm, anchor);
      break;
    case FilterKind::windowed: {
      f_value = policy.f_value > 0.0 ? policy.f_value : default_window_function(n);
      xi = policy.xi > 0.0 ? policy.xi : window_xi(s, 2.0);
      Window w{std::sqrt(xi * static_cast<double>(m) * f_value), xi, f_value};
      flt = detail::build_windowed_filter(s, pn, anchor, m, w, limits);
      break;
    }
    case FilterKind::identity:
      flt = detail::identity_filter(pn);
      flt.delta_e0 = anchor.delta_e0;
      break;
  }

  SweepRow row;
  row.n = n;
  row.m = m;
  row.p_yes = std::clamp(std::exp(detail::log_success_probability(flt, pn)), 0.0, 1.0);
  row.f_super = std::clamp(std::exp(detail::log_fidelity(flt, pn, pm, anchor.delta_e0)), 0.0, 1.0);
  row.f_det = detail::deterministic_fidelity(pn, pm, anchor.delta_e0, exec).fidelity;
  switch (policy.kind) {
    case FilterKind::super:
      row.f_lower = static_cast<double>(n) * s.p_min() >= 1.0 - 1e-12 ? fidelity_lower_bound(s, n, m) : 0.0;
      break;
    case FilterKind::windowed:
      row.f_lower = windowed_fidelity_bound(s, m, f_value, xi);
      break;
    case FilterKind::identity:
      row.f_lower = 0.0;
      break;
  }
  row.f_upper = row.p_yes > 0.0 ? detail::lemma1_bound(s, pn, pm, row.p_yes, max_e_delta(s, n), exec) : 1.0;
  return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  validate(spec);
  std::vector<std::pair<int, int>> sizes;
  if (!spec.m_values.empty()) {
    for (int m : spec.m_values) sizes.emplace_back(spec.n_values[0], m);
  } else {
    for (int n : spec.n_values) sizes.emplace_back(n, std::max(n, output_copies(n, spec.alpha, spec.c)));
  }

  std::vector<SweepRow> rows(sizes.size());
  std::vector<std::exception_ptr> errors(sizes.size());
  // rows run concurrently; each row's kernels stay serial so the thread pool is not nested
  const Exec inner = spec.exec == Exec::parallel && sizes.size() > 1 ? Exec::serial : spec.exec;
  kernels::for_each_index(static_cast<std::int64_t>(sizes.size()), spec.exec, [&](std::int64_t i) {
    try {
      auto [n, m] = sizes[static_cast<std::size_t>(i)];
      rows[static_cast<std::size_t>(i)] = compute_row(spec.spectrum, n, m, spec.policy, spec.limits, inner);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  });
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const ResourceError& e) {
      throw ResourceError(std::string(e.what()) + at(sizes[i].first, sizes[i].second), e.requested());
    }
  }
  return rows;
}

FitResult fit_exponent(std::span<const SweepRow> rows, FitColumn column, FitTransform transform) {
  if (rows.size() < 4) throw DomainError("fit needs at least 4 rows, got " + std::to_string(rows.size()));
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    double y = 0.0;
    if (column == FitColumn::neg_log_infidelity) {
      const double infidelity = 1.0 - r.f_super;
      if (!(infidelity > 0.0) || !(infidelity < 1.0))
        throw DomainError("row " + std::to_string(i) + at(r.n, r.m) + ": -ln(1-F) is not positive");
      y = std::log(-std::log(infidelity));
    } else {
      if (!(r.p_yes > 0.0)) throw DomainError("row " + std::to_string(i) + at(r.n, r.m) + ": p_yes is not positive");
      y = std::log(r.p_yes);
    }
    xs.push_back(transform == FitTransform::vs_log_n ? std::log(static_cast<double>(r.n)) : static_cast<double>(r.n));
    ys.push_back(y);
  }

  const double count = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("fit needs at least two distinct N");
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return fit;
}

FitColumn fit_column_from_string(const std::string& text) {
  if (text == "neg_log_infidelity" || text == "fidelity") return FitColumn::neg_log_infidelity;
  if (text == "neg_log_pyes" || text == "pyes") return FitColumn::neg_log_pyes;
  throw ValidationError("unknown fit column '" + text + "'");
}

FitTransform fit_transform_from_string(const std::string& text) {
  if (text == "vs_log_n") return FitTransform::vs_log_n;
  if (text == "vs_n") return FitTransform::vs_n;
  throw ValidationError("unknown fit transform '" + text + "'");
}

const char* to_string(FitColumn c) { return c == FitColumn::neg_log_infidelity ? "neg_log_infidelity" : "neg_log_pyes"; }
const char* to_string(FitTransform t) { return t == FitTransform::vs_log_n ? "vs_log_n" : "vs_n"; }

}  // namespace heisenclone
