#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heisenclone/filters.hpp"
#include "heisenclone/spectra.hpp"

namespace heisenclone {

// f_value / xi of zero mean "use the defaults": f(N) = ln(N+1) and xi = window_xi(s, 2).
struct FilterPolicy {
  FilterKind kind = FilterKind::super;
  double f_value = 0.0;
  double xi = 0.0;
};

struct SweepSpec {
  explicit SweepSpec(Spectrum s) : spectrum(std::move(s)) {}

  Spectrum spectrum;
  double alpha = 1.0;
  double c = 1.0;
  std::vector<int> n_values;
  FilterPolicy policy;
  // Fixed-N mode: a single N and an explicit M list; alpha and c are then ignored.
  std::vector<int> m_values;
  Limits limits;
  Exec exec = Exec::parallel;
};

struct SweepRow {
  int n = 0;
  int m = 0;
  double f_super = 0.0;  // fidelity of the policy filter
  double f_det = 0.0;
  double f_lower = 0.0;
  double f_upper = 1.0;
  double p_yes = 1.0;
};

inline constexpr double kMaxAlpha = 3.0;

// ceil(c * N^alpha), guarded against floating noise just above an integer.
int output_copies(int n, double alpha, double c);

// N = 20, M = 20, 40, ..., 400, super filter.
SweepSpec fig2_spec(Spectrum s);

void validate(const SweepSpec& spec);

SweepRow compute_row(const Spectrum& s, int n, int m, const FilterPolicy& policy, const Limits& limits,
                     Exec exec = Exec::parallel);

std::vector<SweepRow> run_sweep(const SweepSpec& spec);

enum class FitColumn { neg_log_infidelity, neg_log_pyes };
enum class FitTransform { vs_log_n, vs_n };

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// OLS of y on x with y = ln(-ln(1 - F)) or ln(p_yes) and x = ln N or N.
FitResult fit_exponent(std::span<const SweepRow> rows, FitColumn column, FitTransform transform);

FitColumn fit_column_from_string(const std::string& text);
FitTransform fit_transform_from_string(const std::string& text);
const char* to_string(FitColumn c);
const char* to_string(FitTransform t);

}  // namespace heisenclone
