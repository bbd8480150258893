#include "heisenclone/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace heisenclone::io {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", kSignificantDigits, x);
  return buf;
}

json number(double x) {
  if (!std::isfinite(x)) return format_number(x);
  // round-trip through the 12-digit text so the JSON writer prints at most 12 digits
  return std::stod(format_number(x));
}

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::complex<double> complex_entry(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ValidationError(std::string(what) + " entries must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

json complex_json(std::complex<double> z) { return json::array({number(z.real()), number(z.imag())}); }

}  // namespace

std::string energy_string(const Spectrum& s, std::int64_t grid_energy) {
  const Rational& u = s.grid_unit();
  return Rational(grid_energy * u.num(), u.den()).str();
}

Spectrum spectrum_from_json(const json& j) {
  if (!j.is_object() || !j.contains("levels") || !j["levels"].is_array())
    throw ValidationError("spectrum must be an object with a 'levels' array");
  std::vector<RawLevel> raw;
  for (const auto& level : j["levels"]) {
    if (!level.is_object() || !level.contains("energy") || !level.contains("prob"))
      throw ValidationError("each level needs 'energy' and 'prob'");
    RawLevel r;
    const auto& e = level["energy"];
    if (e.is_string())
      r.energy = e.get<std::string>();
    else if (e.is_number_integer())
      r.energy = std::to_string(e.get<std::int64_t>());
    else
      throw ValidationError("level energy must be an exact rational string or an integer");
    if (!level["prob"].is_number()) throw ValidationError("level prob must be a number");
    r.prob = level["prob"].get<double>();
    raw.push_back(std::move(r));
  }
  return normalize_spectrum(raw);
}

Spectrum read_spectrum(const std::string& path) { return spectrum_from_json(read_json_file(path)); }

json to_json(const Spectrum& s) {
  json levels = json::array();
  for (std::size_t k = 0; k < s.size(); ++k)
    levels.push_back({{"energy", s.energies()[k].str()}, {"prob", number(s.probs()[k])}});
  return {{"levels", levels}, {"grid_unit", s.grid_unit().str()}};
}

json to_json(const Filter& flt, const Spectrum& s) {
  json coeffs = json::array();
  for (std::size_t i = 0; i < flt.log_pi.size(); ++i) {
    if (std::isinf(flt.log_pi[i])) continue;
    std::int64_t e = flt.offset + static_cast<std::int64_t>(i);
    coeffs.push_back({{"energy", energy_string(s, e)}, {"pi", number(std::exp(flt.log_pi[i]))}});
  }
  json j = {{"kind", to_string(flt.kind)}, {"gamma_log", number(flt.log_gamma)}, {"coeffs", coeffs}};
  return j;
}

json to_json(const ReplicationResult& r) {
  return {{"n", r.n},
          {"m", r.m},
          {"fidelity", number(r.fidelity)},
          {"p_yes", number(r.p_yes)},
          {"filter_kind", to_string(r.filter_kind)},
          {"delta_e0", r.delta_e0}};
}

json to_json(const BoundReport& b) {
  json j = {{"lower", number(b.lower)},
            {"upper", number(b.upper)},
            {"e_delta", number(b.e_delta)},
            {"p_yes_used", number(b.p_yes_used)}};
  j["exact"] = b.exact ? number(*b.exact) : json(nullptr);
  return j;
}

qcore::QuantumSystem system_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("hamiltonian") || !j.contains("psi"))
    throw ValidationError("system needs 'dim', 'hamiltonian' and 'psi'");
  if (!j["dim"].is_number_integer()) throw ValidationError("system 'dim' must be an integer");
  const auto d = j["dim"].get<std::int64_t>();
  if (d < 1 || d > qcore::kMaxDim) throw ValidationError("system 'dim' out of range");
  const auto& h = j["hamiltonian"];
  const auto& psi = j["psi"];
  if (!psi.is_array() || static_cast<std::int64_t>(psi.size()) != d)
    throw ValidationError("'psi' must hold dim entries");
  qcore::Matrix hm(d, d);
  // rows of [re, im] pairs, or a flat row-major list of d*d pairs
  if (h.is_array() && static_cast<std::int64_t>(h.size()) == d && d > 0 && h[0].is_array() && h[0].size() == static_cast<std::size_t>(d) &&
      h[0][0].is_array()) {
    for (std::int64_t r = 0; r < d; ++r)
      for (std::int64_t c = 0; c < d; ++c) {
        if (!h[r].is_array() || static_cast<std::int64_t>(h[r].size()) != d)
          throw ValidationError("'hamiltonian' rows must hold dim entries");
        hm(r, c) = complex_entry(h[r][c], "hamiltonian");
      }
  } else if (h.is_array() && static_cast<std::int64_t>(h.size()) == d * d) {
    for (std::int64_t i = 0; i < d * d; ++i) hm(i / d, i % d) = complex_entry(h[i], "hamiltonian");
  } else {
    throw ValidationError("'hamiltonian' must be dim x dim");
  }
  qcore::Vector v(d);
  for (std::int64_t i = 0; i < d; ++i) v(i) = complex_entry(psi[i], "psi");
  return qcore::QuantumSystem(std::move(hm), std::move(v));
}

qcore::QuantumSystem read_system(const std::string& path) { return system_from_json(read_json_file(path)); }

json to_json(const qcore::QuantumSystem& sys) {
  json h = json::array(), psi = json::array();
  for (int r = 0; r < sys.dim(); ++r) {
    json row = json::array();
    for (int c = 0; c < sys.dim(); ++c) row.push_back(complex_json(sys.hamiltonian()(r, c)));
    h.push_back(row);
    psi.push_back(complex_json(sys.psi()(r)));
  }
  return {{"dim", sys.dim()}, {"hamiltonian", h}, {"psi", psi}};
}

json to_json(const FilterPolicy& p) {
  json j = {{"kind", to_string(p.kind)}};
  if (p.kind == FilterKind::windowed) {
    j["f"] = p.f_value > 0.0 ? number(p.f_value) : json("ln(N+1)");
    j["xi"] = p.xi > 0.0 ? number(p.xi) : json("2 p_min / (K (c2 - 1)), c2 = 2");
  }
  return j;
}

json to_json(const SweepSpec& spec) {
  json j = {{"spectrum", to_json(spec.spectrum)},
            {"n_values", spec.n_values},
            {"filter_policy", to_json(spec.policy)},
            {"support_cap", spec.limits.support_cap}};
  if (spec.m_values.empty()) {
    j["alpha"] = number(spec.alpha);
    j["c"] = number(spec.c);
  } else {
    j["m_values"] = spec.m_values;
  }
  return j;
}

json sweep_dataset(const SweepSpec& spec, std::span<const SweepRow> rows) {
  json out = json::array();
  for (const auto& r : rows)
    out.push_back({{"N", r.n},
                   {"M", r.m},
                   {"F_super", number(r.f_super)},
                   {"F_det", number(r.f_det)},
                   {"F_lower", number(r.f_lower)},
                   {"F_upper", number(r.f_upper)},
                   {"p_yes", number(r.p_yes)}});
  return {{"spec", to_json(spec)}, {"rows", out}};
}

json to_json(const FitResult& fit) {
  return {{"slope", number(fit.slope)}, {"intercept", number(fit.intercept)}, {"r2", number(fit.r2)}};
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : rows)
    out << r.n << ',' << r.m << ',' << format_number(r.f_super) << ',' << format_number(r.f_det) << ','
        << format_number(r.f_lower) << ',' << format_number(r.f_upper) << ',' << format_number(r.p_yes) << '\n';
}

json error_json(const std::string& kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace heisenclone::io
