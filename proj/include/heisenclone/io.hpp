#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "heisenclone/error.hpp"
#include "heisenclone/filters.hpp"
#include "heisenclone/qcore.hpp"
#include "heisenclone/replication.hpp"
#include "heisenclone/scaling.hpp"
#include "heisenclone/spectra.hpp"

namespace heisenclone::io {

using nlohmann::json;

inline constexpr int kSignificantDigits = 12;

// x rounded to 12 significant digits; non-finite values become the strings "inf", "-inf", "nan".
json number(double x);
std::string format_number(double x);

Spectrum spectrum_from_json(const json& j);
Spectrum read_spectrum(const std::string& path);
json to_json(const Spectrum& s);

json to_json(const Filter& flt, const Spectrum& s);
json to_json(const ReplicationResult& r);
json to_json(const BoundReport& b);

qcore::QuantumSystem system_from_json(const json& j);
qcore::QuantumSystem read_system(const std::string& path);
json to_json(const qcore::QuantumSystem& sys);

json to_json(const FilterPolicy& p);
json to_json(const SweepSpec& spec);
json sweep_dataset(const SweepSpec& spec, std::span<const SweepRow> rows);
json to_json(const FitResult& fit);

inline constexpr const char* kSweepCsvHeader = "N,M,F_super,F_det,F_lower,F_upper,p_yes";
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

// {"error": {"kind": ..., "message": ...}}
json error_json(const std::string& kind, const std::string& message);

// Energy on the grid of s, as an exact rational string.
std::string energy_string(const Spectrum& s, std::int64_t grid_energy);

}  // namespace heisenclone::io
