#pragma once

#include <iosfwd>

namespace heisenclone::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitResource = 3;
inline constexpr int kExitNumeric = 4;

// Full command-line entry point. Records go to out; errors go to err as one JSON object.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace heisenclone::cli
