#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "heisenclone/qcore.hpp"
#include "heisenclone/spectra.hpp"

// Seeded generators for property checks. Everything draws from one mt19937_64 so a seed fixes
// the whole sequence.
namespace heisenclone::random {

using Rng = std::mt19937_64;

// K distinct energies j/den with |j| <= 4 den and probabilities bounded below by p_floor.
Spectrum spectrum(Rng& rng, int k, int den, double p_floor = 0.05);

qcore::Matrix unitary(Rng& rng, int d);
qcore::Matrix psd(Rng& rng, int d);
qcore::Vector unit_vector(Rng& rng, int d);

// H = U diag(integer energies in [lo, hi]) U^dagger with at least two distinct energies.
qcore::QuantumSystem system(Rng& rng, int d, int lo = -3, int hi = 3);

// Filter diagonal in H's eigenbasis, entries uniform in [0, 1].
qcore::FilterOperator diagonal_filter(Rng& rng, const qcore::QuantumSystem& sys);

// Kraus operators d_out x d_in with sum K^dag K <= I; the top eigenvalue is uniform in [0.5, 1].
std::vector<qcore::Matrix> instrument(Rng& rng, int d_in, int d_out, int count);

}  // namespace heisenclone::random
