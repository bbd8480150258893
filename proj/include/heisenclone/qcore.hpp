#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "heisenclone/spectra.hpp"

namespace heisenclone::qcore {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kMaxDim = 64;
inline constexpr double kSupportCutoff = 1e-12;

// Hamiltonian and probe state of a clock. The spectral decomposition of H is computed once at
// construction; every time evolution goes through it.
class QuantumSystem {
 public:
  // Throws ValidationError unless H is Hermitian within 1e-12 and psi is a unit vector within 1e-12.
  QuantumSystem(Matrix hamiltonian, Vector psi);

  int dim() const { return static_cast<int>(psi_.size()); }
  const Matrix& hamiltonian() const { return hamiltonian_; }
  const Vector& psi() const { return psi_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenvectors() const { return eigenvectors_; }
  double e_min() const { return eigenvalues_(0); }
  double e_max() const { return eigenvalues_(eigenvalues_.size() - 1); }

 private:
  Matrix hamiltonian_;
  Vector psi_;
  Eigen::VectorXd eigenvalues_;
  Matrix eigenvectors_;
};

// Diagonal H with the physical energies of s and psi = (sqrt p_E).
QuantumSystem system_from_spectrum(const Spectrum& s);

// A yes-branch filter operator, validated so that M^dagger M <= I within 1e-10.
class FilterOperator {
 public:
  explicit FilterOperator(Matrix matrix);
  const Matrix& matrix() const { return matrix_; }

 private:
  Matrix matrix_;
};

// M = eps |psi_t0><psi_t0| + |psi_perp><psi_perp| with psi_perp along (H - <H>)|psi_t0>.
FilterOperator epsilon_filter(const QuantumSystem& sys, double t0, double eps);
// Energy-diagonal filter mapping psi onto (|E_max> + |E_min>)/sqrt 2 (up to normalization).
FilterOperator noon_filter(const QuantumSystem& sys);

Matrix pseudo_inverse(const Matrix& m, double cutoff = kSupportCutoff);

Vector clock_state(const QuantumSystem& sys, double t);

// 4 Var_{psi_t}(H).
double qfi(const QuantumSystem& sys, double t);

// K_t = M H M^+ + <psi_t|[H, M^dag M]|psi_t> / (2 ||M psi_t||^2).
Matrix prob_generator(const QuantumSystem& sys, const FilterOperator& flt, double t);

// 4 (<phi_t|K^dag K|phi_t> - |<phi_t|K|phi_t>|^2); values below 1e-15 are reported as 0.
double prob_qfi(const QuantumSystem& sys, const FilterOperator& flt, double t);

// 1/Q, or +infinity for Q == 0 (unbounded variance).
double prob_crb(double q);

// Average of prob_qfi against p(t|yes) over one period, trapezoid rule with doubling.
double avg_qfi_uniform(const QuantumSystem& sys, const FilterOperator& flt, double period, int quadrature_points);

// 1 / (N^2 (E_max - E_min)^2) in the spectrum's physical units.
double hl_variance_bound(const Spectrum& s, int n);

struct CrbSample {
  double weight = 0.0;
  double variance = 0.0;
  double qfi = 0.0;
};

struct AvgCrbResult {
  double lower_bound = 0.0;
  bool holds = false;
  double mean_variance = 0.0;
};

AvgCrbResult avg_crb(std::span<const CrbSample> samples);

// Off-diagonals between energies E, E' scaled by exp(-sigma^2 (E - E')^2 / 2) in H's eigenbasis.
Matrix gaussian_twirl(const Matrix& p, const QuantumSystem& sys, double sigma);
// The sigma -> infinity limit: P restricted to H's (grouped) eigenspaces.
Matrix energy_diagonal(const Matrix& p, const QuantumSystem& sys);

struct InstrumentDecomposition {
  Matrix m_op;
  std::vector<Matrix> channel_kraus;
};

// P(rho) = C(M rho M^dag) with M = sqrt(sum K^dag K) and C trace preserving.
InstrumentDecomposition decompose_instrument(std::span<const Matrix> kraus);

// Kraus set {C_k M} of the recomposed map.
std::vector<Matrix> recompose(const InstrumentDecomposition& dec);

// sum_ij |i><j| (x) P(|i><j|).
Matrix choi_matrix(std::span<const Matrix> kraus);

// max-entry distance of sum K^dag K from the identity.
double trace_preservation_error(std::span<const Matrix> kraus);

}  // namespace heisenclone::qcore
