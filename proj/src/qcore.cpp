#include "heisenclone/qcore.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "heisenclone/error.hpp"
#include "heisenclone/logspace.hpp"

namespace heisenclone::qcore {

namespace {

using cd = std::complex<double>;

constexpr double kDegeneracyGap = 1e-10;

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void check_hermitian(const Matrix& m, double tol, const char* what) {
  if (m.rows() != m.cols()) throw ValidationError(std::string(what) + " is not square");
  if (max_abs(m - m.adjoint()) > tol) throw ValidationError(std::string(what) + " is not Hermitian");
}

// Group label per eigenvalue: consecutive eigenvalues closer than the gap share a label value.
Eigen::VectorXd grouped_levels(const Eigen::VectorXd& ev) {
  Eigen::VectorXd out = ev;
  for (Eigen::Index i = 1; i < ev.size(); ++i)
    if (ev(i) - ev(i - 1) < kDegeneracyGap) out(i) = out(i - 1);
  return out;
}

Matrix twirl_in_eigenbasis(const Matrix& p, const QuantumSystem& sys, double sigma, bool hard_limit) {
  check_hermitian(p, 1e-10, "operator P");
  if (p.rows() != sys.dim()) throw ValidationError("operator P has the wrong dimension");
  Eigen::SelfAdjointEigenSolver<Matrix> es(p);
  if (es.eigenvalues().minCoeff() < -1e-10) throw ValidationError("operator P is not positive semidefinite");
  if (!(sigma >= 0.0)) throw DomainError("sigma must be non-negative");

  const auto levels = grouped_levels(sys.eigenvalues());
  const Matrix& v = sys.eigenvectors();
  Matrix pe = v.adjoint() * p * v;
  for (Eigen::Index i = 0; i < pe.rows(); ++i)
    for (Eigen::Index j = 0; j < pe.cols(); ++j) {
      if (levels(i) == levels(j)) continue;
      double gap = levels(i) - levels(j);
      pe(i, j) *= hard_limit ? 0.0 : std::exp(-sigma * sigma * gap * gap / 2.0);
    }
  return v * pe * v.adjoint();
}

}  // namespace

QuantumSystem::QuantumSystem(Matrix hamiltonian, Vector psi) : hamiltonian_(std::move(hamiltonian)), psi_(std::move(psi)) {
  if (psi_.size() < 1 || psi_.size() > kMaxDim)
    throw ValidationError("system dimension must lie in [1, " + std::to_string(kMaxDim) + "]");
  if (hamiltonian_.rows() != psi_.size() || hamiltonian_.cols() != psi_.size())
    throw ValidationError("hamiltonian and psi dimensions disagree");
  check_hermitian(hamiltonian_, 1e-12, "hamiltonian");
  if (std::abs(psi_.norm() - 1.0) > 1e-12) throw ValidationError("psi is not a unit vector");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hamiltonian_);
  eigenvalues_ = es.eigenvalues();
  eigenvectors_ = es.eigenvectors();
}

QuantumSystem system_from_spectrum(const Spectrum& s) {
  const auto d = static_cast<Eigen::Index>(s.size());
  Matrix h = Matrix::Zero(d, d);
  Vector psi(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    h(k, k) = s.energies()[static_cast<std::size_t>(k)].to_double();
    psi(k) = std::sqrt(s.probs()[static_cast<std::size_t>(k)]);
  }
  psi.normalize();
  return QuantumSystem(std::move(h), std::move(psi));
}

FilterOperator::FilterOperator(Matrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw ValidationError("filter operator is not square");
  Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_.adjoint() * matrix_);
  if (es.eigenvalues().maxCoeff() > 1.0 + 1e-10) throw ValidationError("filter operator has M^dag M > I");
}

FilterOperator epsilon_filter(const QuantumSystem& sys, double t0, double eps) {
  if (!(eps > 0.0) || eps > 1.0) throw DomainError("epsilon must lie in (0, 1]");
  Vector psi = clock_state(sys, t0);
  cd mean = psi.dot(sys.hamiltonian() * psi);
  Vector perp = sys.hamiltonian() * psi - mean * psi;
  if (perp.norm() < 1e-12) throw DomainError("probe is an eigenstate of H: no orthogonal direction");
  perp.normalize();
  return FilterOperator(eps * psi * psi.adjoint() + perp * perp.adjoint());
}

FilterOperator noon_filter(const QuantumSystem& sys) {
  const int d = sys.dim();
  const Matrix& v = sys.eigenvectors();
  Vector amp = v.adjoint() * sys.psi();
  const Eigen::Index lo = 0, hi = d - 1;
  const double a_lo = std::abs(amp(lo)), a_hi = std::abs(amp(hi));
  if (a_lo < 1e-12 || a_hi < 1e-12) throw DomainError("probe has no weight on an extreme energy level");
  const double c = std::min(a_lo, a_hi);
  Eigen::VectorXcd diag = Eigen::VectorXcd::Zero(d);
  diag(lo) = c / a_lo;
  diag(hi) = c / a_hi;
  return FilterOperator(v * diag.asDiagonal() * v.adjoint());
}

Matrix pseudo_inverse(const Matrix& m, double cutoff) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd inv = svd.singularValues();
  for (Eigen::Index i = 0; i < inv.size(); ++i) inv(i) = inv(i) > cutoff ? 1.0 / inv(i) : 0.0;
  return svd.matrixV() * inv.cast<cd>().asDiagonal() * svd.matrixU().adjoint();
}

Vector clock_state(const QuantumSystem& sys, double t) {
  const Matrix& v = sys.eigenvectors();
  Vector amp = v.adjoint() * sys.psi();
  for (Eigen::Index k = 0; k < amp.size(); ++k) amp(k) *= std::exp(cd(0.0, -t * sys.eigenvalues()(k)));
  return v * amp;
}

double qfi(const QuantumSystem& sys, double t) {
  Vector psi = clock_state(sys, t);
  Vector hpsi = sys.hamiltonian() * psi;
  double mean = psi.dot(hpsi).real();
  double second = hpsi.squaredNorm();
  return std::max(0.0, 4.0 * (second - mean * mean));
}

Matrix prob_generator(const QuantumSystem& sys, const FilterOperator& flt, double t) {
  const Matrix& m = flt.matrix();
  if (m.rows() != sys.dim()) throw ValidationError("filter and system dimensions disagree");
  Vector psi = clock_state(sys, t);
  Vector mpsi = m * psi;
  double norm2 = mpsi.squaredNorm();
  if (std::sqrt(norm2) <= 1e-12) throw NumericError("state annihilated by filter");
  const Matrix& h = sys.hamiltonian();
  Matrix mdm = m.adjoint() * m;
  cd comm = psi.dot((h * mdm - mdm * h) * psi);
  Matrix k = m * h * pseudo_inverse(m);
  k.diagonal().array() += comm / (2.0 * norm2);
  return k;
}

double prob_qfi(const QuantumSystem& sys, const FilterOperator& flt, double t) {
  Matrix k = prob_generator(sys, flt, t);
  Vector phi = flt.matrix() * clock_state(sys, t);
  phi.normalize();
  Vector kphi = k * phi;
  double q = 4.0 * (kphi.squaredNorm() - std::norm(phi.dot(kphi)));
  return q < 1e-15 ? 0.0 : q;
}

double prob_crb(double q) { return q > 0.0 ? 1.0 / q : std::numeric_limits<double>::infinity(); }

double avg_qfi_uniform(const QuantumSystem& sys, const FilterOperator& flt, double period, int quadrature_points) {
  if (!(period > 0.0)) throw DomainError("period must be positive");
  if (quadrature_points < 64) throw DomainError("need at least 64 quadrature points");
  const auto& ev = sys.eigenvalues();
  for (Eigen::Index k = 1; k < ev.size(); ++k) {
    double cycles = (ev(k) - ev(0)) * period / (2.0 * std::numbers::pi);
    if (std::abs(cycles - std::round(cycles)) > 1e-8)
      throw ValidationError("spectrum is not periodic with the given period");
  }

  logspace::CompensatedSum wq, w;
  double wmax = 0.0;
  auto sample = [&](double t) {
    double weight = (flt.matrix() * clock_state(sys, t)).squaredNorm();
    wmax = std::max(wmax, weight);
    w.add(weight);
    if (weight > 1e-24) wq.add(weight * prob_qfi(sys, flt, t));
  };

  long points = quadrature_points;
  for (long j = 0; j < points; ++j) sample(period * static_cast<double>(j) / static_cast<double>(points));
  if (!(w.value() > 0.0)) throw NumericError("filter annihilates the whole orbit");
  double prev = wq.value() / w.value();
  while (true) {
    if (points * 2 > (1L << 20)) throw NumericError("trapezoid average did not converge within 2^20 points");
    // odd multiples of the new step are exactly the points not yet sampled
    for (long j = 1; j < 2 * points; j += 2)
      sample(period * static_cast<double>(j) / static_cast<double>(2 * points));
    points *= 2;
    double cur = wq.value() / w.value();
    if (std::abs(cur - prev) <= 1e-8 * std::max(std::abs(cur), 1e-300)) return cur;
    prev = cur;
  }
}

double hl_variance_bound(const Spectrum& s, int n) {
  if (n < 1) throw DomainError("N must be at least 1");
  double span = s.energy_span();
  return 1.0 / (static_cast<double>(n) * n * span * span);
}

AvgCrbResult avg_crb(std::span<const CrbSample> samples) {
  if (samples.empty()) throw DomainError("no samples");
  logspace::CompensatedSum wsum, wq, wv;
  for (const auto& s : samples) {
    if (!(s.weight >= 0.0)) throw DomainError("weights must be non-negative");
    if (!(s.variance > 0.0) || !(s.qfi > 0.0)) throw DomainError("variances and QFIs must be positive");
    wsum.add(s.weight);
    wq.add(s.weight * s.qfi);
    wv.add(s.weight * s.variance);
  }
  if (std::abs(wsum.value() - 1.0) > 1e-9) throw DomainError("weights must sum to 1");
  AvgCrbResult r;
  r.lower_bound = 1.0 / wq.value();
  r.mean_variance = wv.value();
  r.holds = r.mean_variance >= r.lower_bound * (1.0 - 1e-12);
  return r;
}

Matrix gaussian_twirl(const Matrix& p, const QuantumSystem& sys, double sigma) {
  return twirl_in_eigenbasis(p, sys, sigma, false);
}

Matrix energy_diagonal(const Matrix& p, const QuantumSystem& sys) { return twirl_in_eigenbasis(p, sys, 0.0, true); }

InstrumentDecomposition decompose_instrument(std::span<const Matrix> kraus) {
  if (kraus.empty()) throw ValidationError("instrument has no Kraus operators");
  const auto d_out = kraus[0].rows(), d_in = kraus[0].cols();
  Matrix a = Matrix::Zero(d_in, d_in);
  for (const auto& k : kraus) {
    if (k.rows() != d_out || k.cols() != d_in) throw ValidationError("Kraus operators have mismatched shapes");
    a += k.adjoint() * k;
  }
  a = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  if (es.eigenvalues().maxCoeff() > 1.0 + 1e-10)
    throw ValidationError("invalid instrument: sum of K^dag K exceeds the identity");

  const Matrix& v = es.eigenvectors();
  Eigen::VectorXd root(d_in), inv(d_in);
  std::vector<Eigen::Index> kernel;
  for (Eigen::Index i = 0; i < d_in; ++i) {
    double lambda = es.eigenvalues()(i);
    // support is decided on M^dag M; its noise floor sits far below the cutoff
    bool support = lambda > kSupportCutoff;
    root(i) = support ? std::sqrt(lambda) : 0.0;
    inv(i) = support ? 1.0 / root(i) : 0.0;
    if (!support) kernel.push_back(i);
  }
  InstrumentDecomposition out;
  out.m_op = v * root.cast<cd>().asDiagonal() * v.adjoint();
  Matrix m_inv = v * inv.cast<cd>().asDiagonal() * v.adjoint();
  for (const auto& k : kraus) out.channel_kraus.push_back(k * m_inv);
  if (!kernel.empty()) {
    if (d_out == d_in) {
      Matrix perp = Matrix::Zero(d_in, d_in);
      for (auto i : kernel) perp += v.col(i) * v.col(i).adjoint();
      out.channel_kraus.push_back(perp);
    } else {
      // different output space: send the kernel to a fixed output state
      for (auto i : kernel) {
        Matrix e = Matrix::Zero(d_out, d_in);
        e.row(0) = v.col(i).adjoint();
        out.channel_kraus.push_back(e);
      }
    }
  }
  return out;
}

std::vector<Matrix> recompose(const InstrumentDecomposition& dec) {
  std::vector<Matrix> out;
  out.reserve(dec.channel_kraus.size());
  for (const auto& c : dec.channel_kraus) out.push_back(c * dec.m_op);
  return out;
}

Matrix choi_matrix(std::span<const Matrix> kraus) {
  if (kraus.empty()) throw ValidationError("no Kraus operators");
  const auto d_out = kraus[0].rows(), d_in = kraus[0].cols();
  Matrix j = Matrix::Zero(d_in * d_out, d_in * d_out);
  for (Eigen::Index a = 0; a < d_in; ++a)
    for (Eigen::Index b = 0; b < d_in; ++b) {
      Matrix block = Matrix::Zero(d_out, d_out);
      for (const auto& k : kraus) block += k.col(a) * k.col(b).adjoint();
      j.block(a * d_out, b * d_out, d_out, d_out) = block;
    }
  return j;
}

double trace_preservation_error(std::span<const Matrix> kraus) {
  if (kraus.empty()) return 1.0;
  Matrix a = Matrix::Zero(kraus[0].cols(), kraus[0].cols());
  for (const auto& k : kraus) a += k.adjoint() * k;
  return max_abs(a - Matrix::Identity(a.rows(), a.cols()));
}

}  // namespace heisenclone::qcore
