#include "heisenclone/random.hpp"

#include <algorithm>
#include <complex>
#include <set>

namespace heisenclone::random {

namespace {

qcore::Matrix gaussian(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> g;
  qcore::Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = std::complex<double>(g(rng), g(rng));
  return m;
}

}  // namespace

Spectrum spectrum(Rng& rng, int k, int den, double p_floor) {
  std::uniform_int_distribution<int> pick(-4 * den, 4 * den);
  std::set<int> nums;
  while (static_cast<int>(nums.size()) < k) nums.insert(pick(rng));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(static_cast<std::size_t>(k));
  double total = 0.0;
  for (auto& x : w) total += (x = u(rng));
  std::vector<RawLevel> raw;
  std::size_t i = 0;
  for (int num : nums) {
    double p = p_floor + (1.0 - p_floor * k) * w[i++] / total;
    raw.push_back({Rational(num, den).str(), p});
  }
  return normalize_spectrum(raw);
}

qcore::Matrix unitary(Rng& rng, int d) {
  Eigen::HouseholderQR<qcore::Matrix> qr(gaussian(rng, d, d));
  qcore::Matrix q = qr.householderQ();
  qcore::Matrix r = qr.matrixQR();
  // fix column phases so the distribution is Haar
  for (int j = 0; j < d; ++j) {
    auto diag = r(j, j);
    if (std::abs(diag) > 0.0) q.col(j) *= diag / std::abs(diag);
  }
  return q;
}

qcore::Matrix psd(Rng& rng, int d) {
  qcore::Matrix g = gaussian(rng, d, d);
  qcore::Matrix p = g * g.adjoint() / static_cast<double>(d);
  return 0.5 * (p + p.adjoint());
}

qcore::Vector unit_vector(Rng& rng, int d) {
  qcore::Vector v = gaussian(rng, d, 1).col(0);
  return v / v.norm();
}

qcore::QuantumSystem system(Rng& rng, int d, int lo, int hi) {
  std::uniform_int_distribution<int> pick(lo, hi);
  Eigen::VectorXd e(d);
  do {
    for (int i = 0; i < d; ++i) e(i) = pick(rng);
  } while (d > 1 && e.maxCoeff() == e.minCoeff());
  qcore::Matrix u = unitary(rng, d);
  qcore::Matrix h = u * e.cast<std::complex<double>>().asDiagonal() * u.adjoint();
  h = 0.5 * (h + h.adjoint());
  return qcore::QuantumSystem(h, unit_vector(rng, d));
}

qcore::FilterOperator diagonal_filter(Rng& rng, const qcore::QuantumSystem& sys) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXcd diag(sys.dim());
  for (int i = 0; i < sys.dim(); ++i) diag(i) = u(rng);
  const auto& v = sys.eigenvectors();
  return qcore::FilterOperator(v * diag.asDiagonal() * v.adjoint());
}

std::vector<qcore::Matrix> instrument(Rng& rng, int d_in, int d_out, int count) {
  std::vector<qcore::Matrix> kraus;
  qcore::Matrix a = qcore::Matrix::Zero(d_in, d_in);
  for (int i = 0; i < count; ++i) {
    kraus.push_back(gaussian(rng, d_out, d_in));
    a += kraus.back().adjoint() * kraus.back();
  }
  Eigen::SelfAdjointEigenSolver<qcore::Matrix> es(0.5 * (a + a.adjoint()));
  std::uniform_real_distribution<double> top(0.5, 1.0);
  const double scale = std::sqrt(top(rng) / es.eigenvalues().maxCoeff());
  for (auto& k : kraus) k *= scale;
  return kraus;
}

}  // namespace heisenclone::random
