#include "oracle/bigint_oracle.hpp"

#include <functional>

namespace oracle {

namespace {

const mpz_class kZero = 0;

mpz_class factorial(int n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return f;
}

mpz_class power(const mpz_class& base, int e) {
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
  return out;
}

}  // namespace

ExactSpectrum exact(const heisenclone::Spectrum& s) {
  std::vector<mpq_class> probs;
  mpz_class den = 1;
  for (std::size_t k = 0; k < s.size(); ++k) {
    probs.emplace_back(s.probs()[k]);
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), probs.back().get_den_mpz_t());
  }
  ExactSpectrum out;
  out.total = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    out.energies.push_back(s.int_energies()[k]);
    mpq_class scaled = probs[k] * den;
    out.weights.push_back(scaled.get_num());
    out.total += out.weights.back();
  }
  return out;
}

mpq_class ExactDist::at(std::int64_t e) const {
  mpq_class q(num_at(e), den);
  q.canonicalize();
  return q;
}

const mpz_class& ExactDist::num_at(std::int64_t e) const {
  if (e < offset || e > max_energy()) return kZero;
  return num[static_cast<std::size_t>(e - offset)];
}

ExactDist n_copy(const ExactSpectrum& s, int n) {
  const std::int64_t lo = s.energies.front();
  const std::int64_t width = s.energies.back() - lo;
  std::vector<mpz_class> cur{1};
  for (int step = 0; step < n; ++step) {
    std::vector<mpz_class> next(cur.size() + static_cast<std::size_t>(width));
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (cur[i] == 0) continue;
      for (std::size_t k = 0; k < s.energies.size(); ++k)
        next[i + static_cast<std::size_t>(s.energies[k] - lo)] += cur[i] * s.weights[k];
    }
    cur = std::move(next);
  }
  return ExactDist{lo * n, std::move(cur), power(s.total, n)};
}

ExactDist n_copy_by_partitions(const ExactSpectrum& s, int n) {
  const std::size_t k = s.energies.size();
  const std::int64_t lo = s.energies.front();
  const std::int64_t width = s.energies.back() - lo;
  ExactDist out{lo * n, std::vector<mpz_class>(static_cast<std::size_t>(width * n + 1)), power(s.total, n)};
  const mpz_class n_fact = factorial(n);
  std::vector<int> counts(k, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t level, int left) {
    if (level + 1 == k) {
      counts[level] = left;
      mpz_class w = n_fact;
      std::int64_t e = 0;
      for (std::size_t j = 0; j < k; ++j) {
        w /= factorial(counts[j]);
        w *= power(s.weights[j], counts[j]);
        e += counts[j] * s.energies[j];
      }
      out.num[static_cast<std::size_t>(e - out.offset)] += w;
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[level] = c;
      rec(level + 1, left - c);
    }
  };
  rec(0, n);
  return out;
}

mpq_class super_fidelity(const ExactDist& pn, const ExactDist& pm, std::int64_t shift) {
  mpz_class f = 0;
  for (std::size_t i = 0; i < pn.num.size(); ++i)
    if (pn.num[i] != 0) f += pm.num_at(pn.offset + static_cast<std::int64_t>(i) + shift);
  mpq_class q(f, pm.den);
  q.canonicalize();
  return q;
}

mpq_class super_pyes(const ExactDist& pn, const ExactDist& pm, std::int64_t shift) {
  bool first = true;
  mpq_class gamma2;
  for (std::size_t i = 0; i < pn.num.size(); ++i) {
    if (pn.num[i] == 0) continue;
    mpq_class r = pn.at(pn.offset + static_cast<std::int64_t>(i)) / pm.at(pn.offset + static_cast<std::int64_t>(i) + shift);
    if (first || r < gamma2) gamma2 = r;
    first = false;
  }
  return gamma2 * super_fidelity(pn, pm, shift);
}

mpf_class shift_fidelity(const ExactDist& pn, const ExactDist& pm, std::int64_t shift, int bits) {
  mpf_class amp(0, bits);
  for (std::size_t i = 0; i < pn.num.size(); ++i) {
    mpf_class prod(pn.num[i] * pm.num_at(pn.offset + static_cast<std::int64_t>(i) + shift), bits);
    amp += sqrt(prod);
  }
  mpf_class den(pn.den * pm.den, bits);
  return amp * amp / den;
}

mpf_class filter_fidelity(const ExactDist& pn, const ExactDist& pm, const std::vector<mpq_class>& pi2,
                          std::int64_t shift, int bits) {
  mpf_class amp(0, bits), norm(0, bits);
  for (std::size_t i = 0; i < pn.num.size(); ++i) {
    const std::int64_t e = pn.offset + static_cast<std::int64_t>(i);
    mpf_class term(pi2[i] * pn.at(e) * pm.at(e + shift), bits);
    amp += sqrt(term);
    norm += mpf_class(pi2[i] * pn.at(e), bits);
  }
  return amp * amp / norm;
}

double to_double(const mpq_class& q) { return q.get_d(); }
double to_double(const mpf_class& f) { return f.get_d(); }

}  // namespace oracle
