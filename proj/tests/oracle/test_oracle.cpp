#include <doctest.h>

#include <cmath>
#include <functional>
#include <numeric>

#include "heisenclone/filters.hpp"
#include "heisenclone/random.hpp"
#include "heisenclone/replication.hpp"
#include "oracle/bigint_oracle.hpp"

using namespace heisenclone;

namespace {

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(b), 1e-300); }

std::vector<Spectrum> test_spectra() {
  std::vector<Spectrum> out;
  out.push_back(normalize_spectrum(std::vector<RawLevel>{{"0", 0.5}, {"1", 0.5}}));
  out.push_back(normalize_spectrum(std::vector<RawLevel>{{"-1/2", 0.25}, {"1/2", 0.75}}));
  out.push_back(normalize_spectrum(std::vector<RawLevel>{{"0", 0.25}, {"1", 0.25}, {"2", 0.5}}));
  out.push_back(normalize_spectrum(std::vector<RawLevel>{{"0", 0.125}, {"1/3", 0.375}, {"1", 0.5}}));
  random::Rng rng(99);
  for (int i = 0; i < 4; ++i) out.push_back(random::spectrum(rng, 2 + i % 3, 1 + i % 2, 0.1));
  return out;
}

// pi^2 of the windowed filter, rebuilt from exact multinomials.
std::vector<mpq_class> exact_windowed_pi2(const Spectrum& s, const oracle::ExactSpectrum& es, const oracle::ExactDist& pn,
                                          const AnchorPair& anchor, double radius) {
  const std::size_t k = s.size();
  const int n = anchor.n0.total();
  auto q = [&](const std::vector<int>& counts) {
    const int total = std::accumulate(counts.begin(), counts.end(), 0);
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(total));
    for (std::size_t j = 0; j < k; ++j) {
      mpz_class c, w;
      mpz_fac_ui(c.get_mpz_t(), static_cast<unsigned long>(counts[j]));
      f /= c;
      mpz_pow_ui(w.get_mpz_t(), es.weights[j].get_mpz_t(), static_cast<unsigned long>(counts[j]));
      f *= w;
    }
    mpz_class den;
    mpz_pow_ui(den.get_mpz_t(), es.total.get_mpz_t(), static_cast<unsigned long>(total));
    mpq_class out(f, den);
    out.canonicalize();
    return out;
  };
  std::vector<mpq_class> agg(pn.num.size());
  mpq_class gamma2;
  bool first = true;
  std::vector<int> counts(k);
  std::function<void(std::size_t, int)> rec = [&](std::size_t level, int left) {
    if (level + 1 == k) {
      counts[level] = left;
      std::vector<int> shifted(k);
      std::int64_t e = 0;
      for (std::size_t j = 0; j < k; ++j) {
        if (std::abs(counts[j] - anchor.n0.counts[j]) > radius + 1e-12) return;
        shifted[j] = counts[j] - anchor.n0.counts[j] + anchor.m0.counts[j];
        if (shifted[j] < 0) return;
        e += counts[j] * es.energies[j];
      }
      mpq_class qn = q(counts), qm = q(shifted);
      mpq_class r = qn / qm;
      if (first || r < gamma2) gamma2 = r;
      first = false;
      agg[static_cast<std::size_t>(e - pn.offset)] += qm;
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[level] = c;
      rec(level + 1, left - c);
    }
  };
  rec(0, n);
  std::vector<mpq_class> pi2(pn.num.size());
  for (std::size_t i = 0; i < pi2.size(); ++i) {
    if (agg[i] == 0) continue;
    pi2[i] = gamma2 * agg[i] / pn.at(pn.offset + static_cast<std::int64_t>(i));
    if (pi2[i] > 1) pi2[i] = 1;
  }
  return pi2;
}

}  // namespace

TEST_CASE("exact convolution agrees with the partition sum") {
  for (const auto& s : test_spectra()) {
    auto es = oracle::exact(s);
    for (int n : {1, 3, 6}) {
      auto a = oracle::n_copy(es, n), b = oracle::n_copy_by_partitions(es, n);
      CHECK(a.offset == b.offset);
      CHECK(a.num == b.num);
      CHECK(a.den == b.den);
    }
  }
}

TEST_CASE("N-copy laws match the big-integer oracle") {
  for (const auto& s : test_spectra()) {
    auto es = oracle::exact(s);
    for (int n : {1, 2, 5, 12, 20}) {
      auto ex = oracle::n_copy(es, n);
      for (auto exec : {Exec::serial, Exec::parallel}) {
        auto conv = n_copy_distribution_convolution(s, n, {}, exec);
        auto fast = n_copy_distribution(s, n);
        REQUIRE(conv.offset() == ex.offset);
        REQUIRE(conv.grid_size() == ex.num.size());
        for (std::size_t i = 0; i < ex.num.size(); ++i) {
          const std::int64_t e = ex.offset + static_cast<std::int64_t>(i);
          if (ex.num[i] == 0) {
            CHECK_FALSE(conv.in_support(e));
            CHECK_FALSE(fast.in_support(e));
            continue;
          }
          const double ref = oracle::to_double(ex.at(e));
          CHECK(rel_close(conv.prob(e), ref, 1e-12));
          CHECK(rel_close(fast.prob(e), ref, 1e-12));
        }
      }
    }
  }
}

TEST_CASE("super-filter fidelity and p_yes match the oracle") {
  for (const auto& s : test_spectra()) {
    auto es = oracle::exact(s);
    for (int n : {1, 4, 10, 20}) {
      auto pn = oracle::n_copy(es, n);
      for (int m : {n, n + 3, 2 * n, 60, 100}) {
        if (m < n) continue;
        auto pm = oracle::n_copy(es, m);
        auto flt = build_super_filter(s, n, m);
        auto r = exact_fidelity(s, n, m, flt);
        CHECK(rel_close(r.fidelity, oracle::to_double(oracle::super_fidelity(pn, pm, flt.delta_e0)), 1e-10));
        CHECK(rel_close(r.p_yes, oracle::to_double(oracle::super_pyes(pn, pm, flt.delta_e0)), 1e-10));
      }
    }
  }
}

TEST_CASE("deterministic fidelity matches the oracle maximum over shifts") {
  for (const auto& s : test_spectra()) {
    auto es = oracle::exact(s);
    for (int n : {2, 7, 20}) {
      auto pn = oracle::n_copy(es, n);
      for (int m : {n, 3 * n, 100}) {
        auto pm = oracle::n_copy(es, m);
        auto r = deterministic_fidelity(s, n, m);
        const std::int64_t width = pn.max_energy() - pn.offset;
        const std::int64_t d0 = anchor_shift(s, n, m).delta_e0;
        mpf_class best(0, 256);
        for (std::int64_t d = d0 - width; d <= d0 + width; ++d) {
          auto f = oracle::shift_fidelity(pn, pm, d);
          if (f > best) best = f;
        }
        CHECK(rel_close(r.fidelity, oracle::to_double(best), 1e-10));
        CHECK(rel_close(oracle::to_double(oracle::shift_fidelity(pn, pm, r.delta_e0)), r.fidelity, 1e-10));
      }
    }
  }
}

TEST_CASE("windowed-filter fidelity matches the oracle") {
  for (const auto& s : test_spectra()) {
    auto es = oracle::exact(s);
    for (int n : {4, 10, 20}) {
      auto pn = oracle::n_copy(es, n);
      for (int m : {2 * n, 100}) {
        auto pm = oracle::n_copy(es, m);
        for (double radius : {0.0, 1.5, 3.0, 100.0}) {
          auto flt = build_windowed_filter_radius(s, n, m, radius);
          auto anchor = anchor_shift(s, n, m);
          auto pi2 = exact_windowed_pi2(s, es, pn, anchor, radius);
          for (std::size_t i = 0; i < pi2.size(); ++i) {
            if (pi2[i] == 0)
              CHECK(std::isinf(flt.log_pi[i]));
            else
              CHECK(rel_close(std::exp(2.0 * flt.log_pi[i]), oracle::to_double(pi2[i]), 1e-10));
          }
          auto r = exact_fidelity(s, n, m, flt);
          auto ref = oracle::filter_fidelity(pn, pm, pi2, anchor.delta_e0);
          CHECK(rel_close(r.fidelity, oracle::to_double(ref), 1e-10));
        }
      }
    }
  }
}

TEST_CASE("the 100 -> 1000 qubit value is the exact rational sum") {
  auto s = normalize_spectrum(std::vector<RawLevel>{{"0", 0.5}, {"1", 0.5}});
  auto es = oracle::exact(s);
  auto pn = oracle::n_copy(es, 100), pm = oracle::n_copy(es, 1000);
  double ref = oracle::to_double(oracle::super_fidelity(pn, pm, 450));
  CHECK(ref == doctest::Approx(0.9986082584055779).epsilon(1e-14));
  auto r = exact_fidelity(s, 100, 1000, build_super_filter(s, 100, 1000));
  CHECK(rel_close(r.fidelity, ref, 1e-10));
}
