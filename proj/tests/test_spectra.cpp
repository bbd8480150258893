#include <doctest.h>

#include <cmath>
#include <random>

#include "heisenclone/error.hpp"
#include "heisenclone/logspace.hpp"
#include "heisenclone/random.hpp"
#include "heisenclone/spectra.hpp"

using namespace heisenclone;

namespace {

Spectrum make(std::vector<RawLevel> raw) { return normalize_spectrum(raw); }
Spectrum qubit() { return make({{"0", 0.5}, {"1", 0.5}}); }

}  // namespace

TEST_CASE("normalize puts energies on the integer grid") {
  auto s = make({{"-1/2", 0.25}, {"1/2", 0.75}});
  CHECK(s.grid_unit() == Rational(1, 2));
  CHECK(s.int_energies() == std::vector<std::int64_t>{-1, 1});
  CHECK(s.p_min() == 0.25);

  auto t = make({{"1/3", 0.2}, {"1/2", 0.3}, {"0", 0.5}});
  CHECK(t.grid_unit() == Rational(1, 6));
  CHECK(t.int_energies() == std::vector<std::int64_t>{0, 2, 3});
  CHECK(t.probs()[0] == 0.5);
}

TEST_CASE("normalize merges, drops zeros and validates") {
  auto s = make({{"1", 0.25}, {"2/2", 0.25}, {"0", 0.5}, {"5", 0.0}});
  CHECK(s.size() == 2);
  CHECK(s.probs()[1] == doctest::Approx(0.5));
  CHECK_THROWS_AS(make({{"0", 1.0}}), ValidationError);
  CHECK_THROWS_AS(make({{"0", 1.0}, {"1", 0.0}}), ValidationError);
  CHECK_THROWS_AS(make({{"0", 0.5}, {"1", 0.6}}), ValidationError);
  CHECK_THROWS_AS(make({{"0", -0.5}, {"1", 1.5}}), ValidationError);
  CHECK_THROWS_AS(make({{"0", NAN}, {"1", 0.5}}), ValidationError);
  CHECK_THROWS_AS(make({{"x", 0.5}, {"1", 0.5}}), ParseError);
}

TEST_CASE("spectrum moments") {
  auto s = make({{"-1/2", 0.25}, {"1/2", 0.75}});
  CHECK(s.mean_energy() == doctest::Approx(0.25));
  CHECK(s.norm_inf() == 0.5);
  CHECK(s.energy_span() == 1.0);
  CHECK(s.centered_norm_inf_grid() == doctest::Approx(1.5));
}

TEST_CASE("qubit N-copy law is the binomial") {
  auto s = qubit();
  auto d = n_copy_distribution(s, 4);
  CHECK(d.min_energy() == 0);
  CHECK(d.max_energy() == 4);
  const double expect[] = {1, 4, 6, 4, 1};
  for (int e = 0; e <= 4; ++e) CHECK(d.prob(e) == doctest::Approx(expect[e] / 16.0).epsilon(1e-14));
  CHECK(d.prob(7) == 0.0);
  CHECK(d.log_prob(-1) == logspace::neg_inf);
  CHECK(d.support_size() == 5);
}

TEST_CASE("binomial fast path agrees with convolution") {
  auto s = make({{"-1/2", 0.3}, {"3/2", 0.7}});
  for (int n : {1, 2, 7, 40, 150}) {
    auto fast = n_copy_distribution(s, n);
    auto conv = n_copy_distribution_convolution(s, n, {}, Exec::serial);
    REQUIRE(fast.offset() == conv.offset());
    REQUIRE(fast.grid_size() == conv.grid_size());
    CHECK(fast.support_size() == conv.support_size());
    for (std::size_t i = 0; i < fast.grid_size(); ++i) {
      double a = fast.log_weights()[i], b = conv.log_weights()[i];
      if (std::isinf(a) || std::isinf(b)) {
        CHECK(a == b);
      } else if (a > -600.0) {
        CHECK(std::exp(a) == doctest::Approx(std::exp(b)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("grid gaps stay off the support") {
  auto s = make({{"0", 0.5}, {"2", 0.5}});
  auto d = n_copy_distribution(s, 3);
  CHECK(d.grid_size() == 7);
  CHECK(d.support_size() == 4);
  CHECK_FALSE(d.in_support(1));
  CHECK(d.in_support(2));
}

TEST_CASE("large binomials stay normalized in log space") {
  auto s = qubit();
  auto d = n_copy_distribution(s, 157'744);
  CHECK(logspace::log_sum_exp(d.log_weights()) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(d.log_prob(0) == doctest::Approx(-157'744 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("N-copy errors") {
  auto s = qubit();
  CHECK_THROWS_AS(n_copy_distribution(s, 0), DomainError);
  Limits tiny;
  tiny.support_cap = 10;
  CHECK_THROWS_AS(n_copy_distribution(s, 20, tiny), ResourceError);
  CHECK_THROWS_AS(n_copy_distribution_convolution(s, 20, tiny), ResourceError);
}

TEST_CASE("partition enumeration") {
  CHECK(partition_count(4, 3) == 15);
  CHECK(partition_count(0, 2) == 1);
  auto parts = enumerate_partitions(2, 3);
  REQUIRE(parts.size() == 6);
  CHECK(parts.front().counts == std::vector<int>{0, 0, 2});
  CHECK(parts.back().counts == std::vector<int>{2, 0, 0});
  for (std::size_t i = 1; i < parts.size(); ++i) CHECK(parts[i - 1].counts < parts[i].counts);
  for (const auto& p : parts) CHECK(p.total() == 2);
  Limits tiny;
  tiny.partition_cap = 5;
  CHECK_THROWS_AS(enumerate_partitions(2, 3, tiny), ResourceError);
}

TEST_CASE("multinomial weights sum to one and rebuild the N-copy law") {
  random::Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random::spectrum(rng, 3, 2);
    const int n = 6;
    auto d = n_copy_distribution(s, n);
    std::vector<double> by_energy(d.grid_size(), 0.0);
    double total = 0.0;
    for (const auto& p : enumerate_partitions(n, 3)) {
      double w = std::exp(multinomial_weight(s, p));
      total += w;
      by_energy[static_cast<std::size_t>(partition_energy(s, p) - d.offset())] += w;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < by_energy.size(); ++i) CHECK(std::abs(by_energy[i] - std::exp(d.log_weights()[i])) < 1e-12);
  }
  auto s = qubit();
  CHECK_THROWS_AS(multinomial_weight(s, Partition{{1, 1, 1}}), DomainError);
}

TEST_CASE("largest remainder rounding") {
  auto s = make({{"0", 0.25}, {"1", 0.75}});
  CHECK(largest_remainder(s, 10).counts == std::vector<int>{3, 7});  // 2.5 / 7.5: tie goes low
  auto t = make({{"0", 0.2}, {"1", 0.3}, {"2", 0.5}});
  auto p = largest_remainder(t, 7);
  CHECK(p.total() == 7);
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(p.counts[k] - 7 * t.probs()[k]) <= 1.0);
}

TEST_CASE("anchor shift embeds N-copy energies into M-copy energies") {
  auto s = qubit();
  auto a = anchor_shift(s, 100, 1000);
  CHECK(a.delta_e0 == 450);
  CHECK(anchor_shift(s, 10, 10).delta_e0 == 0);
  CHECK_THROWS_AS(anchor_shift(s, 10, 5), DomainError);
  CHECK_THROWS_AS(anchor_shift(s, 0, 5), DomainError);

  random::Rng rng(5);
  std::uniform_int_distribution<int> pick_n(1, 30);
  for (int trial = 0; trial < 300; ++trial) {
    auto sp = random::spectrum(rng, 2 + trial % 3, 1 + trial % 4);
    int n = pick_n(rng);
    int m = n + pick_n(rng) * (trial % 5);
    auto anchor = anchor_shift(sp, n, m);
    CHECK(anchor.n0.total() == n);
    CHECK(anchor.m0.total() == m);
    for (std::size_t k = 0; k < sp.size(); ++k) {
      CHECK(anchor.m0.counts[k] >= anchor.n0.counts[k]);
      CHECK(std::abs(anchor.m0.counts[k] - m * sp.probs()[k]) <= 1.0 + 1e-9);
    }
    CHECK(anchor.delta_e0 == partition_energy(sp, anchor.m0) - partition_energy(sp, anchor.n0));
  }
}
