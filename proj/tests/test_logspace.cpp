#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "heisenclone/logspace.hpp"

using namespace heisenclone;

TEST_CASE("add handles -inf and is symmetric") {
  CHECK(logspace::add(logspace::neg_inf, logspace::neg_inf) == logspace::neg_inf);
  CHECK(logspace::add(logspace::neg_inf, 1.5) == 1.5);
  CHECK(logspace::add(2.0, logspace::neg_inf) == 2.0);
  CHECK(logspace::add(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)).epsilon(1e-15));
  CHECK(logspace::add(-1000.0, -1000.0) == doctest::Approx(-1000.0 + std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("log_sum_exp of tiny and huge magnitudes") {
  std::vector<double> xs{-800.0, -800.0, -800.0};
  CHECK(logspace::log_sum_exp(xs) == doctest::Approx(-800.0 + std::log(3.0)).epsilon(1e-14));
  std::vector<double> big{700.0, 700.0};
  CHECK(logspace::log_sum_exp(big) == doctest::Approx(700.0 + std::log(2.0)).epsilon(1e-14));
  std::vector<double> empty;
  CHECK(logspace::log_sum_exp(empty) == logspace::neg_inf);
  std::vector<double> all_inf{logspace::neg_inf, logspace::neg_inf};
  CHECK(logspace::log_sum_exp(all_inf) == logspace::neg_inf);
}

TEST_CASE("compensated sum recovers cancelled mass") {
  logspace::CompensatedSum s;
  s.add(1.0);
  s.add(1e100);
  s.add(1.0);
  s.add(-1e100);
  CHECK(s.value() == 2.0);
}

TEST_CASE("accumulator matches batch log_sum_exp in any order") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> xs(37);
    for (auto& x : xs) x = u(rng);
    logspace::LogAccumulator acc;
    for (double x : xs) acc.add(x);
    CHECK(acc.value() == doctest::Approx(logspace::log_sum_exp(xs)).epsilon(1e-13));
  }
  logspace::LogAccumulator none;
  CHECK(none.value() == logspace::neg_inf);
}
