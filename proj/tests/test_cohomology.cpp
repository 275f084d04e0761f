#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "iwaves/cohomology.hpp"
#include "iwaves/dynamics.hpp"
#include "iwaves/errors.hpp"
#include "oracles.hpp"

using namespace iwaves;
using std::numbers::pi;

namespace {
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
}

TEST_CASE("zero right-hand side gives the mean") {
  const auto sol = solve_cohomological(FourierSeries(4), kGolden, 3.0);
  for (double t : {0.0, 0.3, 0.8}) CHECK(sol.v.value(t) == doctest::Approx(3.0));
}

TEST_CASE("single cosine mode") {
  const auto g = FourierSeries::from_function([](double t) { return std::cos(2 * pi * t); }, 4);
  const auto sol = solve_cohomological(g, kGolden);
  const std::complex<double> expected =
      0.5 / (1.0 - std::exp(std::complex<double>(0, 2 * pi * kGolden)));
  CHECK(std::abs(sol.v.coefficient(1) - expected) < 1e-14);
  CHECK(std::abs(sol.v.coefficient(-1) - std::conj(expected)) < 1e-14);
  for (int k = 2; k <= sol.v.order(); ++k) CHECK(std::abs(sol.v.coefficient(k)) < 1e-15);
  CHECK(sol.residual <= 1e-12);

  const auto dense = oracle::collocation_solve(g, kGolden, 0.0);
  const int n = static_cast<int>(dense.size());
  for (int j = 0; j < n; ++j) CHECK(std::abs(dense(j) - sol.v.value(static_cast<double>(j) / n)) < 1e-12);
}

TEST_CASE("resonance and input gates") {
  const auto g = FourierSeries::from_function([](double t) { return std::cos(6 * pi * t); }, 4);
  CHECK_THROWS_AS(solve_cohomological(g, 1.0 / 3), ResonanceError);
  const auto shifted = FourierSeries::from_function([](double t) { return 1.0 + std::cos(2 * pi * t); }, 4);
  CHECK_THROWS_AS(solve_cohomological(shifted, kGolden), InputError);
}

TEST_CASE("truncated Fourier solution matches the dense collocation solve") {
  std::mt19937_64 rng(2024);
  for (double alpha : {kGolden, std::sqrt(2.0) - 1}) {
    for (int trial = 0; trial < 10; ++trial) {
      const int K = 8 + 7 * trial;
      const auto g = oracle::random_zero_mean(K, rng);
      const auto sol = solve_cohomological(g, alpha, 0.25);
      const auto dense = oracle::collocation_solve(g, alpha, 0.25);
      const int n = static_cast<int>(dense.size());
      double err = 0.0;
      for (int j = 0; j < n; ++j) err = std::max(err, std::abs(dense(j) - sol.v.value(static_cast<double>(j) / n)));
      CHECK(err <= 1e-10);
      CHECK(sol.residual <= 1e-10);
    }
  }
}

TEST_CASE("solutions are unique modulo constants") {
  std::mt19937_64 rng(5);
  const auto g = oracle::random_zero_mean(20, rng);
  const auto a = solve_cohomological(g, kGolden, 0.0);
  const auto b = solve_cohomological(g, kGolden, 1.5);
  for (double t : {0.0, 0.17, 0.5, 0.71}) CHECK(b.v.value(t) - a.v.value(t) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("small divisors") {
  const auto half = small_divisor_report(0.5, 2);
  REQUIRE(half.entries.size() == 2);
  CHECK(half.entries[1].k == 2);
  CHECK(half.entries[1].divisor == 0.0);
  CHECK(std::isinf(half.fitted_exponent));
  CHECK(small_divisor(0.5, 1) == doctest::Approx(2.0));
  CHECK(small_divisor(0.25, 1) == doctest::Approx(std::sqrt(2.0)));

  const auto golden = small_divisor_report(kGolden, 1000);
  CHECK(golden.fitted_exponent == doctest::Approx(1.0).epsilon(0.1));

  const auto liouville = small_divisor_report(liouville_partial_sum(5).convert_to<double>(), 1000);
  CHECK(liouville.fitted_exponent > 2.0);
  CHECK(liouville.worst_exponent > 2.0);
}

TEST_CASE("Sobolev estimate with the fitted exponent") {
  const double alpha = kGolden;
  const int K = 200;
  const auto report = small_divisor_report(alpha, K);
  const double beta = std::max(0.0, report.fitted_exponent - 1.0);
  // C = sup_k |k|^{-(1+beta)} / divisor_k, so |v_k| <= C |k|^{1+beta} |g_k| term by term.
  double C = 0.0;
  for (const auto& e : report.entries) C = std::max(C, 1.0 / (e.divisor * std::pow(e.k, 1.0 + beta)));
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    const auto g = oracle::random_zero_mean(60, rng);
    const auto v = solve_cohomological(g, alpha).v;
    for (double s : {0.0, 1.0, 2.0}) CHECK(v.sobolev_norm(s) <= C * g.sobolev_norm(s + beta + 1) * (1 + 1e-12));
  }
}
