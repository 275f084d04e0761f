#include <doctest.h>

#include <cmath>
#include <numbers>

#include "iwaves/errors.hpp"
#include "iwaves/grid.hpp"
#include "iwaves/solver.hpp"
#include "iwaves/spectra.hpp"
#include "oracles.hpp"

using namespace iwaves;
using std::numbers::pi;

namespace {

EigenMode square_mode(int i, int j) {
  for (const auto& m : square_modes(std::max(i, j))) {
    if (m.i == i && m.j == j) return m;
  }
  throw std::runtime_error("mode not found");
}

double p_of(double lambda, double u11, double u22) { return (1 - lambda * lambda) * u22 - lambda * lambda * u11; }

}  // namespace

TEST_CASE("energy_h10") {
  const auto m11 = square_mode(1, 1), m12 = square_mode(1, 2);
  const std::vector<EigenMode> both{m11, m12};
  CHECK(energy_h10(std::vector<double>{0.0, 0.0}, both) == 0.0);
  CHECK(energy_h10(std::vector<double>{1.0}, std::span(&m11, 1)) == doctest::Approx(pi * pi / 2));
  const double sum = energy_h10(std::vector<double>{1.0, 2.0}, both);
  CHECK(sum == doctest::Approx(pi * pi / 2 + 4 * pi * pi * 5 / 4));
}

TEST_CASE("mode coefficient: initial value and closed form at lambda = 0.6") {
  const auto m = square_mode(1, 1);
  CHECK(mode_coefficient(1.0, 0.6, m, 0.0) == 0.0);
  for (double t : {0.5, 3.0, 40.0}) {
    const double expected = (std::cos(0.6 * t) - std::cos(t / std::sqrt(2.0))) / (-0.28 * pi * pi);
    CHECK(mode_coefficient(1.0, 0.6, m, t) == doctest::Approx(expected).epsilon(1e-12));
  }
  const double times[] = {0.0, 1.0, 2.0};
  const double one = 1.0;
  const auto trace = evolve_modal(std::span(&one, 1), 0.6, std::span(&m, 1), times);
  CHECK(trace.energy_h10[0] == 0.0);
  CHECK(trace.norm_hminus1[2] == doctest::Approx(std::sqrt(trace.energy_h10[2])));
}

TEST_CASE("mode coefficients agree with RK4 integration of the forced oscillator") {
  // The mode amplitude of w solves w'' + e w = c cos(lambda t); u = -w / D.
  for (auto [i, j, lambda] : {std::tuple{1, 1, 0.6}, std::tuple{2, 1, 0.3}, std::tuple{1, 1, std::sqrt(0.5)}}) {
    const auto m = square_mode(i, j);
    const double c = 0.7;
    const auto w = oracle::rk4_oscillator(m.eigenvalue, [&](double t) { return c * std::cos(lambda * t); }, 10.0, 1e-3);
    double err = 0.0;
    for (std::size_t k = 0; k < w.size(); k += 50) {
      err = std::max(err, std::abs(-w[k] / m.laplace_scale - mode_coefficient(c, lambda, m, k * 1e-3)));
    }
    CHECK(err <= 1e-6);
  }
}

TEST_CASE("resonant forcing grows secularly") {
  const auto m = square_mode(1, 1);
  const auto times = uniform_time_grid(100.0, 0.01);
  const double one = 1.0;
  const auto trace = evolve_modal(std::span(&one, 1), std::sqrt(0.5), std::span(&m, 1), times);
  CHECK(sup_until(trace.times, trace.energy_h10, 100.0) > 10 * sup_until(trace.times, trace.energy_h10, 10.0));
  CHECK(trace.growth);

  // Off resonance the beat period is about 60, so look well beyond it.
  const auto long_times = log_time_grid(1e-2, 1e4, 256);
  const auto bounded = evolve_modal(std::span(&one, 1), 0.6, std::span(&m, 1), long_times);
  CHECK_FALSE(bounded.growth);
}

TEST_CASE("evolve_square on a single mode matches evolve_modal") {
  const auto m = square_mode(2, 3);
  const auto times = log_time_grid(1e-1, 1e2, 64);
  CHECK(times.front() == 0.0);
  const auto sq = evolve_square([&](Point2 x) { return 1.5 * m.forcing(x); }, 0.6, times, 8);
  const double c = 1.5;
  const auto md = evolve_modal(std::span(&c, 1), 0.6, std::span(&m, 1), times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    CHECK(std::abs(sq.energy_h10[k] - md.energy_h10[k]) <= 1e-10 * (1 + md.energy_h10[k]));
  }
  CHECK_THROWS_AS(evolve_square([](Point2) { return 1.0; }, 0.6, times, 8), QuadratureError);
}

TEST_CASE("w(t) stays within twice the H^-1 norm of the stationary profile") {
  const auto modes = square_modes(6);
  std::vector<double> c(modes.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = std::exp(-0.5 * (modes[k].i + modes[k].j));
  const double lambda = 0.61;
  // Stationary profile coefficients c / (D (lambda^2 - e)).
  std::vector<double> g(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    g[k] = c[k] / (modes[k].laplace_scale * (lambda * lambda - modes[k].eigenvalue));
  }
  const double bound = 2 * std::sqrt(energy_h10(g, modes));
  const auto trace = evolve_modal(c, lambda, modes, uniform_time_grid(200.0, 0.05));
  for (double n : trace.norm_hminus1) CHECK(n <= bound * (1 + 1e-12));
}

TEST_CASE("apply_p on a polynomial") {
  const auto u = [](Point2 x) { return x.x1 * x.x1 * x.x2 + 3 * x.x2 * x.x2; };
  const Point2 x{0.2, -0.4};
  CHECK(apply_p(u, 0.3, x, 1e-3) == doctest::Approx(p_of(0.3, 2 * x.x2, 6.0)).epsilon(1e-8));
}

TEST_CASE("grid functions") {
  const auto c = BoundaryCurve::circle();
  const GridFunction g(c, 21, [](Point2 x) { return x.x1; });
  CHECK(g.size() == 21);
  CHECK(g.box()[0] < -1.0);
  CHECK(g.inside(10, 10));
  CHECK_FALSE(g.inside(0, 0));
  CHECK(g.max_abs_inside() <= 1.0 + g.spacing());
  const auto h = g.resampled([](Point2) { return 2.0; });
  CHECK(h.value(10, 10) == 2.0);
  const auto b = GridFunction::on_box({0, 1, 0, 1}, 11, [](Point2) { return 1.0; });
  CHECK(b.boundary_adjacent(0, 5));
  CHECK_FALSE(b.boundary_adjacent(5, 5));
}

TEST_CASE("right inverse on the disk: constant forcing") {
  const auto curve = BoundaryCurve::circle();
  const double lambda = 0.3;
  const auto res = right_inverse(curve, LambdaContext(lambda), GridFunction(curve, 41, [](Point2) { return 1.0; }));
  CHECK(res.report.verified);
  CHECK(res.report.residual <= 1e-4);
  CHECK(std::abs(res.report.zero_average_plus) <= 1e-8);
  CHECK(std::abs(res.report.zero_average_minus) <= 1e-8);
  double err = 0.0;
  for (int i = 0; i < res.u.size(); ++i) {
    for (int j = 0; j < res.u.size(); ++j) {
      if (!res.u.inside(i, j)) continue;
      const Point2 x = res.u.point(i, j);
      const double r2 = x.x1 * x.x1 + x.x2 * x.x2;
      if (r2 >= 1) continue;
      err = std::max(err, std::abs(res.u.value(i, j) - (r2 - 1) / (2 * (1 - 2 * lambda * lambda))));
    }
  }
  CHECK(err <= 1e-6);
}

TEST_CASE("right inverse recovers a manufactured solution") {
  const auto curve = BoundaryCurve::circle();
  const double lambda = 0.3;
  const auto exact = [](Point2 x) { return std::pow(1 - x.x1 * x.x1 - x.x2 * x.x2, 2); };
  const auto f = [lambda](Point2 x) {
    const double u11 = -4 + 12 * x.x1 * x.x1 + 4 * x.x2 * x.x2;
    const double u22 = -4 + 4 * x.x1 * x.x1 + 12 * x.x2 * x.x2;
    return p_of(lambda, u11, u22);
  };
  const auto res = right_inverse(curve, LambdaContext(lambda), GridFunction(curve, 41, f));
  CHECK(res.report.verified);
  double err = 0.0;
  for (double r : {0.0, 0.3, 0.6, 0.9}) {
    for (double t : {0.0, 1.0, 2.5, 4.0}) {
      const Point2 x{r * std::cos(t), r * std::sin(t)};
      err = std::max(err, std::abs(res.solution(x) - exact(x)));
    }
  }
  CHECK(err <= 1e-5);
}

TEST_CASE("right inverse refuses a rational rotation number") {
  const auto curve = BoundaryCurve::circle();
  CHECK_THROWS_AS(right_inverse(curve, LambdaContext(std::sqrt(0.5)), GridFunction(curve, 21, [](Point2) { return 1.0; })),
                  RationalRotationError);
}

TEST_CASE("right inverse on an ellipse") {
  Eigen::Matrix2d A;
  A << 1.5, 0.2, 0.2, 0.8;
  const auto curve = BoundaryCurve::ellipse(A, {0.1, -0.1});
  const auto res = right_inverse(curve, LambdaContext(0.47),
                                 GridFunction(curve, 41, [](Point2 x) { return std::cos(x.x1) + x.x2; }));
  CHECK(res.report.verified);
  CHECK(res.report.boundary_norm <= res.report.boundary_tol);
}
