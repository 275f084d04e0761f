#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "iwaves/errors.hpp"
#include "iwaves/geometry.hpp"
#include "oracles.hpp"

using namespace iwaves;
using std::numbers::pi;

namespace {

double circle_distance(double a, double b) {
  const double d = std::abs(a - b);
  return std::min(d, 1.0 - d);
}

// r = 1 + a cos(2 phi) + b sin(phi) in Fourier form: a two-lobed curve dented on one side.
BoundaryCurve dented(double a, double b) {
  return BoundaryCurve({0, 1 + a / 2, 0, a / 2}, {0, 0, b / 2, 0}, {b / 2, 0, -b / 2, 0}, {0, 1 - a / 2, 0, a / 2});
}

}  // namespace

TEST_CASE("load_boundary: circle, reversed circle, degenerate") {
  const auto c = load_boundary(R"({"cos1":[0,1],"sin1":[0,0],"cos2":[0,0],"sin2":[0,1],"resolution":512})");
  CHECK(c.signed_area() == doctest::Approx(pi).epsilon(1e-12));
  CHECK_FALSE(c.orientation_corrected());
  CHECK(c.resolution() == 512);

  const auto r = load_boundary(R"({"cos1":[0,1],"sin1":[0,0],"cos2":[0,0],"sin2":[0,-1],"resolution":512})");
  CHECK(r.orientation_corrected());
  CHECK(r.signed_area() == doctest::Approx(pi).epsilon(1e-12));

  CHECK_THROWS_AS(load_boundary(R"({"cos1":[0,0],"sin1":[0,0],"cos2":[0,0],"sin2":[0,0],"resolution":512})"),
                  DegenerateCurveError);
  CHECK_THROWS_AS(load_boundary(R"({"cos1":[0,1],"sin1":[0,0],"cos2":[0,0]})"), ParseError);
  CHECK_THROWS_AS(load_boundary(R"({"cos1":[0,1],"sin1":[0,0],"cos2":[0,0],"sin2":[0,1,2],"resolution":512})"),
                  InputError);
  CHECK_THROWS_AS(load_boundary("not json"), ParseError);
}

TEST_CASE("to_json round trip and point fitting") {
  const auto e = BoundaryCurve::rounded_square(0.08, 0.3);
  const auto back = load_boundary(e.to_json());
  for (double s : {0.0, 0.1, 0.37, 0.8}) {
    CHECK(back.point(s).x1 == doctest::Approx(e.point(s).x1).epsilon(1e-15));
    CHECK(back.point(s).x2 == doctest::Approx(e.point(s).x2).epsilon(1e-15));
  }
  const auto pts = e.polygon(256);
  const auto fit = BoundaryCurve::fit_points(pts, 8);
  for (double s : {0.0, 0.21, 0.5, 0.93}) {
    CHECK(std::abs(fit.point(s).x1 - e.point(s).x1) < 1e-12);
    CHECK(std::abs(fit.point(s).x2 - e.point(s).x2) < 1e-12);
  }
}

TEST_CASE("geometric queries on the unit circle") {
  const auto c = BoundaryCurve::circle();
  CHECK(c.diameter() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(c.contains({0.3, -0.2}));
  CHECK_FALSE(c.contains({1.1, 0.0}));
  CHECK(c.distance({0.5, 0.0}) == doctest::Approx(0.5).epsilon(1e-4));
  const auto d = c.difference(0.3 + 1e-9, 0.3);
  const auto x = c.derivative(0.3);
  CHECK(d.x1 == doctest::Approx(1e-9 * x.x1).epsilon(1e-6));
}

TEST_CASE("ell examples") {
  const LambdaContext half(0.5);
  CHECK(ell({0, 0}, half, Sign::plus) == 0.0);
  CHECK(ell({0, 0}, LambdaContext(0.9), Sign::minus) == 0.0);
  CHECK(ell({1, 0}, half, Sign::plus) == doctest::Approx(2.0));
  CHECK(ell({0, 1}, half, Sign::plus) == doctest::Approx(2.0 / std::sqrt(3.0)));
  CHECK(ell({0, 1}, half, Sign::minus) == doctest::Approx(2.0 / std::sqrt(3.0)));
  CHECK_THROWS_AS(LambdaContext(1.0), InputError);
  CHECK_THROWS_AS(LambdaContext(0.0), InputError);
}

TEST_CASE("critical points on the disk") {
  const auto c = BoundaryCurve::circle();
  const auto rep = critical_points(c, LambdaContext(0.5));
  REQUIRE(rep.is_simple);
  REQUIRE(rep.of(Sign::plus).size() == 2);
  // l+ is proportional to cos(phi - pi/6): max at phi = pi/6, min at phi = 7 pi / 6.
  std::vector<double> s;
  for (const auto& p : rep.of(Sign::plus)) {
    s.push_back(p.s);
    CHECK(std::abs(p.second_derivative) > 0.0);
  }
  std::sort(s.begin(), s.end());
  CHECK(s[0] == doctest::Approx(1.0 / 12).epsilon(1e-12));
  CHECK(s[1] == doctest::Approx(7.0 / 12).epsilon(1e-12));
  for (double l = 0.1; l < 0.95; l += 0.1) CHECK(critical_points(c, LambdaContext(l)).is_simple);
}

TEST_CASE("critical points of a two-lobed curve agree with dense sampling") {
  const auto curve = dented(0.4, 0.3);
  for (double l : {0.5, 0.95}) {
    const LambdaContext ctx(l);
    const auto rep = critical_points(curve, ctx);
    for (Sign sign : {Sign::plus, Sign::minus}) {
      // Oracle: sign changes of the centered difference of l along the curve.
      const int n = 100'000;
      std::vector<double> d(n);
      for (int i = 0; i < n; ++i) {
        const double s = (i + 0.5) / n, h = 0.25 / n;
        d[i] = ell(curve.point(s + h), ctx, sign) - ell(curve.point(s - h), ctx, sign);
      }
      CHECK(static_cast<int>(rep.of(sign).size()) == oracle::periodic_sign_changes(d));
    }
    if (l == 0.95) {
      CHECK_FALSE(rep.is_simple);
      CHECK(rep.of(Sign::plus).size() == 4);
    }
  }
}

TEST_CASE("involutions and chess billiard on the disk") {
  const ChessBilliardMap map(BoundaryCurve::circle(), LambdaContext(0.5));
  CHECK(circle_distance(map.involution_exact(Sign::plus, 0.0), 1.0 / 6) < 1e-12);
  CHECK(circle_distance(map.involution(Sign::plus, 0.0), 1.0 / 6) < 1e-10);
  CHECK(circle_distance(map.involution(Sign::minus, 0.0), 5.0 / 6) < 1e-10);
  for (const auto& p : map.report().of(Sign::plus)) {
    CHECK(circle_distance(map.involution(Sign::plus, p.s), p.s) < 1e-10);
  }
  CHECK(circle_distance(map.chess_billiard(0.0), 1.0 / 3) < 1e-10);

  const ChessBilliardMap quarter(BoundaryCurve::circle(), LambdaContext(std::sqrt(0.5)));
  for (double s : {0.0, 0.13, 0.5, 0.77}) {
    CHECK(circle_distance(quarter.chess_billiard(s), s + 0.5) < 1e-10);
  }
  CHECK_THROWS_AS(ChessBilliardMap(dented(0.4, 0.3), LambdaContext(0.95)), NotSimpleError);
}

TEST_CASE("disk oracle b(phi) = phi + 4 alpha") {
  for (double l : {0.2, 0.5, 0.8}) {
    const ChessBilliardMap map(BoundaryCurve::circle(), LambdaContext(l));
    const double shift = 4 * std::asin(l) / (2 * pi);
    double worst = 0.0;
    for (int i = 0; i < 10'000; ++i) {
      const double s = i / 10'000.0;
      worst = std::max(worst, circle_distance(map.chess_billiard(s), std::fmod(s + shift, 1.0)));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("involution, level preservation and monotone lift on a non-circular curve") {
  const auto curve = BoundaryCurve::rounded_square(0.08, 0.2);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0), lam(0.15, 0.85);
  std::vector<ChessBilliardMap> maps;
  for (int i = 0; i < 5; ++i) maps.emplace_back(curve, LambdaContext(lam(rng)));

  double inv = 0.0, level = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto& m = maps[i % maps.size()];
    const Sign sign = i % 2 ? Sign::plus : Sign::minus;
    const double s = unit(rng);
    const double g = m.involution(sign, s);
    inv = std::max(inv, circle_distance(m.involution(sign, g), s));
    const double scale = std::abs(m.context().inv_lambda()) + m.context().inv_sqrt_complement();
    level = std::max(level, std::abs(ell(curve.point(g), m.context(), sign) -
                                     ell(curve.point(s), m.context(), sign)) / scale);
  }
  CHECK(inv <= 1e-9);
  CHECK(level <= 1e-9);

  for (const auto& m : maps) {
    double prev = m.lift(0.0);
    bool increasing = true, periodic = true;
    for (int i = 1; i <= 10'000; ++i) {
      const double s = i / 10'000.0;
      const double b = m.lift(s);
      increasing = increasing && b > prev;
      prev = b;
    }
    // The periodic part repeats exactly; the lift itself up to rounding of s + 1.
    for (int i = 0; i < 16384; i += 37) {
      const double s = i / 16384.0;
      periodic = periodic && m.displacement(std::fmod(s + 1.0, 1.0)) == m.displacement(s) &&
                 std::abs(m.lift(s + 1.0) - m.lift(s) - 1.0) <= 4e-16;
    }
    CHECK(increasing);
    CHECK(periodic);
    for (double s : {0.1, 0.45, 0.9}) CHECK(circle_distance(m.inverse(m.chess_billiard(s)), s) < 1e-10);
  }
}
