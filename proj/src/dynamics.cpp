#include "iwaves/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "iwaves/errors.hpp"

namespace iwaves {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double frac(double s) {
  double f = s - std::floor(s);
  return f >= 1.0 ? 0.0 : f;
}

// Smooth bump weight used for the weighted Birkhoff averages.
double bump_weight(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return std::exp(-1.0 / (t * (1.0 - t)));
}

// Orbit stored as integer winding plus fractional position, so the lift
// b^n(x0) = wind[n] + pos[n] keeps full precision in pos.
struct Orbit {
  std::vector<double> pos;
  std::vector<long> wind;

  double lift_difference(std::size_t later, std::size_t earlier) const {
    return static_cast<double>(wind[later] - wind[earlier]) + (pos[later] - pos[earlier]);
  }
};

Orbit follow(const CircleMap& map, double x0, long steps, double* weighted_mean) {
  Orbit orbit;
  orbit.pos.resize(static_cast<std::size_t>(steps) + 1);
  orbit.wind.resize(static_cast<std::size_t>(steps) + 1);
  const double start = frac(x0);
  orbit.pos[0] = start;
  orbit.wind[0] = static_cast<long>(std::floor(x0));
  double num = 0.0, den = 0.0;
  for (long n = 0; n < steps; ++n) {
    const double d = map.displacement(orbit.pos[n]);
    const double w = bump_weight((n + 0.5) / static_cast<double>(steps));
    num += w * d;
    den += w;
    const double y = orbit.pos[n] + d;
    const double fl = std::floor(y);
    orbit.pos[n + 1] = y - fl;
    orbit.wind[n + 1] = orbit.wind[n] + static_cast<long>(fl);
    if (orbit.pos[n + 1] >= 1.0) {
      orbit.pos[n + 1] = 0.0;
      orbit.wind[n + 1] += 1;
    }
  }
  if (weighted_mean) *weighted_mean = den > 0.0 ? num / den : 0.0;
  return orbit;
}

// b^q(s) - s - p along the lift.
double periodic_defect(const CircleMap& map, double s, long p, long q) {
  double y = s;
  for (long i = 0; i < q; ++i) y += map.displacement(frac(y));
  return y - s - static_cast<double>(p);
}

struct SmallFraction {
  long p;
  long q;
};

// Convergents of x in [0, 1] with denominators up to q_max.
std::vector<SmallFraction> small_convergents(double x, long q_max) {
  std::vector<SmallFraction> out;
  long p_prev = 1, q_prev = 0;
  long a = static_cast<long>(std::floor(x));
  long p_cur = a, q_cur = 1;
  double y = x - a;
  out.push_back({p_cur, q_cur});
  for (int depth = 0; depth < 60 && y > 1e-15; ++depth) {
    const double inv = 1.0 / y;
    if (inv > 4.0 * static_cast<double>(q_max) + 4.0) {
      // The next denominator exceeds the bound; intermediate fractions are
      // never closer than this one.
      break;
    }
    a = static_cast<long>(std::floor(inv));
    y = inv - a;
    const long p_next = a * p_cur + p_prev;
    const long q_next = a * q_cur + q_prev;
    if (q_next > q_max) break;
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
    out.push_back({p_cur, q_cur});
  }
  return out;
}

// Root of the periodic defect between two circle points, on the forward arc
// from a to b.
std::optional<double> bisect_defect(const CircleMap& map, double a, double b, long p, long q) {
  double lo = a;
  double hi = a + frac(b - a);
  if (hi == lo) hi = lo + 1.0;
  double flo = periodic_defect(map, lo, p, q);
  double fhi = periodic_defect(map, hi, p, q);
  if (flo == 0.0) return frac(lo);
  if (fhi == 0.0) return frac(hi);
  if ((flo > 0.0) == (fhi > 0.0)) return std::nullopt;
  for (int it = 0; it < 80 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = periodic_defect(map, mid, p, q);
    if (fm == 0.0) return frac(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return frac(std::abs(flo) < std::abs(fhi) ? lo : hi);
}

constexpr double kLockTolerance = 1e-10;

// Looks for s* with b^q(s*) = s* + p; returns it when the defect there is
// below the lock tolerance.
std::optional<std::pair<double, double>> find_periodic_point(const CircleMap& map,
                                                             const Orbit& orbit, long p, long q) {
  auto verified = [&](double s) -> std::optional<std::pair<double, double>> {
    const double defect = std::abs(periodic_defect(map, s, p, q));
    if (defect <= kLockTolerance) return std::make_pair(s, defect);
    return std::nullopt;
  };

  const std::size_t M = orbit.pos.size() - 1;
  const auto uq = static_cast<std::size_t>(q);
  if (uq < M) {
    const std::size_t tail = std::min<std::size_t>(M - uq, 4096);
    const std::size_t first = M - uq - tail;
    double best = std::numeric_limits<double>::max();
    std::size_t best_n = first;
    std::optional<std::size_t> prev_n;
    double prev_f = 0.0;
    for (std::size_t n = first; n < M - uq + 1 && n + uq <= M; ++n) {
      const double f = orbit.lift_difference(n + uq, n) - static_cast<double>(p);
      if (std::abs(f) < best) {
        best = std::abs(f);
        best_n = n;
      }
      if (prev_n && (f > 0.0) != (prev_f > 0.0)) {
        if (auto root = bisect_defect(map, orbit.pos[*prev_n], orbit.pos[n], p, q)) {
          if (auto v = verified(*root)) return v;
        }
      }
      prev_n = n;
      prev_f = f;
    }
    if (best <= kLockTolerance) {
      if (auto v = verified(orbit.pos[best_n])) return v;
    }
  }

  const int grid = q <= 64 ? 128 : 64;
  std::vector<double> values(grid);
  for (int j = 0; j < grid; ++j) values[j] = periodic_defect(map, static_cast<double>(j) / grid, p, q);
  for (int j = 0; j < grid; ++j) {
    const double a = values[j];
    const double b = values[(j + 1) % grid];
    if (std::abs(a) <= kLockTolerance) {
      if (auto v = verified(static_cast<double>(j) / grid)) return v;
    }
    if ((a > 0.0) != (b > 0.0)) {
      const double s0 = static_cast<double>(j) / grid;
      const double s1 = static_cast<double>(j + 1) / grid;
      if (auto root = bisect_defect(map, s0, s1, p, q)) {
        if (auto v = verified(*root)) return v;
      }
    }
  }
  return std::nullopt;
}

template <class Real>
BigInt to_big(const Real& x) {
  if constexpr (std::is_same_v<Real, double>) {
    return BigInt(x);
  } else {
    return x.template convert_to<BigInt>();
  }
}

template <class Real>
Real from_big(const BigInt& x) {
  return x.template convert_to<Real>();
}

template <class Real>
ContinuedFraction expand(const Real& alpha, int depth, int cap) {
  using std::abs;
  using std::floor;
  ContinuedFraction cf;
  if (depth > cap) {
    depth = cap;
    cf.precision_exhausted = true;
  }
  if (depth < 1) throw InputError("continued_fraction: depth must be positive");
  const Real eps = std::numeric_limits<Real>::epsilon();
  const double eps_d = static_cast<double>(eps);
  Real head = floor(alpha);
  cf.a0 = to_big(head);
  cf.p.push_back(cf.a0);
  cf.q.push_back(BigInt(1));
  BigInt p_prev = 1, q_prev = 0;
  Real y = alpha - head;
  for (int n = 1; n <= depth; ++n) {
    const BigInt& pn = cf.p.back();
    const BigInt& qn = cf.q.back();
    const double qd = qn.template convert_to<double>();
    const Real err = abs(alpha - from_big<Real>(pn) / from_big<Real>(qn));
    if (y == 0 || err <= 4 * eps * abs(alpha)) {
      if (qd * qd * eps_d <= 1e-3) {
        cf.rational = true;
      } else {
        cf.precision_exhausted = true;
      }
      break;
    }
    if (qd * qd * eps_d > 1e-2) {
      // The Gauss map has amplified rounding beyond what the quotients
      // can tolerate.
      cf.precision_exhausted = true;
      break;
    }
    const Real inv = 1 / y;
    const Real a = floor(inv);
    y = inv - a;
    const BigInt ab = to_big(a);
    const BigInt p_next = ab * pn + p_prev;
    const BigInt q_next = ab * qn + q_prev;
    p_prev = pn;
    q_prev = qn;
    cf.quotients.push_back(ab);
    cf.p.push_back(p_next);
    cf.q.push_back(q_next);
  }
  for (std::size_t n = 0; n < cf.quotients.size(); ++n) {
    // quotients[n] is a_{n+1}; its partner denominator is q_n.
    const BigInt& qn = cf.q[n];
    const BigInt& next = cf.quotients[n];
    if (qn >= 2) {
      const double score = std::log(next.convert_to<double>()) / std::log(qn.convert_to<double>());
      cf.diophantine_score = std::max(cf.diophantine_score, score);
    }
    if (qn >= 10 && next > qn * qn) cf.liouville_suspect = true;
  }
  return cf;
}

}  // namespace

RotationNumberEstimate rotation_number(const CircleMap& map, long M, long q_max, double x0) {
  if (M < 1000) throw InputError("rotation_number: iteration budget must be at least 1000");
  double weighted = 0.0;
  const Orbit orbit = follow(map, x0, M, &weighted);
  const double plain = orbit.lift_difference(static_cast<std::size_t>(M), 0) / static_cast<double>(M);
  const double bound = 1.0 / static_cast<double>(M);

  RotationNumberEstimate est;
  est.iterations = M;
  const bool weighted_ok = std::abs(weighted - plain) <= bound;
  est.value = weighted_ok ? weighted : plain;
  est.error_bound = (weighted_ok ? std::abs(weighted - plain) : 0.0) + bound;

  for (const auto& [p, q] : small_convergents(est.value, q_max)) {
    if (q < 1) continue;
    const double candidate = static_cast<double>(p) / static_cast<double>(q);
    if (std::abs(candidate - plain) > bound + 1e-15) continue;
    if (auto hit = find_periodic_point(map, orbit, p, q)) {
      est.method = RotationMethod::periodic_orbit_locked;
      long pp = p;
      if (pp >= q) pp -= q;  // value in [0, 1)
      est.p = pp;
      est.q = q;
      est.value = static_cast<double>(pp) / static_cast<double>(q);
      est.lock_residual = hit->second;
      est.error_bound = std::max(hit->second / static_cast<double>(q),
                                 std::numeric_limits<double>::epsilon());
      return est;
    }
  }
  if (est.value >= 1.0) est.value -= 1.0;
  return est;
}

std::vector<RotationCurvePoint> rotation_curve(const BoundaryCurve& curve,
                                               const std::vector<double>& lambdas, long M,
                                               long q_max) {
  std::vector<RotationCurvePoint> out;
  out.reserve(lambdas.size());
  for (double lambda : lambdas) {
    RotationCurvePoint point;
    point.lambda = lambda;
    const LambdaContext ctx(lambda);
    if (critical_points(curve, ctx).is_simple) {
      const ChessBilliardMap map(curve, ctx);
      point.simple = true;
      point.estimate = rotation_number(map, M, q_max);
    }
    out.push_back(point);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
  return out;
}

namespace {

struct RotationSample {
  double value;
  bool exact_hit;  // locked onto the target itself
};

double search_lambda(const std::function<RotationSample(double)>& eval, double target, double tol,
                     double lo, double hi, bool run_to_resolution) {
  auto bisect = [&](double a, double b, double fa) -> std::optional<double> {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      const RotationSample s = eval(mid);
      if (s.exact_hit || s.value == target) return mid;
      if (!run_to_resolution && std::abs(s.value - target) <= tol) return mid;
      if (b - a <= 4.0 * std::numeric_limits<double>::epsilon()) {
        if (std::abs(s.value - target) <= tol) return mid;
        return std::nullopt;
      }
      if ((s.value < target) == (fa < target)) {
        a = mid;
        fa = s.value;
      } else {
        b = mid;
      }
    }
    return std::nullopt;
  };

  const RotationSample s_lo = eval(lo);
  const RotationSample s_hi = eval(hi);
  if (s_lo.exact_hit || std::abs(s_lo.value - target) <= tol * 1e-3) return lo;
  if (s_hi.exact_hit || std::abs(s_hi.value - target) <= tol * 1e-3) return hi;

  // Monotone bisection, abandoned as soon as a midpoint leaves the bracket.
  if (s_lo.value < target && target < s_hi.value) {
    double a = lo, b = hi, fa = s_lo.value, fb = s_hi.value;
    bool monotone = true;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      const RotationSample s = eval(mid);
      if (s.exact_hit || s.value == target) return mid;
      if (s.value < fa || s.value > fb) {
        monotone = false;
        break;
      }
      if (!run_to_resolution && std::abs(s.value - target) <= tol) return mid;
      if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid))) {
        if (std::abs(s.value - target) <= tol) return mid;
        break;
      }
      if (s.value < target) {
        a = mid;
        fa = s.value;
      } else {
        b = mid;
        fb = s.value;
      }
    }
    if (monotone) {
      throw TargetUnreachableError("rotation number target not attained to tolerance");
    }
  }

  // Grid scan for any bracket, then local bisection.
  constexpr int kScan = 256;
  double prev_x = lo;
  double prev_v = s_lo.value;
  for (int i = 1; i <= kScan; ++i) {
    const double x = lo + (hi - lo) * i / kScan;
    const RotationSample s = eval(x);
    if (s.exact_hit || std::abs(s.value - target) <= tol * 1e-3) return x;
    if ((prev_v - target) * (s.value - target) < 0.0) {
      if (auto root = bisect(prev_x, x, prev_v)) return *root;
    }
    prev_x = x;
    prev_v = s.value;
  }
  throw TargetUnreachableError("rotation number target is not attained on the scanned range");
}

}  // namespace

double find_lambda_for_rotation(const std::function<double(double)>& rotation, double target,
                                double tol, double lo, double hi) {
  if (!(target > 0.0 && target < 1.0)) throw InputError("target rotation must lie in (0, 1)");
  return search_lambda([&](double l) { return RotationSample{rotation(l), false}; }, target, tol,
                       lo, hi, true);
}

double find_lambda_for_rotation(const BoundaryCurve& curve, double target, double tol, long M) {
  if (!(target > 0.0 && target < 1.0)) throw InputError("target rotation must lie in (0, 1)");
  auto eval = [&](double lambda) {
    const ChessBilliardMap map(curve, LambdaContext(lambda));
    const auto est = rotation_number(map, M, 1000);
    const bool hit = est.locked() && std::abs(est.value - target) <= 1e-14;
    return RotationSample{est.value, hit};
  };
  return search_lambda(eval, target, tol, 1e-3, 1.0 - 1e-3, false);
}

ContinuedFraction continued_fraction(double alpha, int depth) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("continued_fraction: alpha must lie in (0, 1)");
  return expand<double>(alpha, depth, 40);
}

ContinuedFraction continued_fraction(const Float50& alpha, int depth) {
  if (!(alpha > 0 && alpha < 1)) throw InputError("continued_fraction: alpha must lie in (0, 1)");
  return expand<Float50>(alpha, depth, 120);
}

Float50 liouville_partial_sum(int terms) {
  if (terms < 1 || terms > 6) throw InputError("liouville_partial_sum: terms must be in 1..6");
  Float50 sum = 0;
  long factorial = 1;
  for (int n = 1; n <= terms; ++n) {
    factorial *= n;
    sum += boost::multiprecision::ldexp(Float50(1), -static_cast<int>(factorial));
  }
  return sum;
}

CircleFunction::CircleFunction(int degree, FourierSeries periodic)
    : degree_(degree), periodic_(std::move(periodic)) {
  for (const auto& c : periodic_.coefficients()) amplitude_bound_ += std::abs(c);
}

double CircleFunction::operator()(double s) const { return degree_ * s + periodic_.value(s); }

double CircleFunction::derivative(double s) const {
  return degree_ + periodic_.derivative(s, 1);
}

double CircleFunction::inverse(double theta) const {
  if (degree_ != 1) throw InputError("CircleFunction::inverse needs a degree-one function");
  auto f = [&](double s) { return (*this)(s) - theta; };
  double lo = theta - amplitude_bound_ - 1e-9;
  double hi = theta + amplitude_bound_ + 1e-9;
  double flo = f(lo), fhi = f(hi);
  if (flo > 0.0 || fhi < 0.0) throw ConjugacyError("circle function inverse: no bracket");
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  std::uintmax_t iters = 200;
  auto stop = [](double a, double b) { return std::abs(b - a) <= 1e-15 * std::max(1.0, std::abs(a)); };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, stop, iters);
  return 0.5 * (a + b);
}

bool CircleFunction::is_monotone(int n) const {
  double prev = (*this)(0.0);
  for (int i = 1; i <= n; ++i) {
    const double v = (*this)(static_cast<double>(i) / n);
    if (!(v > prev)) return false;
    prev = v;
  }
  return true;
}

ConjugacyResult conjugacy(const CircleMap& map, long orbit_length, int modes, double tol,
                          double s0) {
  if (orbit_length < 1000) throw InputError("conjugacy: orbit too short");
  if (modes < 0) throw InputError("conjugacy: negative mode count");
  ConjugacyResult result;
  result.rotation = rotation_number(map, orbit_length, 10'000, s0);
  if (result.rotation.locked()) {
    throw RationalRotationError("rotation number locks to " + std::to_string(result.rotation.p) +
                                "/" + std::to_string(result.rotation.q));
  }

  // Weighted Fourier coefficients of the invariant measure.
  std::vector<std::complex<double>> mu(static_cast<std::size_t>(modes) + 1, 0.0);
  double total_weight = 0.0;
  double x = frac(s0);
  for (long n = 0; n < orbit_length; ++n) {
    const double w = bump_weight((n + 0.5) / static_cast<double>(orbit_length));
    total_weight += w;
    if (w > 0.0) {
      const auto step = std::polar(1.0, -kTwoPi * x);
      std::complex<double> power = 1.0;
      for (int k = 1; k <= modes; ++k) {
        power = (k % 32 == 0) ? std::polar(1.0, -kTwoPi * std::fmod(k * x, 1.0)) : power * step;
        mu[k] += w * power;
      }
    }
    x = frac(x + map.displacement(x));
  }
  FourierSeries periodic(modes);
  std::complex<double> constant = 0.0;
  for (int k = 1; k <= modes; ++k) {
    const auto c = (mu[k] / total_weight) / std::complex<double>(0.0, kTwoPi * k);
    periodic.set_coefficient(k, c);
    periodic.set_coefficient(-k, std::conj(c));
    constant -= c + std::conj(c);
  }
  periodic.set_coefficient(0, constant);
  result.psi = CircleFunction(1, std::move(periodic));

  constexpr int kGrid = 1024;
  double residual = 0.0;
  const double r = result.rotation.value;
  for (int j = 0; j < kGrid; ++j) {
    const double s = static_cast<double>(j) / kGrid;
    const double bs = s + map.displacement(s);
    residual = std::max(residual, std::abs(result.psi(bs) - result.psi(s) - r));
  }
  result.residual = residual;
  if (residual > tol) {
    throw ConjugacyError("conjugacy residual " + std::to_string(residual) +
                         " exceeds tolerance " + std::to_string(tol));
  }
  return result;
}

}  // namespace iwaves
