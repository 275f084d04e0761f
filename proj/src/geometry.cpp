#include "iwaves/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>
#include <json.hpp>

#include "iwaves/errors.hpp"

namespace iwaves {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double frac(double s) {
  double f = s - std::floor(s);
  return f >= 1.0 ? 0.0 : f;
}

// Bracketed root of f on [lo, hi]; returns the endpoint with the smaller
// residual when roundoff has destroyed the sign change.
template <class F>
double bracketed_root(F&& f, double lo, double hi, double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) return std::abs(flo) < std::abs(fhi) ? lo : hi;
  std::uintmax_t max_iter = 200;
  auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, stop, max_iter);
  return 0.5 * (a + b);
}

void validate_lengths(const std::vector<double>& c1, const std::vector<double>& s1,
                      const std::vector<double>& c2, const std::vector<double>& s2) {
  if (c1.empty() || c1.size() != s1.size() || c1.size() != c2.size() || c1.size() != s2.size()) {
    throw ParseError("boundary series lengths for x1 and x2 must match and be non-empty");
  }
  if (s1[0] != 0.0 || s2[0] != 0.0) {
    throw ParseError("sin coefficient arrays must start with a zero constant term");
  }
  for (const auto* v : {&c1, &s1, &c2, &s2}) {
    for (double c : *v) {
      if (!std::isfinite(c)) throw ParseError("boundary coefficients must be finite");
    }
  }
}

}  // namespace

BoundaryCurve::BoundaryCurve(std::vector<double> cos1, std::vector<double> sin1,
                             std::vector<double> cos2, std::vector<double> sin2, int resolution)
    : cos1_(std::move(cos1)),
      sin1_(std::move(sin1)),
      cos2_(std::move(cos2)),
      sin2_(std::move(sin2)),
      resolution_(resolution) {
  validate_lengths(cos1_, sin1_, cos2_, sin2_);
  if (resolution_ < 256) throw InputError("boundary resolution must be at least 256");

  double coeff_scale = 0.0;
  for (std::size_t j = 1; j < cos1_.size(); ++j) {
    coeff_scale = std::max({coeff_scale, std::abs(cos1_[j]), std::abs(sin1_[j]),
                            std::abs(cos2_[j]), std::abs(sin2_[j])});
  }
  const double speed_floor = 1e-10 * kTwoPi * coeff_scale;
  for (int i = 0; i < resolution_; ++i) {
    const Point2 d = derivative(static_cast<double>(i) / resolution_, 1);
    const double speed = std::hypot(d.x1, d.x2);
    if (!(speed > speed_floor) || speed == 0.0) {
      throw DegenerateCurveError("boundary curve has a zero-speed point near s = " +
                                 std::to_string(static_cast<double>(i) / resolution_));
    }
  }
  if (signed_area() < 0.0) {
    for (auto& c : sin1_) c = -c;
    for (auto& c : sin2_) c = -c;
    orientation_corrected_ = true;
  }
  polygon_ = polygon(std::max(resolution_, 2048));
}

BoundaryCurve BoundaryCurve::circle(double radius, Point2 center, int resolution) {
  return BoundaryCurve({center.x1, radius}, {0.0, 0.0}, {center.x2, 0.0}, {0.0, radius},
                       resolution);
}

BoundaryCurve BoundaryCurve::ellipse(const Eigen::Matrix2d& A, Point2 v, int resolution) {
  return BoundaryCurve({v.x1, A(0, 0)}, {0.0, A(0, 1)}, {v.x2, A(1, 0)}, {0.0, A(1, 1)},
                       resolution);
}

BoundaryCurve BoundaryCurve::rounded_square(double eta, double tilt, int resolution) {
  const double c = std::cos(tilt), s = std::sin(tilt);
  return BoundaryCurve({0.0, c, 0.0, -eta * c}, {0.0, -s, 0.0, -eta * s},
                       {0.0, s, 0.0, -eta * s}, {0.0, c, 0.0, eta * c}, resolution);
}

BoundaryCurve BoundaryCurve::fit_points(std::span<const Point2> points, int harmonics,
                                        int resolution) {
  std::vector<Point2> pts(points.begin(), points.end());
  if (pts.size() < 3) throw ParseError("need at least three boundary points");
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max({scale, std::abs(p.x1), std::abs(p.x2)});
  const auto gap = [](Point2 a, Point2 b) { return std::hypot(a.x1 - b.x1, a.x2 - b.x2); };
  if (gap(pts.front(), pts.back()) <= 1e-12 * std::max(scale, 1.0)) pts.pop_back();
  std::vector<double> spacing;
  for (std::size_t i = 1; i < pts.size(); ++i) spacing.push_back(gap(pts[i - 1], pts[i]));
  std::nth_element(spacing.begin(), spacing.begin() + spacing.size() / 2, spacing.end());
  const double median = spacing[spacing.size() / 2];
  if (gap(pts.back(), pts.front()) > 10.0 * median) {
    throw InputError("non-closed boundary: endpoint gap is far larger than the point spacing");
  }
  const int n = static_cast<int>(pts.size());
  if (n < 2 * harmonics + 1) throw InputError("too few points for the requested harmonics");

  Eigen::MatrixXd basis(n, 2 * harmonics + 1);
  Eigen::MatrixXd rhs(n, 2);
  for (int i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / n;
    basis(i, 0) = 1.0;
    for (int j = 1; j <= harmonics; ++j) {
      basis(i, 2 * j - 1) = std::cos(kTwoPi * j * s);
      basis(i, 2 * j) = std::sin(kTwoPi * j * s);
    }
    rhs(i, 0) = pts[i].x1;
    rhs(i, 1) = pts[i].x2;
  }
  const Eigen::MatrixXd sol = basis.colPivHouseholderQr().solve(rhs);
  std::vector<double> c1(harmonics + 1), s1(harmonics + 1, 0.0), c2(harmonics + 1),
      s2(harmonics + 1, 0.0);
  c1[0] = sol(0, 0);
  c2[0] = sol(0, 1);
  for (int j = 1; j <= harmonics; ++j) {
    c1[j] = sol(2 * j - 1, 0);
    s1[j] = sol(2 * j, 0);
    c2[j] = sol(2 * j - 1, 1);
    s2[j] = sol(2 * j, 1);
  }
  return BoundaryCurve(std::move(c1), std::move(s1), std::move(c2), std::move(s2), resolution);
}

Point2 BoundaryCurve::point(double s) const { return derivative(s, 0); }

Point2 BoundaryCurve::derivative(double s, int order) const {
  Point2 out{order == 0 ? cos1_[0] : 0.0, order == 0 ? cos2_[0] : 0.0};
  const double shift = order * 0.5 * std::numbers::pi;
  for (std::size_t j = 1; j < cos1_.size(); ++j) {
    const double w = kTwoPi * static_cast<double>(j);
    const double phase = kTwoPi * std::fmod(static_cast<double>(j) * s, 1.0) + shift;
    const double c = std::cos(phase);
    const double sn = std::sin(phase);
    const double scale = std::pow(w, order);
    out.x1 += scale * (cos1_[j] * c + sin1_[j] * sn);
    out.x2 += scale * (cos2_[j] * c + sin2_[j] * sn);
  }
  return out;
}

Point2 BoundaryCurve::difference(double t, double s) const {
  Point2 out{};
  const double d = t - s;
  for (std::size_t j = 1; j < cos1_.size(); ++j) {
    const double jj = static_cast<double>(j);
    const double half_sum = std::numbers::pi * std::fmod(jj * (t + s), 2.0);
    const double half_diff = std::numbers::pi * jj * d;
    const double sd = std::sin(half_diff);
    const double dc = -2.0 * std::sin(half_sum) * sd;  // cos(wt) - cos(ws)
    const double ds = 2.0 * std::cos(half_sum) * sd;   // sin(wt) - sin(ws)
    out.x1 += cos1_[j] * dc + sin1_[j] * ds;
    out.x2 += cos2_[j] * dc + sin2_[j] * ds;
  }
  return out;
}

double BoundaryCurve::signed_area() const {
  const int n = std::max(resolution_, 4 * harmonics() + 4);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / n;
    const Point2 x = point(s);
    const Point2 dx = derivative(s, 1);
    acc += 0.5 * (x.x1 * dx.x2 - x.x2 * dx.x1);
  }
  return acc / n;
}

double BoundaryCurve::diameter() const {
  double d = 0.0;
  const auto& poly = polygon_;
  const std::size_t stride = std::max<std::size_t>(1, poly.size() / 512);
  for (std::size_t i = 0; i < poly.size(); i += stride) {
    for (std::size_t j = i + stride; j < poly.size(); j += stride) {
      d = std::max(d, std::hypot(poly[i].x1 - poly[j].x1, poly[i].x2 - poly[j].x2));
    }
  }
  return d;
}

std::array<double, 4> BoundaryCurve::bounding_box() const {
  std::array<double, 4> box{std::numeric_limits<double>::max(), -std::numeric_limits<double>::max(),
                            std::numeric_limits<double>::max(), -std::numeric_limits<double>::max()};
  for (const auto& p : polygon_) {
    box[0] = std::min(box[0], p.x1);
    box[1] = std::max(box[1], p.x1);
    box[2] = std::min(box[2], p.x2);
    box[3] = std::max(box[3], p.x2);
  }
  return box;
}

std::vector<Point2> BoundaryCurve::polygon(int n) const {
  std::vector<Point2> out(n);
  for (int i = 0; i < n; ++i) out[i] = point(static_cast<double>(i) / n);
  return out;
}

bool BoundaryCurve::contains(Point2 p) const {
  bool inside = false;
  const std::size_t n = polygon_.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = polygon_[i];
    const Point2& b = polygon_[j];
    if ((a.x2 > p.x2) != (b.x2 > p.x2)) {
      const double x = a.x1 + (p.x2 - a.x2) * (b.x1 - a.x1) / (b.x2 - a.x2);
      if (p.x1 < x) inside = !inside;
    }
  }
  return inside;
}

double BoundaryCurve::distance(Point2 p) const {
  double best = std::numeric_limits<double>::max();
  const std::size_t n = polygon_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = polygon_[i];
    const Point2& b = polygon_[(i + 1) % n];
    const double ex = b.x1 - a.x1, ey = b.x2 - a.x2;
    const double len2 = ex * ex + ey * ey;
    double t = len2 > 0.0 ? ((p.x1 - a.x1) * ex + (p.x2 - a.x2) * ey) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, std::hypot(p.x1 - a.x1 - t * ex, p.x2 - a.x2 - t * ey));
  }
  return best;
}

std::string BoundaryCurve::to_json() const {
  nlohmann::json j;
  j["cos1"] = cos1_;
  j["sin1"] = sin1_;
  j["cos2"] = cos2_;
  j["sin2"] = sin2_;
  j["resolution"] = resolution_;
  return j.dump();
}

BoundaryCurve load_boundary(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed boundary file: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("boundary file must hold a JSON object");
  try {
    const int resolution = j.value("resolution", 1024);
    if (j.contains("points")) {
      std::vector<Point2> pts;
      for (const auto& p : j.at("points")) {
        if (!p.is_array() || p.size() != 2) throw ParseError("points must be [x1, x2] pairs");
        pts.push_back({p[0].get<double>(), p[1].get<double>()});
      }
      const int harmonics = j.value("harmonics", 32);
      return BoundaryCurve::fit_points(pts, harmonics, resolution);
    }
    for (const char* key : {"cos1", "sin1", "cos2", "sin2"}) {
      if (!j.contains(key) || !j.at(key).is_array()) {
        throw ParseError(std::string("boundary file is missing array field '") + key + "'");
      }
    }
    return BoundaryCurve(j.at("cos1").get<std::vector<double>>(),
                         j.at("sin1").get<std::vector<double>>(),
                         j.at("cos2").get<std::vector<double>>(),
                         j.at("sin2").get<std::vector<double>>(), resolution);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed boundary file: ") + e.what());
  }
}

BoundaryCurve load_boundary_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open boundary file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_boundary(buffer.str());
}

LambdaContext::LambdaContext(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw InputError("lambda must lie in (0, 1)");
  inv_lambda_ = 1.0 / lambda;
  inv_sqrt_complement_ = 1.0 / std::sqrt((1.0 - lambda) * (1.0 + lambda));
}

double ell(Point2 x, const LambdaContext& ctx, Sign sign) {
  const double s = sign == Sign::plus ? 1.0 : -1.0;
  return s * x.x1 * ctx.inv_lambda() + x.x2 * ctx.inv_sqrt_complement();
}

double ell_along(const BoundaryCurve& curve, const LambdaContext& ctx, Sign sign, double s,
                 int order) {
  const Point2 d = curve.derivative(s, order);
  const double c1 = (sign == Sign::plus ? 1.0 : -1.0) * ctx.inv_lambda();
  return c1 * d.x1 + ctx.inv_sqrt_complement() * d.x2;
}

CriticalPointReport critical_points(const BoundaryCurve& curve, const LambdaContext& ctx) {
  CriticalPointReport report;
  const int n = curve.resolution();
  bool simple = true;
  double min_margin = std::numeric_limits<double>::max();
  for (Sign sign : {Sign::plus, Sign::minus}) {
    auto slope = [&](double s) { return ell_along(curve, ctx, sign, s, 1); };
    std::vector<double> g(n + 1), h(n + 1);
    double scale = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double s = static_cast<double>(i) / n;
      g[i] = slope(s);
      h[i] = ell_along(curve, ctx, sign, s, 2);
      scale = std::max(scale, std::abs(h[i]));
    }
    g[n] = g[0];
    h[n] = h[0];
    const double tol = 1e-8 * scale;
    report.degeneracy_tolerance[index_of(sign)] = tol;
    auto& found = report.points[index_of(sign)];
    for (int i = 0; i < n; ++i) {
      const double a = static_cast<double>(i) / n;
      const double b = static_cast<double>(i + 1) / n;
      const bool pos_a = g[i] >= 0.0;
      const bool pos_b = g[i + 1] >= 0.0;
      if (pos_a != pos_b) {
        const double root = bracketed_root(slope, a, b, 1e-13);
        found.push_back({frac(root), ell_along(curve, ctx, sign, root, 0),
                         ell_along(curve, ctx, sign, root, 2)});
        continue;
      }
      if ((h[i] >= 0.0) != (h[i + 1] >= 0.0)) {
        // g has an interior extremum; look for a hidden pair of roots.
        constexpr int kSub = 64;
        for (int k = 1; k < kSub; ++k) {
          const double s = a + (b - a) * k / kSub;
          if ((slope(s) >= 0.0) != pos_a) {
            throw RefinementError("two critical points of l" +
                                  std::string(sign == Sign::plus ? "+" : "-") +
                                  " fall inside one grid cell near s = " + std::to_string(a) +
                                  "; increase the boundary resolution");
          }
        }
      }
    }
    if (found.size() != 2) simple = false;
    for (const auto& c : found) {
      if (std::abs(c.second_derivative) <= tol) simple = false;
      if (tol > 0.0) min_margin = std::min(min_margin, std::abs(c.second_derivative) / tol);
    }
  }
  report.is_simple = simple;
  report.fragile = simple && min_margin < 10.0;
  return report;
}

double CircleMap::lift(double s) const {
  const double base = std::floor(s);
  return s + displacement(s - base);
}

RigidRotation::RigidRotation(double alpha) : alpha_(frac(alpha)) {}

ChessBilliardMap::ChessBilliardMap(BoundaryCurve curve, LambdaContext ctx, int knots)
    : curve_(std::move(curve)), ctx_(ctx), report_(critical_points(curve_, ctx_)), knots_(knots) {
  if (!report_.is_simple) {
    throw NotSimpleError("boundary is not lambda-simple at lambda = " +
                         std::to_string(ctx_.lambda()));
  }
  if (knots_ < 16) throw InputError("ChessBilliardMap: too few knots");
  for (Sign sign : {Sign::plus, Sign::minus}) {
    const auto& pts = report_.of(sign);
    const bool first_is_min = pts[0].value < pts[1].value;
    extremes_[index_of(sign)] = first_is_min ? std::array<double, 2>{pts[0].s, pts[1].s}
                                             : std::array<double, 2>{pts[1].s, pts[0].s};
  }

  double max_slope = 0.0;
  for (int i = 0; i < curve_.resolution(); ++i) {
    const double s = static_cast<double>(i) / curve_.resolution();
    max_slope = std::max({max_slope, std::abs(ell_along(curve_, ctx_, Sign::plus, s, 1)),
                          std::abs(ell_along(curve_, ctx_, Sign::minus, s, 1))});
  }

  for (Sign sign : {Sign::plus, Sign::minus}) {
    Table& table = tables_[index_of(sign)];
    table.value.resize(knots_ + 1);
    table.slope.resize(knots_ + 1);
    auto unwrap_near = [](double value, double reference) {
      return value + std::round(reference - value);
    };
    for (int i = 0; i <= knots_; ++i) {
      const double s = static_cast<double>(i) / knots_;
      const double g = involution_exact(sign, s);
      table.value[i] = (i == 0) ? g : unwrap_near(g, table.value[i - 1]);
      const double here = ell_along(curve_, ctx_, sign, s, 1);
      if (std::abs(here) > 1e-3 * max_slope) {
        table.slope[i] = here / ell_along(curve_, ctx_, sign, g, 1);
      } else {
        constexpr double kStep = 1e-6;
        const double up = involution_exact(sign, s + kStep);
        const double down = involution_exact(sign, s - kStep);
        table.slope[i] = (unwrap_near(up, g) - unwrap_near(down, g)) / (2.0 * kStep);
      }
    }
    table.value[knots_] = table.value[0] - 1.0;
    table.slope[knots_] = table.slope[0];
  }
}

double ChessBilliardMap::arc_parameter(Sign sign, double level) const {
  const auto [s_min, s_max] = extremes_[index_of(sign)];
  const double span = frac(s_max - s_min);
  const double lo_val = ell_along(curve_, ctx_, sign, s_min, 0);
  const double hi_val = ell_along(curve_, ctx_, sign, s_max, 0);
  if (level <= lo_val) return s_min;
  if (level >= hi_val) return s_max;
  auto f = [&](double t) { return ell_along(curve_, ctx_, sign, t, 0) - level; };
  return frac(bracketed_root(f, s_min, s_min + span, 1e-15));
}

double ChessBilliardMap::involution_exact(Sign sign, double s) const {
  const auto [s_min, s_max] = extremes_[index_of(sign)];
  const double rising = frac(s_max - s_min);  // length of the increasing arc
  const double u = frac(s - s_min);
  const double su = s_min + u;
  if (u == 0.0) return frac(s_min);
  if (u == rising) return frac(s_max);
  double lo, hi;
  if (u < rising) {
    lo = s_min + rising;
    hi = s_min + 1.0;
  } else {
    lo = s_min;
    hi = s_min + rising;
  }
  // Secant form (l(t) - l(s)) / sin(pi (t - s)): same roots away from t = s
  // and well conditioned when both points sit near a critical point.
  const double c1 = (sign == Sign::plus ? 1.0 : -1.0) * ctx_.inv_lambda();
  const double c2 = ctx_.inv_sqrt_complement();
  auto secant = [&](double t) {
    const double raw = t - su;
    const double m = std::round(raw);
    const double d = raw - m;
    const Point2 dx = curve_.difference(su + d, su);
    const double numer = c1 * dx.x1 + c2 * dx.x2;
    const double denom = (static_cast<long long>(m) % 2 == 0 ? 1.0 : -1.0) *
                         std::sin(std::numbers::pi * d);
    if (denom == 0.0) return 0.0;
    return numer / denom;
  };
  return frac(bracketed_root(secant, lo, hi, 4e-16));
}

double ChessBilliardMap::interpolate(const Table& table, double s) const {
  const double x = s * knots_;
  int i = static_cast<int>(x);
  if (i >= knots_) i = knots_ - 1;
  if (i < 0) i = 0;
  const double t = x - i;
  const double h = 1.0 / knots_;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double v = (2 * t3 - 3 * t2 + 1) * table.value[i] + (t3 - 2 * t2 + t) * h * table.slope[i] +
                   (-2 * t3 + 3 * t2) * table.value[i + 1] + (t3 - t2) * h * table.slope[i + 1];
  return frac(v);
}

double ChessBilliardMap::involution(Sign sign, double s) const {
  return interpolate(tables_[index_of(sign)], frac(s));
}

double ChessBilliardMap::chess_billiard(double s) const {
  return involution(Sign::plus, involution(Sign::minus, s));
}

double ChessBilliardMap::chess_billiard_exact(double s) const {
  return involution_exact(Sign::plus, involution_exact(Sign::minus, s));
}

double ChessBilliardMap::inverse(double s) const {
  return involution(Sign::minus, involution(Sign::plus, s));
}

double ChessBilliardMap::displacement(double s) const {
  const double d = chess_billiard(s) - s;
  return d - std::floor(d);
}

}  // namespace iwaves
