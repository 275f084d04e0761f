#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace iwaves {

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;
};

/// Closed boundary curve s -> x(s), s in R/Z, stored as truncated real
/// Fourier series
///
///   x_i(s) = cos_i[0] + sum_{j>=1} cos_i[j] cos(2 pi j s) + sin_i[j] sin(2 pi j s).
///
/// All four coefficient arrays share one length J+1; sin_i[0] multiplies
/// sin(0) and must be zero. Construction validates immersion (|x'| > 0 on the
/// sample grid) and flips a negatively oriented parametrization.
class BoundaryCurve {
 public:
  BoundaryCurve(std::vector<double> cos1, std::vector<double> sin1, std::vector<double> cos2,
                std::vector<double> sin2, int resolution = 1024);

  static BoundaryCurve circle(double radius = 1.0, Point2 center = {}, int resolution = 1024);
  /// Boundary of A * (unit disk) + v, parametrized by s -> A (cos 2 pi s, sin 2 pi s) + v.
  static BoundaryCurve ellipse(const Eigen::Matrix2d& A, Point2 v = {}, int resolution = 1024);
  /// Least-squares fit of `harmonics` Fourier modes to points sampled at the
  /// uniform parameters s_j = j / n. A trailing point equal to the first is
  /// dropped; an open polyline (endpoint gap much larger than the typical
  /// spacing) is rejected.
  /// z(t) = exp(i t) - eta exp(-3 i t), t = 2 pi s, rotated by `tilt`
  /// radians; strictly convex for 0 <= eta < 1/9.
  static BoundaryCurve rounded_square(double eta, double tilt = 0.0, int resolution = 1024);
  static BoundaryCurve fit_points(std::span<const Point2> points, int harmonics,
                                  int resolution = 1024);

  Point2 point(double s) const;
  /// d^order x / ds^order.
  Point2 derivative(double s, int order = 1) const;

  int harmonics() const { return static_cast<int>(cos1_.size()) - 1; }
  int resolution() const { return resolution_; }
  bool orientation_corrected() const { return orientation_corrected_; }
  double signed_area() const;
  /// Diameter estimated on the resolution grid.
  double diameter() const;
  std::array<double, 4> bounding_box() const;  // x1min, x1max, x2min, x2max

  const std::vector<double>& cos1() const { return cos1_; }
  const std::vector<double>& sin1() const { return sin1_; }
  const std::vector<double>& cos2() const { return cos2_; }
  const std::vector<double>& sin2() const { return sin2_; }

  /// x(t) - x(s) evaluated with product formulas, accurate when t is close to s.
  Point2 difference(double t, double s) const;

  std::vector<Point2> polygon(int n) const;
  /// Point-in-domain test against a fine polygonal approximation.
  bool contains(Point2 p) const;
  /// Euclidean distance to the curve (polygonal approximation).
  double distance(Point2 p) const;

  std::string to_json() const;

 private:
  std::vector<double> cos1_, sin1_, cos2_, sin2_;
  int resolution_;
  bool orientation_corrected_ = false;
  std::vector<Point2> polygon_;
};

BoundaryCurve load_boundary(std::string_view json_text);
BoundaryCurve load_boundary_file(const std::filesystem::path& path);

/// Forcing frequency lambda in (0, 1) with the coefficients of l^+- precomputed.
class LambdaContext {
 public:
  explicit LambdaContext(double lambda);
  double lambda() const { return lambda_; }
  double inv_lambda() const { return inv_lambda_; }
  /// 1 / sqrt(1 - lambda^2)
  double inv_sqrt_complement() const { return inv_sqrt_complement_; }

 private:
  double lambda_;
  double inv_lambda_;
  double inv_sqrt_complement_;
};

enum class Sign { plus, minus };

inline int index_of(Sign sign) { return sign == Sign::plus ? 0 : 1; }

/// l^+-(x) = +-x1/lambda + x2/sqrt(1 - lambda^2).
double ell(Point2 x, const LambdaContext& ctx, Sign sign);

/// Derivatives of s -> l^+-(x(s)).
double ell_along(const BoundaryCurve& curve, const LambdaContext& ctx, Sign sign, double s,
                 int order = 0);

struct CriticalPoint {
  double s;
  double value;
  double second_derivative;
};

struct CriticalPointReport {
  std::array<std::vector<CriticalPoint>, 2> points;  // indexed by index_of(Sign)
  bool is_simple = false;
  /// Simple, but some |second derivative| is within 10x the degeneracy tolerance.
  bool fragile = false;
  std::array<double, 2> degeneracy_tolerance{};

  const std::vector<CriticalPoint>& of(Sign sign) const { return points[index_of(sign)]; }
};

/// Zeros of d/ds l^+-(x(s)) by sign-change bracketing on the resolution grid
/// followed by bracketed root refinement to 1e-12 in s.
CriticalPointReport critical_points(const BoundaryCurve& curve, const LambdaContext& ctx);

/// A degree-one circle map given by its lift b(s) = s + displacement(s),
/// with displacement 1-periodic and valued in [0, 1).
class CircleMap {
 public:
  virtual ~CircleMap() = default;
  /// b(s) - s for s in [0, 1).
  virtual double displacement(double s) const = 0;
  double lift(double s) const;
};

class RigidRotation final : public CircleMap {
 public:
  explicit RigidRotation(double alpha);
  double displacement(double) const override { return alpha_; }
  double alpha() const { return alpha_; }

 private:
  double alpha_;
};

/// The boundary map b = gamma^+ o gamma^- for a lambda-simple curve.
///
/// Each involution is tabulated on a uniform knot grid as a continuous,
/// decreasing lift G with G(s + 1) = G(s) - 1, and interpolated by cubic
/// Hermite segments with the exact slope gamma'(s) = l'(s) / l'(gamma(s)).
/// The *_exact members root-solve instead of interpolating.
class ChessBilliardMap final : public CircleMap {
 public:
  /// Throws NotSimpleError when the curve is not lambda-simple.
  ChessBilliardMap(BoundaryCurve curve, LambdaContext ctx, int knots = 4096);

  const BoundaryCurve& curve() const { return curve_; }
  const LambdaContext& context() const { return ctx_; }
  const CriticalPointReport& report() const { return report_; }

  /// gamma^+-(s) in [0, 1).
  double involution(Sign sign, double s) const;
  double involution_exact(Sign sign, double s) const;
  /// b(s) = gamma^+(gamma^-(s)) in [0, 1).
  double chess_billiard(double s) const;
  double chess_billiard_exact(double s) const;
  /// b^{-1}(s) = gamma^-(gamma^+(s)) in [0, 1).
  double inverse(double s) const;
  double displacement(double s) const override;

  /// The parameter on the arc where l^+- increases with l^+-(x(s)) = level.
  double arc_parameter(Sign sign, double level) const;

 private:
  struct Table {
    std::vector<double> value;  // continuous decreasing lift of gamma at knots
    std::vector<double> slope;
  };

  double interpolate(const Table& table, double s) const;

  BoundaryCurve curve_;
  LambdaContext ctx_;
  CriticalPointReport report_;
  int knots_;
  std::array<Table, 2> tables_;
  // [sign] -> (parameter of the minimum, parameter of the maximum)
  std::array<std::array<double, 2>, 2> extremes_{};
};

}  // namespace iwaves
