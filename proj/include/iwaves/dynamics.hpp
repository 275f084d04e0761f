#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "iwaves/fourier.hpp"
#include "iwaves/geometry.hpp"

namespace iwaves {

using BigInt = boost::multiprecision::cpp_int;
using Float50 = boost::multiprecision::cpp_bin_float_50;

enum class RotationMethod { birkhoff, periodic_orbit_locked };

struct RotationNumberEstimate {
  double value = 0.0;  // in [0, 1)
  long iterations = 0;
  double error_bound = 1.0;
  RotationMethod method = RotationMethod::birkhoff;
  long p = 0;  // set when locked: value == p / q
  long q = 0;
  /// |b^q(s*) - s* - p| at the verified periodic point (locked only).
  double lock_residual = 0.0;

  bool locked() const { return method == RotationMethod::periodic_orbit_locked; }
};

/// Rotation number of a degree-one circle map.
///
/// The orbit of x0 is followed for M steps. The plain Birkhoff quotient
/// (b^M(x0) - x0) / M is within 1/M of the rotation number; a smoothly
/// weighted average of the displacements refines it and is used whenever it
/// agrees with the plain estimate. Convergents p/q of the estimate with
/// q <= q_max that are compatible with it are then tested for a periodic
/// orbit b^q(s) = s + p, first along the tail of the orbit and then by sign
/// changes over a grid; a verified periodic orbit locks the result to p/q.
RotationNumberEstimate rotation_number(const CircleMap& map, long M = 1'000'000,
                                       long q_max = 10'000, double x0 = 0.0);

struct RotationCurvePoint {
  double lambda = 0.0;
  bool simple = false;
  RotationNumberEstimate estimate;  // meaningful only when simple
};

/// Rotation numbers of the chess billiard over a grid of lambda values.
/// Lambda values where the curve is not lambda-simple are kept with
/// simple = false.
std::vector<RotationCurvePoint> rotation_curve(const BoundaryCurve& curve,
                                               const std::vector<double>& lambdas,
                                               long M = 1'000'000, long q_max = 10'000);

/// Lambda in (lo, hi) with r(lambda) = target, assuming r increasing. A
/// bracket that contradicts monotonicity switches to a grid scan followed by
/// local bisection. Throws TargetUnreachableError when no bracket exists.
double find_lambda_for_rotation(const std::function<double(double)>& rotation, double target,
                                double tol = 1e-8, double lo = 1e-3, double hi = 1.0 - 1e-3);
/// Same, with r(lambda) computed from the chess billiard of `curve`; a
/// locked plateau containing the target ends the search immediately.
double find_lambda_for_rotation(const BoundaryCurve& curve, double target, double tol = 1e-8,
                                long M = 100'000);

struct ContinuedFraction {
  BigInt a0;
  std::vector<BigInt> quotients;  // a_1, a_2, ...
  std::vector<BigInt> p;          // convergent numerators p_0, p_1, ...
  std::vector<BigInt> q;          // convergent denominators
  /// max over n of log(a_{n+1}) / log(q_n), taken over q_n >= 2.
  double diophantine_score = 0.0;
  bool rational = false;
  /// Some a_{n+1} > q_n^2 with q_n >= 10.
  bool liouville_suspect = false;
  /// The expansion stopped because the working precision ran out (or the
  /// requested depth exceeded the supported one).
  bool precision_exhausted = false;
};

/// Gauss-map expansion of alpha in (0, 1). Depth is capped at 40 in double
/// precision and 120 with 50 decimal digits.
ContinuedFraction continued_fraction(double alpha, int depth = 40);
ContinuedFraction continued_fraction(const Float50& alpha, int depth = 120);

/// sum_{n=1}^{terms} 2^{-n!}
Float50 liouville_partial_sum(int terms = 5);

/// Degree-d circle function s -> d * s + periodic(s).
class CircleFunction {
 public:
  CircleFunction() = default;
  CircleFunction(int degree, FourierSeries periodic);

  int degree() const { return degree_; }
  const FourierSeries& periodic() const { return periodic_; }
  double operator()(double s) const;
  double derivative(double s) const;
  /// Inverse of a degree-one increasing function, by bracketed root finding.
  double inverse(double theta) const;
  /// Strictly increasing on an n-point grid.
  bool is_monotone(int n = 4096) const;

 private:
  int degree_ = 1;
  FourierSeries periodic_;
  double amplitude_bound_ = 0.0;
};

struct ConjugacyResult {
  CircleFunction psi;
  RotationNumberEstimate rotation;
  double residual = 0.0;  // max over a grid of |psi(b(s)) - psi(s) - r|
};

/// psi with psi(b(s)) = psi(s) + r, built from the invariant measure of one
/// long orbit. Fourier coefficients of the measure come from a smoothly
/// weighted orbit average; psi(s) is the measure of [0, s), truncated to
/// `modes` harmonics, so psi(0) = 0. Throws RationalRotationError for a
/// locked rotation number and ConjugacyError when the residual exceeds tol.
ConjugacyResult conjugacy(const CircleMap& map, long orbit = 100'000, int modes = 64,
                          double tol = 1e-6, double s0 = 0.0);

}  // namespace iwaves
