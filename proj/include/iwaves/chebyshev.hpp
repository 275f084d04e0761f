#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace iwaves {

struct ChebyshevJet {
  double value;
  double first;
  double second;
};

/// T_n(x) and its first two derivatives by the three-term recurrence.
ChebyshevJet chebyshev_t(int n, double x);

/// Chebyshev series on an interval [lo, hi].
class ChebyshevSeries {
 public:
  ChebyshevSeries() = default;
  ChebyshevSeries(double lo, double hi, std::vector<double> coeffs);

  /// Interpolates f at n Chebyshev points of the first kind.
  static ChebyshevSeries interpolate(const std::function<double(double)>& f, double lo, double hi,
                                     int n);
  /// Interpolates with n doubled from `n_min` until the trailing coefficients
  /// fall below rel_tol * max|c|, or n_max is reached.
  static ChebyshevSeries adaptive(const std::function<double(double)>& f, double lo, double hi,
                                  int n_min, int n_max, double rel_tol);

  double operator()(double x) const;
  double derivative(double x) const;
  /// Antiderivative vanishing at lo.
  ChebyshevSeries antiderivative() const;

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  /// max |c_k| over the last quarter of the coefficients relative to max |c_k|.
  double tail_ratio() const;

 private:
  double lo_ = -1.0;
  double hi_ = 1.0;
  std::vector<double> coeffs_;
};

/// Tensor Chebyshev series on a box [lo1, hi1] x [lo2, hi2]:
/// f(y1, y2) = sum_{ij} C(i, j) T_i(t1) T_j(t2).
class ChebyshevSeries2D {
 public:
  ChebyshevSeries2D() = default;
  ChebyshevSeries2D(double lo1, double hi1, double lo2, double hi2, Eigen::MatrixXd coeffs);

  static ChebyshevSeries2D interpolate(const std::function<double(double, double)>& f,
                                       double lo1, double hi1, double lo2, double hi2, int n);
  static ChebyshevSeries2D adaptive(const std::function<double(double, double)>& f, double lo1,
                                    double hi1, double lo2, double hi2, int n_min, int n_max,
                                    double rel_tol);

  double operator()(double y1, double y2) const;
  /// The double antiderivative U with d^2 U / dy1 dy2 = f and U = 0 on the
  /// lower edges y1 = lo1, y2 = lo2.
  ChebyshevSeries2D double_antiderivative() const;

  const Eigen::MatrixXd& coefficients() const { return coeffs_; }
  double tail_ratio() const;

 private:
  double lo1_ = -1.0, hi1_ = 1.0, lo2_ = -1.0, hi2_ = 1.0;
  Eigen::MatrixXd coeffs_;
};

}  // namespace iwaves
