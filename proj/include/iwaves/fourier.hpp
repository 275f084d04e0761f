#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace iwaves {

/// Truncated complex Fourier series on the circle R/Z:
///
///   g(theta) = sum_{|k| <= K} c_k exp(2 pi i k theta).
///
/// Real functions are represented with Hermitian coefficients
/// c_{-k} = conj(c_k); value() returns the real part of the sum.
class FourierSeries {
 public:
  using Complex = std::complex<double>;

  FourierSeries() : coeffs_(1, Complex{}) {}
  explicit FourierSeries(int order);
  /// `coeffs` has odd length 2K+1 and is indexed from k = -K.
  explicit FourierSeries(std::vector<Complex> coeffs);

  /// Projects uniform samples f(j/N), j < N, onto modes |k| <= order.
  /// Requires N >= 2*order + 1.
  static FourierSeries from_samples(std::span<const double> samples, int order);
  static FourierSeries from_function(const std::function<double(double)>& f, int order,
                                     int n_samples = 0);

  int order() const { return static_cast<int>(coeffs_.size() / 2); }
  Complex coefficient(int k) const;
  void set_coefficient(int k, Complex value);
  std::span<const Complex> coefficients() const { return coeffs_; }

  Complex evaluate(double theta) const;
  double value(double theta) const { return evaluate(theta).real(); }
  /// m-th derivative in theta (real part).
  double derivative(double theta, int m = 1) const;
  /// Values at theta_j = j/n, j < n.
  std::vector<double> sample(int n) const;

  /// The series of theta -> g(theta + alpha).
  FourierSeries shifted(double alpha) const;
  FourierSeries truncated(int order) const;
  FourierSeries operator+(const FourierSeries& other) const;
  FourierSeries operator-(const FourierSeries& other) const;
  FourierSeries operator*(double scale) const;

  double mean() const { return coefficient(0).real(); }
  /// sqrt(sum |c_k|^2), the L2(S^1) norm.
  double l2_norm() const;
  /// (sum (1 + k^2)^s |c_k|^2)^(1/2)
  double sobolev_norm(double s) const;
  double max_abs_on_grid(int n) const;
  bool is_hermitian(double tol = 1e-12) const;

  /// Smallest K whose tail energy sum_{|k|>K} |c_k|^2 is at most
  /// rel_tail_energy * (total energy).
  int effective_order(double rel_tail_energy) const;

 private:
  std::vector<Complex> coeffs_;
};

}  // namespace iwaves
