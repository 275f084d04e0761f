#include "iwaves/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "iwaves/errors.hpp"

namespace iwaves {

namespace {

// Coefficients of the degree n-1 interpolant through the Chebyshev points of
// the first kind: c_k = (2 - delta_k0)/n sum_j f_j cos(k (j + 1/2) pi / n).
Eigen::MatrixXd cosine_transform_matrix(int n) {
  Eigen::MatrixXd m(n, n);
  for (int k = 0; k < n; ++k) {
    const double scale = (k == 0 ? 1.0 : 2.0) / n;
    for (int j = 0; j < n; ++j) {
      m(k, j) = scale * std::cos(std::numbers::pi * k * (j + 0.5) / n);
    }
  }
  return m;
}

std::vector<double> chebyshev_nodes(int n) {
  std::vector<double> t(n);
  for (int j = 0; j < n; ++j) t[j] = std::cos(std::numbers::pi * (j + 0.5) / n);
  return t;
}

// Antiderivative of sum c_k T_k(t) in t, vanishing at t = -1.
Eigen::VectorXd integrate_coefficients(const Eigen::VectorXd& c) {
  const int n = static_cast<int>(c.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n + 1);
  auto at = [&](int k) { return (k >= 0 && k < n) ? c(k) : 0.0; };
  for (int k = 1; k <= n; ++k) {
    const double lower = (k == 1) ? 2.0 * at(0) : at(k - 1);
    out(k) = (lower - at(k + 1)) / (2.0 * k);
  }
  // Fix the constant so the value at t = -1 is zero: T_k(-1) = (-1)^k.
  double at_minus_one = 0.0;
  for (int k = 1; k <= n; ++k) at_minus_one += (k % 2 == 0 ? 1.0 : -1.0) * out(k);
  out(0) = -at_minus_one;
  return out;
}

double clenshaw(const double* c, int n, double t) {
  double b1 = 0.0, b2 = 0.0;
  for (int k = n - 1; k >= 1; --k) {
    const double b0 = 2.0 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return (n > 0 ? c[0] : 0.0) + t * b1 - b2;
}

double tail_of(const Eigen::VectorXd& c) {
  const int n = static_cast<int>(c.size());
  const double scale = c.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  const int start = std::max(1, n - std::max(1, n / 4));
  return c.tail(n - start).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

ChebyshevJet chebyshev_t(int n, double x) {
  if (n < 0) throw InputError("chebyshev_t: negative degree");
  ChebyshevJet prev{1.0, 0.0, 0.0};
  if (n == 0) return prev;
  ChebyshevJet cur{x, 1.0, 0.0};
  for (int k = 1; k < n; ++k) {
    const ChebyshevJet next{2.0 * x * cur.value - prev.value,
                            2.0 * cur.value + 2.0 * x * cur.first - prev.first,
                            4.0 * cur.first + 2.0 * x * cur.second - prev.second};
    prev = cur;
    cur = next;
  }
  return cur;
}

ChebyshevSeries::ChebyshevSeries(double lo, double hi, std::vector<double> coeffs)
    : lo_(lo), hi_(hi), coeffs_(std::move(coeffs)) {
  if (!(hi > lo)) throw InputError("ChebyshevSeries: empty interval");
}

ChebyshevSeries ChebyshevSeries::interpolate(const std::function<double(double)>& f, double lo,
                                             double hi, int n) {
  const auto t = chebyshev_nodes(n);
  Eigen::VectorXd values(n);
  for (int j = 0; j < n; ++j) values(j) = f(lo + 0.5 * (t[j] + 1.0) * (hi - lo));
  const Eigen::VectorXd c = cosine_transform_matrix(n) * values;
  return ChebyshevSeries(lo, hi, std::vector<double>(c.data(), c.data() + n));
}

ChebyshevSeries ChebyshevSeries::adaptive(const std::function<double(double)>& f, double lo,
                                          double hi, int n_min, int n_max, double rel_tol) {
  int n = n_min;
  while (true) {
    auto series = interpolate(f, lo, hi, n);
    if (series.tail_ratio() <= rel_tol || 2 * n > n_max) return series;
    n *= 2;
  }
}

double ChebyshevSeries::operator()(double x) const {
  const double t = (2.0 * x - lo_ - hi_) / (hi_ - lo_);
  return clenshaw(coeffs_.data(), static_cast<int>(coeffs_.size()), t);
}

double ChebyshevSeries::derivative(double x) const {
  const double t = (2.0 * x - lo_ - hi_) / (hi_ - lo_);
  double acc = 0.0;
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    acc += coeffs_[k] * chebyshev_t(static_cast<int>(k), t).first;
  }
  return acc * 2.0 / (hi_ - lo_);
}

ChebyshevSeries ChebyshevSeries::antiderivative() const {
  const Eigen::Map<const Eigen::VectorXd> c(coeffs_.data(), static_cast<Eigen::Index>(coeffs_.size()));
  Eigen::VectorXd out = integrate_coefficients(c) * (0.5 * (hi_ - lo_));
  return ChebyshevSeries(lo_, hi_, std::vector<double>(out.data(), out.data() + out.size()));
}

double ChebyshevSeries::tail_ratio() const {
  const Eigen::Map<const Eigen::VectorXd> c(coeffs_.data(), static_cast<Eigen::Index>(coeffs_.size()));
  return tail_of(c);
}

ChebyshevSeries2D::ChebyshevSeries2D(double lo1, double hi1, double lo2, double hi2,
                                     Eigen::MatrixXd coeffs)
    : lo1_(lo1), hi1_(hi1), lo2_(lo2), hi2_(hi2), coeffs_(std::move(coeffs)) {
  if (!(hi1 > lo1) || !(hi2 > lo2)) throw InputError("ChebyshevSeries2D: empty box");
}

ChebyshevSeries2D ChebyshevSeries2D::interpolate(const std::function<double(double, double)>& f,
                                                 double lo1, double hi1, double lo2, double hi2,
                                                 int n) {
  const auto t = chebyshev_nodes(n);
  Eigen::MatrixXd values(n, n);
  for (int i = 0; i < n; ++i) {
    const double y1 = lo1 + 0.5 * (t[i] + 1.0) * (hi1 - lo1);
    for (int j = 0; j < n; ++j) {
      values(i, j) = f(y1, lo2 + 0.5 * (t[j] + 1.0) * (hi2 - lo2));
    }
  }
  const Eigen::MatrixXd m = cosine_transform_matrix(n);
  return ChebyshevSeries2D(lo1, hi1, lo2, hi2, m * values * m.transpose());
}

ChebyshevSeries2D ChebyshevSeries2D::adaptive(const std::function<double(double, double)>& f,
                                              double lo1, double hi1, double lo2, double hi2,
                                              int n_min, int n_max, double rel_tol) {
  int n = n_min;
  while (true) {
    auto series = interpolate(f, lo1, hi1, lo2, hi2, n);
    if (series.tail_ratio() <= rel_tol || 2 * n > n_max) return series;
    n *= 2;
  }
}

double ChebyshevSeries2D::operator()(double y1, double y2) const {
  const double t1 = (2.0 * y1 - lo1_ - hi1_) / (hi1_ - lo1_);
  const double t2 = (2.0 * y2 - lo2_ - hi2_) / (hi2_ - lo2_);
  const auto rows = coeffs_.rows();
  const auto cols = coeffs_.cols();
  // Clenshaw along the second index for every row, then along the first.
  Eigen::VectorXd inner(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    double b1 = 0.0, b2 = 0.0;
    for (Eigen::Index j = cols - 1; j >= 1; --j) {
      const double b0 = 2.0 * t2 * b1 - b2 + coeffs_(i, j);
      b2 = b1;
      b1 = b0;
    }
    inner(i) = coeffs_(i, 0) + t2 * b1 - b2;
  }
  return clenshaw(inner.data(), static_cast<int>(rows), t1);
}

ChebyshevSeries2D ChebyshevSeries2D::double_antiderivative() const {
  const auto rows = coeffs_.rows();
  const auto cols = coeffs_.cols();
  Eigen::MatrixXd stage(rows + 1, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    stage.col(j) = integrate_coefficients(coeffs_.col(j)) * (0.5 * (hi1_ - lo1_));
  }
  Eigen::MatrixXd out(rows + 1, cols + 1);
  for (Eigen::Index i = 0; i < rows + 1; ++i) {
    out.row(i) = integrate_coefficients(stage.row(i).transpose()).transpose() * (0.5 * (hi2_ - lo2_));
  }
  return ChebyshevSeries2D(lo1_, hi1_, lo2_, hi2_, std::move(out));
}

double ChebyshevSeries2D::tail_ratio() const {
  const double scale = coeffs_.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  const auto n1 = coeffs_.rows();
  const auto n2 = coeffs_.cols();
  const auto s1 = std::max<Eigen::Index>(1, n1 - std::max<Eigen::Index>(1, n1 / 4));
  const auto s2 = std::max<Eigen::Index>(1, n2 - std::max<Eigen::Index>(1, n2 / 4));
  const double tail = std::max(coeffs_.bottomRows(n1 - s1).cwiseAbs().maxCoeff(),
                               coeffs_.rightCols(n2 - s2).cwiseAbs().maxCoeff());
  return tail / scale;
}

}  // namespace iwaves
