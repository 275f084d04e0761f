#include "iwaves/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "iwaves/errors.hpp"

namespace iwaves {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// exp(2 pi i theta) powers, re-anchored periodically to keep the recurrence
// from drifting.
std::vector<std::complex<double>> unit_powers(double theta, int order) {
  std::vector<std::complex<double>> powers(static_cast<std::size_t>(order) + 1);
  const auto step = std::polar(1.0, kTwoPi * theta);
  powers[0] = 1.0;
  for (int k = 1; k <= order; ++k) {
    powers[k] = (k % 32 == 0) ? std::polar(1.0, kTwoPi * std::fmod(k * theta, 1.0))
                              : powers[k - 1] * step;
  }
  return powers;
}

}  // namespace

FourierSeries::FourierSeries(int order) {
  if (order < 0) throw InputError("FourierSeries: negative order");
  coeffs_.assign(2 * static_cast<std::size_t>(order) + 1, Complex{});
}

FourierSeries::FourierSeries(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() % 2 == 0) throw InputError("FourierSeries: coefficient count must be odd");
}

FourierSeries FourierSeries::from_samples(std::span<const double> samples, int order) {
  const int n = static_cast<int>(samples.size());
  if (n < 2 * order + 1) throw InputError("FourierSeries::from_samples: too few samples");
  std::vector<Complex> twiddle(n);
  for (int m = 0; m < n; ++m) twiddle[m] = std::polar(1.0, -kTwoPi * m / n);
  FourierSeries out(order);
  for (int k = 0; k <= order; ++k) {
    Complex acc{};
    long idx = 0;
    for (int j = 0; j < n; ++j) {
      acc += samples[j] * twiddle[idx];
      idx += k;
      if (idx >= n) idx -= n;
    }
    acc /= static_cast<double>(n);
    out.set_coefficient(k, acc);
    if (k > 0) out.set_coefficient(-k, std::conj(acc));
  }
  return out;
}

FourierSeries FourierSeries::from_function(const std::function<double(double)>& f, int order,
                                           int n_samples) {
  const int n = std::max(n_samples, 4 * order + 4);
  std::vector<double> samples(n);
  for (int j = 0; j < n; ++j) samples[j] = f(static_cast<double>(j) / n);
  return from_samples(samples, order);
}

FourierSeries::Complex FourierSeries::coefficient(int k) const {
  const int K = order();
  if (k < -K || k > K) return {};
  return coeffs_[static_cast<std::size_t>(k + K)];
}

void FourierSeries::set_coefficient(int k, Complex value) {
  const int K = order();
  if (k < -K || k > K) throw InputError("FourierSeries: mode outside truncation");
  coeffs_[static_cast<std::size_t>(k + K)] = value;
}

FourierSeries::Complex FourierSeries::evaluate(double theta) const {
  const int K = order();
  const auto powers = unit_powers(theta, K);
  Complex acc = coefficient(0);
  for (int k = 1; k <= K; ++k) {
    acc += coefficient(k) * powers[k] + coefficient(-k) * std::conj(powers[k]);
  }
  return acc;
}

double FourierSeries::derivative(double theta, int m) const {
  const int K = order();
  const auto powers = unit_powers(theta, K);
  Complex acc{};
  for (int k = 1; k <= K; ++k) {
    const Complex factor = std::pow(Complex{0.0, kTwoPi * k}, m);
    acc += coefficient(k) * factor * powers[k];
    acc += coefficient(-k) * std::pow(-1.0, m) * factor * std::conj(powers[k]);
  }
  return acc.real();
}

std::vector<double> FourierSeries::sample(int n) const {
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = value(static_cast<double>(j) / n);
  return out;
}

FourierSeries FourierSeries::shifted(double alpha) const {
  FourierSeries out(*this);
  const int K = order();
  for (int k = -K; k <= K; ++k) {
    const double phase = kTwoPi * std::fmod(k * alpha, 1.0);
    out.set_coefficient(k, coefficient(k) * std::polar(1.0, phase));
  }
  return out;
}

FourierSeries FourierSeries::truncated(int new_order) const {
  FourierSeries out(new_order);
  const int K = std::min(new_order, order());
  for (int k = -K; k <= K; ++k) out.set_coefficient(k, coefficient(k));
  return out;
}

FourierSeries FourierSeries::operator+(const FourierSeries& other) const {
  const int K = std::max(order(), other.order());
  FourierSeries out(K);
  for (int k = -K; k <= K; ++k) out.set_coefficient(k, coefficient(k) + other.coefficient(k));
  return out;
}

FourierSeries FourierSeries::operator-(const FourierSeries& other) const {
  return *this + other * -1.0;
}

FourierSeries FourierSeries::operator*(double scale) const {
  FourierSeries out(*this);
  for (auto& c : out.coeffs_) c *= scale;
  return out;
}

double FourierSeries::l2_norm() const {
  double acc = 0.0;
  for (const auto& c : coeffs_) acc += std::norm(c);
  return std::sqrt(acc);
}

double FourierSeries::sobolev_norm(double s) const {
  const int K = order();
  double acc = 0.0;
  for (int k = -K; k <= K; ++k) {
    acc += std::pow(1.0 + static_cast<double>(k) * k, s) * std::norm(coefficient(k));
  }
  return std::sqrt(acc);
}

double FourierSeries::max_abs_on_grid(int n) const {
  double m = 0.0;
  for (int j = 0; j < n; ++j) m = std::max(m, std::abs(evaluate(static_cast<double>(j) / n)));
  return m;
}

bool FourierSeries::is_hermitian(double tol) const {
  const double scale = std::max(l2_norm(), 1e-300);
  for (int k = 1; k <= order(); ++k) {
    if (std::abs(coefficient(-k) - std::conj(coefficient(k))) > tol * scale) return false;
  }
  return std::abs(coefficient(0).imag()) <= tol * scale;
}

int FourierSeries::effective_order(double rel_tail_energy) const {
  const int K = order();
  std::vector<double> shell(static_cast<std::size_t>(K) + 1, 0.0);
  double total = 0.0;
  for (int k = 0; k <= K; ++k) {
    shell[k] = std::norm(coefficient(k)) + (k > 0 ? std::norm(coefficient(-k)) : 0.0);
    total += shell[k];
  }
  if (total == 0.0) return 0;
  double tail = 0.0;
  for (int k = K; k >= 1; --k) {
    tail += shell[k];
    if (tail > rel_tail_energy * total) return k;
  }
  return 0;
}

}  // namespace iwaves
