#include "iwaves/cohomology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "iwaves/errors.hpp"

namespace iwaves {

namespace {

constexpr int kMaxOrder = 1 << 14;
constexpr double kResonance = 1e-14;

}  // namespace

double small_divisor(double alpha, long k) {
  const double x = static_cast<double>(k) * alpha;
  return 2.0 * std::abs(std::sin(std::numbers::pi * (x - std::round(x))));
}

CohomologicalSolution solve_cohomological(const FourierSeries& g, double alpha, double mean) {
  const double norm = g.l2_norm();
  if (std::abs(g.coefficient(0)) > 1e-12 * norm) {
    throw InputError("cohomological equation needs zero-mean data");
  }
  const int order = std::min({g.order(), g.effective_order(1e-24), kMaxOrder});
  CohomologicalSolution out;
  out.order = order;
  out.v = FourierSeries(order);
  out.v.set_coefficient(0, mean);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int k = 1; k <= order; ++k) {
    const double divisor = small_divisor(alpha, k);
    if (divisor < kResonance) {
      throw ResonanceError("resonant divisor at k = " + std::to_string(k));
    }
    const double x = static_cast<double>(k) * alpha;
    const auto factor = 1.0 - std::polar(1.0, two_pi * (x - std::round(x)));
    out.v.set_coefficient(k, g.coefficient(k) / factor);
    out.v.set_coefficient(-k, g.coefficient(-k) / std::conj(factor));
  }
  const FourierSeries defect = out.v - out.v.shifted(alpha) - g;
  out.residual = defect.max_abs_on_grid(std::max(64, 4 * defect.order() + 4));
  return out;
}

SmallDivisorReport small_divisor_report(double alpha, long K) {
  if (K < 1) throw InputError("small_divisor_report: K must be positive");
  SmallDivisorReport report;
  report.entries.reserve(static_cast<std::size_t>(K));
  double record = std::numeric_limits<double>::max();
  std::vector<double> xs, ys;
  bool vanished = false;
  for (long k = 1; k <= K; ++k) {
    const double d = small_divisor(alpha, k);
    report.entries.push_back({k, d});
    if (k < 2) {
      record = d;
      continue;
    }
    if (d == 0.0) {
      vanished = true;
      continue;
    }
    const double lk = std::log(static_cast<double>(k));
    report.worst_exponent = std::max(report.worst_exponent, -std::log(d) / lk);
    if (d < record) {
      record = d;
      xs.push_back(lk);
      ys.push_back(-std::log(d));
    }
  }
  if (vanished) {
    report.fitted_exponent = std::numeric_limits<double>::infinity();
    report.worst_exponent = std::numeric_limits<double>::infinity();
  } else if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    report.fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return report;
}

}  // namespace iwaves
