#pragma once

#include <vector>

#include "iwaves/fourier.hpp"

namespace iwaves {

struct CohomologicalSolution {
  FourierSeries v;
  /// max over a fine grid of |v(theta) - v(theta + alpha) - g(theta)|
  double residual = 0.0;
  /// Truncation order actually used.
  int order = 0;
};

/// Solves v(theta) - v(theta + alpha) = g(theta) with mean(v) = mean.
///
/// v_k = g_k / (1 - exp(2 pi i k alpha)) for 0 < |k| <= K, where K is the
/// smallest order whose tail carries at most 1e-24 of the energy of g (so
/// the L2 tail is below 1e-12 relative), capped at 2^14. Throws InputError
/// when g does not have zero mean to 1e-12 relative, and ResonanceError when
/// a divisor with k <= K falls below 1e-14.
CohomologicalSolution solve_cohomological(const FourierSeries& g, double alpha,
                                          double mean = 0.0);

/// |1 - exp(2 pi i k alpha)|, evaluated from the distance of k alpha to
/// the nearest integer.
double small_divisor(double alpha, long k);

struct SmallDivisorEntry {
  long k;
  double divisor;
};

struct SmallDivisorReport {
  std::vector<SmallDivisorEntry> entries;  // k = 1..K
  /// Least-squares slope of log(1/divisor) against log k over the record
  /// minima of the divisor sequence (k >= 2). Infinite if a divisor vanishes.
  double fitted_exponent = 0.0;
  /// max over k >= 2 of log(1/divisor) / log k.
  double worst_exponent = 0.0;
};

SmallDivisorReport small_divisor_report(double alpha, long K);

}  // namespace iwaves
