#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "iwaves/geometry.hpp"
#include "iwaves/grid.hpp"
#include "iwaves/spectra.hpp"

namespace iwaves {

struct RightInverseOptions {
  long orbit = 100'000;           // orbit length for rotation number and conjugacy
  int conjugacy_modes = 64;
  double conjugacy_tol = 1e-6;
  int boundary_samples = 1024;    // theta grid for the boundary data
  int chebyshev_max = 128;        // 2D interpolation of f in (y+, y-)
  int extension_max = 512;        // 1D interpolation of V+- along y+-
  double residual_factor = 1e-4;  // tol_residual = factor * |f|_inf
  double boundary_factor = 1e-4;  // tol_boundary = factor * |u|_inf
  double fd_step_factor = 1e-3;   // finite-difference step / diameter
};

struct RightInverseReport {
  double residual = 0.0;        // max |P(lambda) u - f| over interior grid points
  double boundary_norm = 0.0;   // max |u| on the boundary curve
  double residual_tol = 0.0;
  double boundary_tol = 0.0;
  double lambda = 0.0;
  double rotation_number = 0.0;
  double conjugacy_residual = 0.0;
  /// Means of U0(gamma^+-(theta)) - U0(theta) before they were projected out,
  /// relative to max |U0|.
  double zero_average_plus = 0.0;
  double zero_average_minus = 0.0;
  /// max |V+-(gamma^+-) - V+-| relative to max(1, max |U0|).
  double arc_mismatch = 0.0;
  double cohomology_residual = 0.0;
  int fourier_order = 0;
  int chebyshev_order = 0;
  bool verified = false;
  std::string message;
};

struct RightInverseResult {
  GridFunction u;
  std::function<double(Point2)> solution;
  RightInverseReport report;
};

/// u with P(lambda) u = f in the domain and u = 0 on its boundary.
///
/// f must carry an evaluator, which is used as the smooth extension of f
/// to the characteristic box. Throws NotSimpleError, RationalRotationError,
/// ConjugacyError or ResonanceError when a step is impossible; a solution
/// that fails verification is returned with report.verified = false.
RightInverseResult right_inverse(const BoundaryCurve& curve, const LambdaContext& ctx,
                                 const GridFunction& f, const RightInverseOptions& options = {});

/// (1 - lambda^2) u_22 - lambda^2 u_11 at x by fourth-order central
/// differences with step h.
double apply_p(const std::function<double(Point2)>& u, double lambda, Point2 x, double h);

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> energy_h10;    // |u(t)|^2_{H^1_0}
  std::vector<double> norm_hminus1;  // |w(t)|_{H^-1} = |u(t)|_{H^1_0}
  std::vector<double> snapshot_times;
  std::vector<std::vector<double>> snapshots;  // mode coefficients of u
  double tail_estimate = 0.0;
  bool growth = false;
  double growth_slope = 0.0;
};

/// Coefficient at time t of the forced mode with forcing coefficient c:
/// c (cos(lambda t) - cos(sqrt(e) t)) / (D (lambda^2 - e)), and the secular
/// limit -c t sin(lambda t) / (2 lambda D) when |lambda^2 - e| < 1e-12.
double mode_coefficient(double c, double lambda, const EigenMode& mode, double t);

/// Forced evolution of u with forcing f = sum_m c_m phi_m cos(lambda t),
/// u = du/dt = 0 at t = 0. Keeps `snapshots` evenly spaced coefficient
/// snapshots.
EvolutionTrace evolve_modal(std::span<const double> coefficients, double lambda,
                            std::span<const EigenMode> modes, std::span<const double> times,
                            int snapshots = 0);

/// evolve_modal on the sine modes with max(k1, k2) <= k_max, coefficients
/// from midpoint quadrature of f. Throws QuadratureError when the H^-1 mass
/// in the outer half of the mode range exceeds tail_tol of the total.
EvolutionTrace evolve_square(const std::function<double(Point2)>& f, double lambda,
                             std::span<const double> times, int k_max, double tail_tol = 1e-8,
                             int snapshots = 0);

/// sum_m a_m^2 |grad v_m|^2
double energy_h10(std::span<const double> coefficients, std::span<const EigenMode> modes);

/// t = 0 followed by per_decade log-spaced points per decade on [t_min, t_max].
std::vector<double> log_time_grid(double t_min, double t_max, int per_decade = 2048);
/// 0, dt, 2 dt, ... up to t_max.
std::vector<double> uniform_time_grid(double t_max, double dt);

struct GrowthFit {
  bool growing = false;
  double slope = 0.0;  // log-log slope of the running maximum, upper half of the range
};

GrowthFit detect_growth(std::span<const double> times, std::span<const double> energy);

/// max of energy over times <= horizon.
double sup_until(std::span<const double> times, std::span<const double> energy, double horizon);

}  // namespace iwaves
