#include "iwaves/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iwaves/chebyshev.hpp"
#include "iwaves/cohomology.hpp"
#include "iwaves/dynamics.hpp"
#include "iwaves/errors.hpp"
#include "iwaves/fourier.hpp"

namespace iwaves {

namespace {

double frac(double s) {
  double f = s - std::floor(s);
  return f >= 1.0 ? 0.0 : f;
}

std::pair<double, double> critical_range(const CriticalPointReport& report, Sign sign) {
  const auto& pts = report.of(sign);
  double lo = std::numeric_limits<double>::max(), hi = -lo;
  for (const auto& c : pts) {
    lo = std::min(lo, c.value);
    hi = std::max(hi, c.value);
  }
  return {lo, hi};
}

}  // namespace

double apply_p(const std::function<double(Point2)>& u, double lambda, Point2 x, double h) {
  auto second = [&](double dx1, double dx2) {
    const double um2 = u({x.x1 - 2 * dx1, x.x2 - 2 * dx2});
    const double um1 = u({x.x1 - dx1, x.x2 - dx2});
    const double u0 = u(x);
    const double up1 = u({x.x1 + dx1, x.x2 + dx2});
    const double up2 = u({x.x1 + 2 * dx1, x.x2 + 2 * dx2});
    return (-um2 + 16.0 * um1 - 30.0 * u0 + 16.0 * up1 - up2) / (12.0 * h * h);
  };
  const double l2 = lambda * lambda;
  return (1.0 - l2) * second(0.0, h) - l2 * second(h, 0.0);
}

RightInverseResult right_inverse(const BoundaryCurve& curve, const LambdaContext& ctx,
                                 const GridFunction& f, const RightInverseOptions& opt) {
  if (!f.has_evaluator()) throw InputError("right_inverse needs f with an evaluator");
  const auto map = std::make_shared<const ChessBilliardMap>(curve, ctx);
  const ConjugacyResult conj = conjugacy(*map, opt.orbit, opt.conjugacy_modes, opt.conjugacy_tol);
  const double r = conj.rotation.value;
  const double lambda = ctx.lambda();
  const double cl = std::sqrt((1.0 - lambda) * (1.0 + lambda));

  RightInverseReport report;
  report.lambda = lambda;
  report.rotation_number = r;
  report.conjugacy_residual = conj.residual;

  // Characteristic coordinates y+- = l+-/2 and the inverse change of variables.
  auto to_x = [lambda, cl](double yp, double ym) {
    return Point2{lambda * (yp - ym), cl * (yp + ym)};
  };
  const auto [lp_lo, lp_hi] = critical_range(map->report(), Sign::plus);
  const auto [lm_lo, lm_hi] = critical_range(map->report(), Sign::minus);
  const double pad_p = 0.02 * (lp_hi - lp_lo) / 2.0;
  const double pad_m = 0.02 * (lm_hi - lm_lo) / 2.0;
  const auto& fx = f.evaluator();
  const ChebyshevSeries2D f_cheb = ChebyshevSeries2D::adaptive(
      [&](double yp, double ym) { return fx(to_x(yp, ym)); }, lp_lo / 2 - pad_p, lp_hi / 2 + pad_p,
      lm_lo / 2 - pad_m, lm_hi / 2 + pad_m, 16, opt.chebyshev_max, 1e-14);
  report.chebyshev_order = static_cast<int>(f_cheb.coefficients().rows());
  const auto u0_cheb = std::make_shared<const ChebyshevSeries2D>(f_cheb.double_antiderivative());
  auto u0 = [u0_cheb, ctx](Point2 x) {
    return (*u0_cheb)(0.5 * ell(x, ctx, Sign::plus), 0.5 * ell(x, ctx, Sign::minus));
  };

  // Boundary data in conjugated coordinates.
  const int n = opt.boundary_samples;
  std::vector<double> s_of_theta(n), gp(n), gm(n), u0_trace(n);
  double u0_max = 0.0, u0_mean = 0.0;
  for (int j = 0; j < n; ++j) {
    const double s = frac(conj.psi.inverse(static_cast<double>(j) / n));
    s_of_theta[j] = s;
    const double here = u0(curve.point(s));
    u0_trace[j] = here;
    u0_max = std::max(u0_max, std::abs(here));
    u0_mean += here / n;
    gp[j] = u0(curve.point(map->involution_exact(Sign::plus, s))) - here;
    gm[j] = u0(curve.point(map->involution_exact(Sign::minus, s))) - here;
  }
  const int order = n / 2 - 1;
  FourierSeries Gp = FourierSeries::from_samples(gp, order);
  FourierSeries Gm = FourierSeries::from_samples(gm, order);
  const double scale = std::max(u0_max, std::numeric_limits<double>::min());
  report.zero_average_plus = std::abs(Gp.mean()) / scale;
  report.zero_average_minus = std::abs(Gm.mean()) / scale;
  Gp.set_coefficient(0, 0.0);
  Gm.set_coefficient(0, 0.0);

  const auto Vp = solve_cohomological(Gm * -1.0, r, 0.5 * u0_mean);
  const auto Vm = solve_cohomological(Gp * -1.0, -r, 0.5 * u0_mean);
  report.cohomology_residual = std::max(Vp.residual, Vm.residual);
  report.fourier_order = std::max(Vp.order, Vm.order);

  // V+- as functions of s on the boundary.
  const CircleFunction psi = conj.psi;
  auto V_at = [&psi](const FourierSeries& V, double s) { return V.value(frac(psi(s))); };

  double mismatch = 0.0;
  for (int j = 0; j < n; ++j) {
    const double s = s_of_theta[j];
    mismatch = std::max(mismatch, std::abs(V_at(Vp.v, map->involution_exact(Sign::plus, s)) -
                                           V_at(Vp.v, s)));
    mismatch = std::max(mismatch, std::abs(V_at(Vm.v, map->involution_exact(Sign::minus, s)) -
                                           V_at(Vm.v, s)));
  }
  report.arc_mismatch = mismatch / std::max(1.0, u0_max);

  // Extend V+- into the domain as functions of y+- alone.
  auto extension = [&](Sign sign, const FourierSeries& V, double lo, double hi) {
    return std::make_shared<const ChebyshevSeries>(ChebyshevSeries::adaptive(
        [&](double y) { return V_at(V, map->arc_parameter(sign, 2.0 * y)); }, lo / 2, hi / 2, 32,
        opt.extension_max, 1e-14));
  };
  const auto vp = extension(Sign::plus, Vp.v, lp_lo, lp_hi);
  const auto vm = extension(Sign::minus, Vm.v, lm_lo, lm_hi);
  auto clamp_eval = [](const ChebyshevSeries& c, double y) {
    return c(std::clamp(y, c.lo(), c.hi()));
  };
  std::function<double(Point2)> solution = [u0, vp, vm, ctx, clamp_eval](Point2 x) {
    return u0(x) - clamp_eval(*vp, 0.5 * ell(x, ctx, Sign::plus)) -
           clamp_eval(*vm, 0.5 * ell(x, ctx, Sign::minus));
  };

  GridFunction u = f.resampled(solution);

  // Verification.
  const double h = opt.fd_step_factor * curve.diameter();
  double residual = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    for (int j = 0; j < f.size(); ++j) {
      if (!f.inside(i, j) || f.boundary_adjacent(i, j)) continue;
      residual = std::max(residual, std::abs(apply_p(solution, lambda, f.point(i, j), h) - f.value(i, j)));
    }
  }
  double boundary = 0.0;
  for (int j = 0; j < n; ++j) {
    boundary = std::max(boundary, std::abs(solution(curve.point(static_cast<double>(j) / n))));
  }
  const double relax = conj.residual > 1e-9 ? 10.0 : 1.0;
  report.residual = residual;
  report.boundary_norm = boundary;
  report.residual_tol = relax * opt.residual_factor * f.max_abs_inside();
  report.boundary_tol = relax * opt.boundary_factor * u.max_abs_inside();
  report.verified = true;
  if (residual > report.residual_tol) {
    report.verified = false;
    report.message += "interior residual above tolerance; ";
  }
  if (boundary > report.boundary_tol) {
    report.verified = false;
    report.message += "boundary trace above tolerance; ";
  }
  if (report.arc_mismatch > 1e-6) {
    report.verified = false;
    report.message += "boundary data differ between the two arcs; ";
  }
  if (report.verified) report.message = "ok";
  return {std::move(u), std::move(solution), report};
}

double mode_coefficient(double c, double lambda, const EigenMode& mode, double t) {
  const double e = mode.eigenvalue;
  const double D = mode.laplace_scale;
  const double gap = lambda * lambda - e;
  if (std::abs(gap) < 1e-12) return -c * t * std::sin(lambda * t) / (2.0 * lambda * D);
  const double mu = std::sqrt(e);
  // cos(lambda t) - cos(mu t) in product form, with lambda - mu = gap / (lambda + mu).
  const double diff = -2.0 * std::sin(0.5 * (lambda + mu) * t) * std::sin(0.5 * gap / (lambda + mu) * t);
  return c * diff / (D * gap);
}

double energy_h10(std::span<const double> coefficients, std::span<const EigenMode> modes) {
  if (coefficients.size() != modes.size()) throw InputError("energy_h10: size mismatch");
  double e = 0.0;
  for (std::size_t m = 0; m < modes.size(); ++m) e += coefficients[m] * coefficients[m] * modes[m].h10_norm2;
  return e;
}

EvolutionTrace evolve_modal(std::span<const double> coefficients, double lambda,
                            std::span<const EigenMode> modes, std::span<const double> times,
                            int snapshots) {
  LambdaContext ctx(lambda);
  if (coefficients.size() != modes.size()) throw InputError("evolve_modal: size mismatch");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw InputError("evolve_modal: times must increase strictly");
  }
  EvolutionTrace trace;
  trace.times.assign(times.begin(), times.end());
  trace.energy_h10.assign(times.size(), 0.0);
  std::vector<std::size_t> snap_idx;
  if (snapshots > 0 && !times.empty()) {
    for (int s = 0; s < snapshots; ++s) {
      const std::size_t idx = snapshots == 1 ? times.size() - 1
                                             : s * (times.size() - 1) / static_cast<std::size_t>(snapshots - 1);
      if (snap_idx.empty() || snap_idx.back() != idx) snap_idx.push_back(idx);
    }
    trace.snapshots.assign(snap_idx.size(), std::vector<double>(modes.size(), 0.0));
    for (std::size_t idx : snap_idx) trace.snapshot_times.push_back(times[idx]);
  }
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const double c = coefficients[m];
    if (c == 0.0) continue;
    const double weight = modes[m].h10_norm2;
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double a = mode_coefficient(c, lambda, modes[m], times[k]);
      trace.energy_h10[k] += a * a * weight;
    }
    for (std::size_t s = 0; s < snap_idx.size(); ++s) {
      trace.snapshots[s][m] = mode_coefficient(c, lambda, modes[m], times[snap_idx[s]]);
    }
  }
  trace.norm_hminus1.resize(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) trace.norm_hminus1[k] = std::sqrt(trace.energy_h10[k]);
  const GrowthFit g = detect_growth(trace.times, trace.energy_h10);
  trace.growth = g.growing;
  trace.growth_slope = g.slope;
  return trace;
}

EvolutionTrace evolve_square(const std::function<double(Point2)>& f, double lambda,
                             std::span<const double> times, int k_max, double tail_tol,
                             int snapshots) {
  const auto modes = square_modes(k_max);
  const Eigen::MatrixXd c = square_sine_coefficients(f, k_max, std::max(512, 4 * k_max));
  std::vector<double> coeffs(modes.size());
  double total = 0.0, tail = 0.0, cmax = 0.0;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    coeffs[m] = c(modes[m].i - 1, modes[m].j - 1);
    cmax = std::max(cmax, std::abs(coeffs[m]));
    const double mass = std::pow(coeffs[m] / modes[m].kappa, 2);
    total += mass;
    if (std::max(modes[m].i, modes[m].j) > k_max / 2) tail += mass;
  }
  // Quadrature noise on modes the forcing does not excite.
  for (auto& x : coeffs) {
    if (std::abs(x) <= 1e-15 * cmax) x = 0.0;
  }
  const double tail_estimate = total > 0.0 ? tail / total : 0.0;
  if (tail_estimate > tail_tol) {
    throw QuadratureError("forcing is not resolved by the mode cutoff (tail " +
                          std::to_string(tail_estimate) + ")");
  }
  EvolutionTrace trace = evolve_modal(coeffs, lambda, modes, times, snapshots);
  trace.tail_estimate = tail_estimate;
  return trace;
}

std::vector<double> log_time_grid(double t_min, double t_max, int per_decade) {
  if (!(t_min > 0.0 && t_max > t_min) || per_decade < 1) {
    throw InputError("log_time_grid needs 0 < t_min < t_max and per_decade >= 1");
  }
  const int count = std::max(2, static_cast<int>(std::ceil(std::log10(t_max / t_min) * per_decade)) + 1);
  std::vector<double> t{0.0};
  const auto body = log_space(t_min, t_max, count);
  t.insert(t.end(), body.begin(), body.end());
  return t;
}

std::vector<double> uniform_time_grid(double t_max, double dt) {
  if (!(dt > 0.0 && t_max > 0.0)) throw InputError("uniform_time_grid needs positive t_max and dt");
  const auto steps = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
  std::vector<double> t(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) t[k] = dt * static_cast<double>(k);
  return t;
}

GrowthFit detect_growth(std::span<const double> times, std::span<const double> energy) {
  GrowthFit fit;
  if (times.size() != energy.size() || times.size() < 4) return fit;
  double t_first = 0.0;
  for (double t : times) {
    if (t > 0.0) {
      t_first = t;
      break;
    }
  }
  if (t_first <= 0.0) return fit;
  const double t_mid = std::sqrt(t_first * times.back());
  std::vector<double> xs, ys;
  double envelope = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    envelope = std::max(envelope, energy[k]);
    if (times[k] >= t_mid && envelope > 0.0) {
      xs.push_back(std::log(times[k]));
      ys.push_back(std::log(envelope));
    }
  }
  if (xs.size() < 2) return fit;
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double den = n * sxx - sx * sx;
  if (den <= 0.0) return fit;
  fit.slope = (n * sxy - sx * sy) / den;
  fit.growing = fit.slope > 0.5;
  return fit;
}

double sup_until(std::span<const double> times, std::span<const double> energy, double horizon) {
  double m = 0.0;
  for (std::size_t k = 0; k < times.size() && k < energy.size(); ++k) {
    if (times[k] > horizon) break;
    m = std::max(m, energy[k]);
  }
  return m;
}

}  // namespace iwaves
