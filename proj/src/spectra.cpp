#include "iwaves/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include "iwaves/chebyshev.hpp"
#include "iwaves/errors.hpp"

namespace iwaves {

namespace {

constexpr double kPi = std::numbers::pi;

bool disk_type(const EigenMode& m) {
  return m.tag == DomainTag::disk || m.tag == DomainTag::transported;
}

// Integral over the unit disk: 64-point Gauss-Legendre in r, 128-point
// trapezoid in the angle.
template <class F>
double disk_integral(F&& g) {
  using Rule = boost::math::quadrature::gauss<double, 64>;
  static const auto nodes = [] {
    std::vector<std::pair<double, double>> out;  // (r, weight) on [0, 1]
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r1 = 0.5 * (1.0 + x[i]);
      const double r2 = 0.5 * (1.0 - x[i]);
      out.emplace_back(r1, 0.5 * w[i]);
      if (x[i] != 0.0) out.emplace_back(r2, 0.5 * w[i]);
    }
    return out;
  }();
  constexpr int kAngles = 128;
  double acc = 0.0;
  for (const auto& [r, w] : nodes) {
    double ring = 0.0;
    for (int j = 0; j < kAngles; ++j) {
      const double phi = 2.0 * kPi * j / kAngles;
      ring += g(Eigen::Vector2d(r * std::cos(phi), r * std::sin(phi)));
    }
    acc += w * r * ring * (2.0 * kPi / kAngles);
  }
  return acc;
}

// Integral over the image of the unit disk under x = to_disk^{-1} y + center.
template <class F>
double mode_domain_integral(const EigenMode& m, F&& g) {
  const Eigen::Matrix2d from_disk = m.to_disk.inverse();
  const double jac = std::abs(from_disk.determinant());
  return jac * disk_integral([&](const Eigen::Vector2d& y) {
           const Eigen::Vector2d x = from_disk * y + m.center;
           return g(Point2{x(0), x(1)});
         });
}

Jet2 sine_jet(double w1, double w2, Point2 x) {
  const double s1 = std::sin(w1 * x.x1), c1 = std::cos(w1 * x.x1);
  const double s2 = std::sin(w2 * x.x2), c2 = std::cos(w2 * x.x2);
  Jet2 jet;
  jet.value = s1 * s2;
  jet.gradient << w1 * c1 * s2, w2 * s1 * c2;
  jet.hessian << -w1 * w1 * s1 * s2, w1 * w2 * c1 * c2, w1 * w2 * c1 * c2, -w2 * w2 * s1 * s2;
  return jet;
}

EigenMode sine_mode(double a, double b, int k1, int k2) {
  EigenMode m;
  m.tag = (a == 1.0 && b == 1.0) ? DomainTag::square : DomainTag::rectangle;
  m.i = k1;
  m.j = k2;
  const double w1 = kPi * k1 / a;
  const double w2 = kPi * k2 / b;
  m.laplace_scale = w1 * w1 + w2 * w2;
  m.eigenvalue = (w2 * w2) / m.laplace_scale;
  if (m.tag == DomainTag::square) {
    const long long n = static_cast<long long>(k2) * k2;
    m.exact_eigenvalue = Fraction::reduced(n, static_cast<long long>(k1) * k1 + n);
    m.key = *m.exact_eigenvalue;
  } else {
    m.key = Fraction::reduced(k2, k1);
  }
  m.h10_norm2 = 0.25 * a * b * m.laplace_scale;
  m.kappa = m.laplace_scale / std::sqrt(m.h10_norm2);
  m.profile = [w1, w2](Point2 x) { return sine_jet(w1, w2, x); };
  return m;
}

double h10_by_quadrature(const EigenMode& m) {
  return mode_domain_integral(m, [&](Point2 x) { return m.profile(x).gradient.squaredNorm(); });
}

// sin^2(pi r / 2) is rational for rational r only at r = 1/3, 1/2, 2/3.
std::optional<Fraction> exact_disk_eigenvalue(Fraction r) {
  if (r == Fraction{1, 3}) return Fraction{1, 4};
  if (r == Fraction{1, 2}) return Fraction{1, 2};
  if (r == Fraction{2, 3}) return Fraction{3, 4};
  return std::nullopt;
}

Eigen::MatrixXd sine_coefficients(const std::function<double(Point2)>& f, double a, double b,
                                  int k_max, int n) {
  if (k_max < 1 || n < 2 * k_max) throw InputError("sine coefficients: need n >= 2 k_max >= 2");
  Eigen::MatrixXd values(n, n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      values(p, q) = f({a * (p + 0.5) / n, b * (q + 0.5) / n});
    }
  }
  Eigen::MatrixXd s(k_max, n);
  for (int k = 1; k <= k_max; ++k) {
    for (int p = 0; p < n; ++p) s(k - 1, p) = std::sin(kPi * k * (p + 0.5) / n);
  }
  // 4/(ab) * integral = 4/(ab) * (ab/n^2) * sum = 4/n^2 * sum.
  return (4.0 / (static_cast<double>(n) * n)) * (s * values * s.transpose());
}

}  // namespace

std::string to_string(DomainTag tag) {
  switch (tag) {
    case DomainTag::square: return "square";
    case DomainTag::rectangle: return "rectangle";
    case DomainTag::disk: return "disk";
    case DomainTag::transported: return "transported";
  }
  return "unknown";
}

Fraction Fraction::reduced(long long num, long long den) {
  if (den == 0) throw InputError("fraction with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  return g > 0 ? Fraction{num / g, den / g} : Fraction{0, 1};
}

double EigenMode::forcing(Point2 x) const {
  return -profile(x).hessian.trace() / laplace_scale;
}

double EigenMode::eigen_residual(Point2 x) const {
  const Eigen::Matrix2d h = profile(x).hessian;
  return (1.0 - eigenvalue) * h(1, 1) - eigenvalue * h(0, 0);
}

double EigenMode::lambda() const { return std::sqrt(eigenvalue); }

std::vector<EigenMode> square_modes(int k_max) { return rectangle_modes(1.0, 1.0, k_max); }

std::vector<EigenMode> rectangle_modes(double a, double b, int k_max) {
  if (k_max < 1) throw InputError("mode cutoff must be at least 1");
  if (!(a > 0.0 && b > 0.0)) throw InputError("rectangle sides must be positive");
  std::vector<EigenMode> out;
  out.reserve(static_cast<std::size_t>(k_max) * k_max);
  for (int k1 = 1; k1 <= k_max; ++k1) {
    for (int k2 = 1; k2 <= k_max; ++k2) out.push_back(sine_mode(a, b, k1, k2));
  }
  return out;
}

EigenMode disk_mode(int k, int N) {
  if (N < 2 || k < 1 || k >= N) throw InputError("disk mode needs 1 <= k <= N - 1");
  EigenMode m;
  m.tag = DomainTag::disk;
  m.i = k;
  m.j = N;
  const double alpha = 0.5 * kPi * k / N;
  const double lam = std::sin(alpha);
  m.eigenvalue = lam * lam;
  m.key = Fraction::reduced(k, N);
  m.exact_eigenvalue = exact_disk_eigenvalue(m.key);
  m.laplace_scale = 1.0;
  const Eigen::Vector2d a1(std::cos(alpha), std::sin(alpha));
  const Eigen::Vector2d a2(std::cos(alpha), -std::sin(alpha));
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  m.profile = [a1, a2, sign, N](Point2 x) {
    const Eigen::Vector2d p(x.x1, x.x2);
    const ChebyshevJet t1 = chebyshev_t(N, p.dot(a1));
    const ChebyshevJet t2 = chebyshev_t(N, p.dot(a2));
    // v = -u_{k,N}
    Jet2 jet;
    jet.value = -(t1.value - sign * t2.value);
    jet.gradient = -(t1.first * a1 - sign * t2.first * a2);
    jet.hessian = -(t1.second * a1 * a1.transpose() - sign * t2.second * a2 * a2.transpose());
    return jet;
  };
  m.h10_norm2 = h10_by_quadrature(m);
  m.kappa = m.laplace_scale / std::sqrt(m.h10_norm2);
  return m;
}

std::vector<EigenMode> disk_modes(int N_max) {
  if (N_max < 2) throw InputError("disk modes need N_max >= 2");
  std::vector<EigenMode> out;
  for (int N = 2; N <= N_max; ++N) {
    for (int k = 1; k < N; ++k) out.push_back(disk_mode(k, N));
  }
  return out;
}

double square_rotation_number(double lambda) {
  LambdaContext ctx(lambda);
  return lambda / (std::sqrt((1.0 - lambda) * (1.0 + lambda)) + lambda);
}

double rectangle_rotation_number(double lambda, double a, double b) {
  LambdaContext ctx(lambda);
  const double t = b * lambda;
  return t / (a * std::sqrt((1.0 - lambda) * (1.0 + lambda)) + t);
}

double disk_rotation_number(double lambda) {
  LambdaContext ctx(lambda);
  return 1.0 - (2.0 / kPi) * std::acos(lambda);
}

double disk_lambda_for_rotation(double r) {
  if (!(r > 0.0 && r < 1.0)) throw InputError("rotation number must lie in (0, 1)");
  return std::sin(0.5 * kPi * r);
}

EllipseTransport map_ellipse(const Eigen::Matrix2d& A, const Eigen::Vector2d& v, double lambda) {
  const LambdaContext ctx(lambda);
  const double scale = A.cwiseAbs().maxCoeff();
  if (std::abs(A(0, 1) - A(1, 0)) > 1e-12 * scale) throw InputError("ellipse matrix must be symmetric");
  if (!(std::abs(A.determinant()) > 1e-14 * scale * scale)) {
    throw InputError("ellipse matrix is singular");
  }
  EllipseTransport t;
  t.A = A;
  t.v = v;
  t.lambda = lambda;
  const Eigen::Matrix2d M = Eigen::Vector2d(-lambda * lambda, 1.0 - lambda * lambda).asDiagonal();
  const Eigen::Matrix2d inv = A.inverse();
  Eigen::Matrix2d B0 = inv * M * inv.transpose();
  B0 = 0.5 * (B0 + B0.transpose()).eval();
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(B0);
  // The product mu1 mu2 = det B0 is known exactly; recover the smaller
  // eigenvalue from it to avoid cancellation at small lambda.
  const double det = -(lambda * lambda) * ((1.0 - lambda) * (1.0 + lambda)) /
                     (A.determinant() * A.determinant());
  double mu1 = eig.eigenvalues()(0);
  double mu2 = eig.eigenvalues()(1);
  if (std::abs(mu2) >= std::abs(mu1)) {
    mu1 = det / mu2;
  } else {
    mu2 = det / mu1;
  }
  if (!(mu1 < 0.0 && mu2 > 0.0)) throw NumericalError("transported operator is not hyperbolic");
  Eigen::Matrix2d V = eig.eigenvectors();
  if (V.determinant() < 0.0) V.col(1) *= -1.0;
  t.R = V.transpose();
  if (t.R(0, 0) < 0.0) t.R *= -1.0;
  t.Q = t.R * inv;
  t.rotation_angle = std::atan2(t.R(1, 0), t.R(0, 0));
  t.c = mu2 - mu1;
  t.sigma = std::sqrt(-mu1 / t.c);
  return t;
}

double ellipse_lambda_for_sigma(const Eigen::Matrix2d& A, double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw InputError("sigma must lie in (0, 1)");
  auto f = [&](double l) { return map_ellipse(A, Eigen::Vector2d::Zero(), l).sigma - sigma; };
  double lo = 1e-12, hi = 1.0 - 1e-12;
  const double flo = f(lo), fhi = f(hi);
  if ((flo > 0.0) == (fhi > 0.0)) throw TargetUnreachableError("sigma not attained");
  std::uintmax_t iters = 200;
  auto stop = [](double a, double b) { return std::abs(b - a) <= 1e-16; };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, stop, iters);
  return 0.5 * (a + b);
}

EigenMode transported_disk_mode(const Eigen::Matrix2d& A, const Eigen::Vector2d& v, int k,
                                int N) {
  EigenMode base = disk_mode(k, N);
  const double lambda_star = ellipse_lambda_for_sigma(A, std::sqrt(base.eigenvalue));
  const EllipseTransport t = map_ellipse(A, v, lambda_star);
  EigenMode m = base;
  m.tag = DomainTag::transported;
  m.eigenvalue = lambda_star * lambda_star;
  m.exact_eigenvalue.reset();
  m.to_disk = t.Q;
  m.center = v;
  const Eigen::Matrix2d Q = t.Q;
  const Eigen::Vector2d shift = v;
  auto inner = base.profile;
  m.profile = [inner, Q, shift](Point2 x) {
    const Eigen::Vector2d y = Q * (Eigen::Vector2d(x.x1, x.x2) - shift);
    const Jet2 j = inner({y(0), y(1)});
    Jet2 out;
    out.value = j.value;
    out.gradient = Q.transpose() * j.gradient;
    out.hessian = Q.transpose() * j.hessian * Q;
    return out;
  };
  m.h10_norm2 = h10_by_quadrature(m);
  m.kappa = m.laplace_scale / std::sqrt(m.h10_norm2);
  return m;
}

Eigen::MatrixXd square_sine_coefficients(const std::function<double(Point2)>& f, int k_max, int n) {
  return sine_coefficients(f, 1.0, 1.0, k_max, n);
}

double SpectralMeasureHistogram::interval_mass(double center, double epsilon) const {
  if (!(epsilon > 0.0)) throw InputError("interval half-width must be positive");
  const auto lo = std::lower_bound(atoms.begin(), atoms.end(), center - epsilon,
                                   [](const SpectralAtom& a, double x) { return a.position < x; });
  double mass = 0.0;
  for (auto it = lo; it != atoms.end() && it->position <= center + epsilon; ++it) mass += it->mass;
  return mass;
}

Eigen::MatrixXd hminus1_gram(std::span<const EigenMode> modes) {
  const auto n = static_cast<Eigen::Index>(modes.size());
  Eigen::MatrixXd G(n, n);
  if (n == 0) return G;
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a; b < n; ++b) {
      const EigenMode& ma = modes[a];
      const EigenMode& mb = modes[b];
      const double ip = mode_domain_integral(ma, [&](Point2 x) {
        return ma.profile(x).gradient.dot(mb.profile(x).gradient);
      });
      G(a, b) = G(b, a) = ip / (ma.laplace_scale * mb.laplace_scale);
    }
  }
  return G;
}

namespace {

using Groups = std::map<Fraction, std::vector<std::size_t>>;

Groups group_by_key(std::span<const EigenMode> modes) {
  Groups groups;
  for (std::size_t m = 0; m < modes.size(); ++m) groups[modes[m].key].push_back(m);
  return groups;
}

SpectralMeasureHistogram finish(std::vector<SpectralAtom> atoms, std::string provenance) {
  SpectralMeasureHistogram h;
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return a.position < b.position; });
  for (auto& a : atoms) {
    if (a.mass > 0.0) {
      h.total += a.mass;
      h.atoms.push_back(a);
    }
  }
  h.provenance = std::move(provenance);
  return h;
}

SpectralAtom atom_for(const EigenMode& m, double mass) {
  return {m.eigenvalue, m.key, m.exact_eigenvalue, mass};
}

}  // namespace

SpectralMeasureHistogram spectral_measure(std::span<const double> coefficients,
                                          std::span<const EigenMode> modes,
                                          std::string provenance) {
  if (coefficients.size() != modes.size()) {
    throw InputError("spectral_measure: one coefficient per mode is required");
  }
  std::vector<SpectralAtom> atoms;
  for (const auto& [key, members] : group_by_key(modes)) {
    double mass = 0.0;
    if (disk_type(modes[members.front()]) && members.size() > 1) {
      std::vector<EigenMode> group;
      Eigen::VectorXd c(static_cast<Eigen::Index>(members.size()));
      for (std::size_t i = 0; i < members.size(); ++i) {
        group.push_back(modes[members[i]]);
        c(static_cast<Eigen::Index>(i)) = coefficients[members[i]];
      }
      if (c.squaredNorm() > 0.0) mass = c.dot(hminus1_gram(group) * c);
    } else {
      for (std::size_t idx : members) {
        const double ck = coefficients[idx] / modes[idx].kappa;
        mass += ck * ck;
      }
    }
    atoms.push_back(atom_for(modes[members.front()], mass));
  }
  return finish(std::move(atoms), std::move(provenance));
}

SpectralMeasureHistogram spectral_measure(const std::function<double(Point2)>& f,
                                          std::span<const EigenMode> modes,
                                          std::string provenance, double tail_tol) {
  if (modes.empty()) return finish({}, std::move(provenance));
  const DomainTag tag = modes.front().tag;
  std::vector<SpectralAtom> atoms;
  // Weight of a mode in the truncation-tail estimate.
  std::vector<bool> outer(modes.size(), false);
  std::vector<double> mode_mass(modes.size(), 0.0);

  if (tag == DomainTag::square || tag == DomainTag::rectangle) {
    int k_max = 0;
    for (const auto& m : modes) k_max = std::max({k_max, m.i, m.j});
    // The sine frequencies recover the rectangle sides.
    const auto& m0 = modes.front();
    const double w1 = std::sqrt(std::max(0.0, m0.laplace_scale * (1.0 - m0.eigenvalue)));
    const double a = kPi * m0.i / w1;
    const double b = kPi * m0.j / std::sqrt(m0.laplace_scale * m0.eigenvalue);
    const int n = std::max(512, 4 * k_max);
    const Eigen::MatrixXd c = sine_coefficients(f, a, b, k_max, n);
    std::vector<double> coeffs(modes.size());
    for (std::size_t m = 0; m < modes.size(); ++m) {
      coeffs[m] = c(modes[m].i - 1, modes[m].j - 1);
      const double ck = coeffs[m] / modes[m].kappa;
      mode_mass[m] = ck * ck;
      outer[m] = std::max(modes[m].i, modes[m].j) > k_max / 2;
    }
    auto h = spectral_measure(coeffs, modes, std::move(provenance));
    double tail = 0.0, total = 0.0;
    for (std::size_t m = 0; m < modes.size(); ++m) {
      total += mode_mass[m];
      if (outer[m]) tail += mode_mass[m];
    }
    h.tail_estimate = total > 0.0 ? tail / total : 0.0;
    if (h.tail_estimate > tail_tol) {
      throw QuadratureError("spectral measure tail estimate " + std::to_string(h.tail_estimate) +
                            " exceeds tolerance");
    }
    return h;
  }

  // Disk-type: b_m = <f, phi_m>_{H^-1} = <f, v_m>_{L2} / D_m, mass = b^T G^{-1} b per group.
  int n_max = 0;
  for (const auto& m : modes) n_max = std::max(n_max, m.j);
  double tail = 0.0, total = 0.0;
  for (const auto& [key, members] : group_by_key(modes)) {
    std::vector<EigenMode> group;
    Eigen::VectorXd bvec(static_cast<Eigen::Index>(members.size()));
    for (std::size_t i = 0; i < members.size(); ++i) {
      const EigenMode& m = modes[members[i]];
      group.push_back(m);
      bvec(static_cast<Eigen::Index>(i)) =
          mode_domain_integral(m, [&](Point2 x) { return f(x) * m.profile(x).value; }) /
          m.laplace_scale;
    }
    const Eigen::MatrixXd G = hminus1_gram(group);
    const double mass = bvec.dot(G.completeOrthogonalDecomposition().solve(bvec));
    total += mass;
    // Tail: the part of the group mass not captured by its low-degree members.
    std::vector<Eigen::Index> inner;
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (modes[members[i]].j <= n_max / 2) inner.push_back(static_cast<Eigen::Index>(i));
    }
    double inner_mass = 0.0;
    if (!inner.empty()) {
      const Eigen::VectorXd bi = bvec(inner);
      const Eigen::MatrixXd Gi = G(inner, inner);
      inner_mass = bi.dot(Gi.completeOrthogonalDecomposition().solve(bi));
    }
    tail += std::max(0.0, mass - inner_mass);
    atoms.push_back(atom_for(group.front(), mass));
  }
  auto h = finish(std::move(atoms), std::move(provenance));
  h.tail_estimate = total > 0.0 ? tail / total : 0.0;
  if (h.tail_estimate > tail_tol) {
    throw QuadratureError("spectral measure tail estimate " + std::to_string(h.tail_estimate) +
                          " exceeds tolerance");
  }
  return h;
}

EpsilonSweep epsilon_sweep(const SpectralMeasureHistogram& mu, double center,
                           std::span<const double> epsilons) {
  EpsilonSweep sweep;
  std::vector<double> xs, ys;
  for (double eps : epsilons) {
    const double m = mu.interval_mass(center, eps);
    sweep.epsilon.push_back(eps);
    sweep.mass.push_back(m);
    if (m > 0.0) {
      xs.push_back(std::log(eps));
      ys.push_back(std::log(m));
    }
  }
  if (xs.size() < 2) {
    sweep.slope = std::numeric_limits<double>::quiet_NaN();
    return sweep;
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double den = n * sxx - sx * sx;
  sweep.slope = den > 0.0 ? (n * sxy - sx * sy) / den : std::numeric_limits<double>::quiet_NaN();
  return sweep;
}

std::vector<double> log_space(double a, double b, int n) {
  if (!(a > 0.0 && b > 0.0) || n < 1) throw InputError("log_space needs positive ends and n >= 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = a;
    return out;
  }
  const double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i) out[i] = std::exp(la + (lb - la) * i / (n - 1));
  out.front() = a;
  out.back() = b;
  return out;
}

}  // namespace iwaves
