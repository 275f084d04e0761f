#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "iwaves/geometry.hpp"

namespace iwaves {

enum class DomainTag { square, rectangle, disk, transported };

std::string to_string(DomainTag tag);

/// Reduced fraction num/den with den > 0.
struct Fraction {
  long long num = 0;
  long long den = 1;

  static Fraction reduced(long long num, long long den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  auto operator<=>(const Fraction&) const = default;
};

struct Jet2 {
  double value = 0.0;
  Eigen::Vector2d gradient = Eigen::Vector2d::Zero();
  Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();
};

/// One eigenpair of P.
///
/// `profile` is the stationary profile v with -Laplace(v) = D * phi, where
/// phi is the eigenfunction of P used for forcing and spectral measures.
/// For the square phi = v = sin(pi k1 x1) sin(pi k2 x2) and D = pi^2 |k|^2;
/// for disk and transported modes v = -u_{k,N}, phi = Laplace(u_{k,N}) and
/// D = 1. The profile vanishes on the boundary.
struct EigenMode {
  DomainTag tag = DomainTag::square;
  int i = 0;  // square/rectangle: k1; disk/transported: k
  int j = 0;  // square/rectangle: k2; disk/transported: N
  /// Eigenvalue of P, i.e. lambda^2 at which P(lambda) v = 0.
  double eigenvalue = 0.0;
  /// Modes sharing a key share an eigenvalue.
  Fraction key;
  /// The eigenvalue as a fraction when it is rational.
  std::optional<Fraction> exact_eigenvalue;
  double laplace_scale = 1.0;  // D
  double h10_norm2 = 0.0;      // |grad v|^2 integrated over the domain
  /// 1 / |phi|_{H^-1}
  double kappa = 0.0;
  std::function<Jet2(Point2)> profile;
  /// Affine map x -> to_disk * (x - center) onto the unit disk (disk and
  /// transported modes); used for quadrature.
  Eigen::Matrix2d to_disk = Eigen::Matrix2d::Identity();
  Eigen::Vector2d center = Eigen::Vector2d::Zero();

  double value(Point2 x) const { return profile(x).value; }
  /// phi(x) = -Laplace(v)(x) / D
  double forcing(Point2 x) const;
  /// (1 - e) d^2v/dx2^2 - e d^2v/dx1^2 with e = eigenvalue.
  double eigen_residual(Point2 x) const;
  double lambda() const;
};

/// Sine modes on [0,1]^2 with max(k1, k2) <= k_max, ordered by (k1, k2).
std::vector<EigenMode> square_modes(int k_max);
/// Sine modes on [0,a] x [0,b].
std::vector<EigenMode> rectangle_modes(double a, double b, int k_max);

/// u_{k,N}(x) = T_N(x . (cos a, sin a)) - (-1)^k T_N(x . (cos a, -sin a)),
/// a = pi k / (2N), on the unit disk, with eigenvalue sin^2(pi k / (2N)).
EigenMode disk_mode(int k, int N);
/// All disk modes with 2 <= N <= N_max, 1 <= k <= N - 1, ordered by (N, k).
std::vector<EigenMode> disk_modes(int N_max);

/// r(lambda) = lambda / (sqrt(1 - lambda^2) + lambda)
double square_rotation_number(double lambda);
/// Same for [0,a] x [0,b].
double rectangle_rotation_number(double lambda, double a, double b);
/// r(lambda) = 1 - (2/pi) arccos(lambda)
double disk_rotation_number(double lambda);
/// lambda with disk_rotation_number(lambda) = r.
double disk_lambda_for_rotation(double r);

/// Linear transport of P(lambda) on the ellipse A * disk + v to c P(sigma)
/// on the disk, in coordinates y = R A^{-1} (x - v) = Q (x - v).
struct EllipseTransport {
  Eigen::Matrix2d A;
  Eigen::Vector2d v;
  double lambda = 0.0;
  Eigen::Matrix2d R;  // rotation, det = +1, R(0,0) >= 0
  Eigen::Matrix2d Q;  // R A^{-1}
  double rotation_angle = 0.0;
  double sigma = 0.0;
  double c = 0.0;
};

/// Requires A symmetric and nonsingular.
EllipseTransport map_ellipse(const Eigen::Matrix2d& A, const Eigen::Vector2d& v, double lambda);
/// lambda in (0,1) whose transport has sigma(lambda) = sigma.
double ellipse_lambda_for_sigma(const Eigen::Matrix2d& A, double sigma);
/// The disk mode (k, N) pulled back to the ellipse A * disk + v; its
/// eigenvalue is lambda*^2 with sigma(lambda*) = sin(pi k / (2N)).
EigenMode transported_disk_mode(const Eigen::Matrix2d& A, const Eigen::Vector2d& v, int k, int N);

/// 4 * integral f sin(pi k1 x1) sin(pi k2 x2) over [0,1]^2 for
/// 1 <= k1, k2 <= k_max, by the midpoint rule on n x n cells. Entry
/// (k1-1, k2-1) is the coefficient of the sine mode, so f = sum c phi.
Eigen::MatrixXd square_sine_coefficients(const std::function<double(Point2)>& f, int k_max,
                                         int n = 512);

struct SpectralAtom {
  double position = 0.0;
  Fraction key;
  std::optional<Fraction> exact;
  double mass = 0.0;
};

struct SpectralMeasureHistogram {
  std::vector<SpectralAtom> atoms;  // sorted by position
  double total = 0.0;
  /// Mass fraction carried by the outer half of the mode range; a proxy for
  /// truncation error.
  double tail_estimate = 0.0;
  std::string provenance;

  double interval_mass(double center, double epsilon) const;
};

/// mu_f for f = sum_m c_m phi_m. Atoms with equal keys are merged through
/// the H^-1 Gram matrix of their modes (diagonal for the square).
SpectralMeasureHistogram spectral_measure(std::span<const double> coefficients,
                                          std::span<const EigenMode> modes,
                                          std::string provenance = {});

/// mu_f for a function f on the domain of `modes` (square, rectangle, disk,
/// or transported modes sharing one ellipse). Throws QuadratureError when
/// the tail estimate exceeds `tail_tol`.
SpectralMeasureHistogram spectral_measure(const std::function<double(Point2)>& f,
                                          std::span<const EigenMode> modes,
                                          std::string provenance = {}, double tail_tol = 1e-3);

struct EpsilonSweep {
  std::vector<double> epsilon;
  std::vector<double> mass;
  /// Least-squares slope of log mass against log epsilon over entries with
  /// positive mass (NaN with fewer than two).
  double slope = 0.0;
};

EpsilonSweep epsilon_sweep(const SpectralMeasureHistogram& mu, double center,
                           std::span<const double> epsilons);

/// n log-spaced values from a to b inclusive.
std::vector<double> log_space(double a, double b, int n);

/// Gram matrix <phi_i, phi_j>_{H^-1} of disk-type modes by quadrature.
Eigen::MatrixXd hminus1_gram(std::span<const EigenMode> modes);

}  // namespace iwaves
