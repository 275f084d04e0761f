#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "iwaves/errors.hpp"
#include "iwaves/geometry.hpp"

namespace iwaves::cli {

/// Invalid command-line or JSON configuration (exit code 2).
class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

struct DomainSpec {
  enum class Kind { disk, square, rectangle, ellipse, rounded_square, file };
  Kind kind = Kind::disk;
  double a = 1.0, b = 1.0;  // rectangle sides
  Eigen::Matrix2d A = Eigen::Matrix2d::Identity();
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  double eta = 0.1;   // rounded square
  double tilt = 0.0;  // rounded square, radians
  std::string path;
  std::string text;  // as given
};

/// disk | square | rectangle:a,b | ellipse:a11,a12,a21,a22[,v1,v2] |
/// rounded-square:eta[,tilt_radians] | file:PATH | PATH.json
DomainSpec parse_domain(std::string_view text);
/// Boundary curve of a smooth domain; square and rectangle throw
/// UnsupportedDomainError.
BoundaryCurve domain_curve(const DomainSpec& domain);

/// a:b:n, n points from a to b inclusive (linear).
std::vector<double> parse_linear_grid(std::string_view text);
/// a:b:n, n points from a to b inclusive (logarithmic).
std::vector<double> parse_log_grid(std::string_view text);

struct RunConfig {
  std::string command;
  DomainSpec domain;
  std::vector<double> lambdas;
  long orbit = 1'000'000;
  long q_max = 10'000;
  int kmax = 32;
  int nmax = 5;
  int grid = 101;
  std::vector<double> epsilons;
  std::string forcing = "default";
  double t_min = 1e-2;
  double t_max = 1e3;
  int per_decade = 2048;
  std::string out;
  std::uint64_t seed = 0;

  /// Sorted-key JSON of every field except the output path.
  std::string canonical() const;
};

/// Parses argv; the first positional word is the command. Throws
/// ConfigError on invalid input. Returns false in `run` for --help.
RunConfig parse_command_line(int argc, const char* const* argv, bool* help_requested = nullptr);
/// Applies a JSON configuration object on top of `base`.
RunConfig apply_json(RunConfig base, std::string_view json_text);
void validate(const RunConfig& config);

}  // namespace iwaves::cli
