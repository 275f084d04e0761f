#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>

#include <fmt/core.h>
#include <json.hpp>

#include "iwaves/dynamics.hpp"
#include "iwaves/grid.hpp"
#include "iwaves/io.hpp"
#include "iwaves/solver.hpp"
#include "iwaves/spectra.hpp"

namespace iwaves::cli {

namespace fs = std::filesystem;

namespace {

using Field = std::function<double(Point2)>;

std::string num(double x) { return format_double(x); }

std::vector<std::string> header(const RunConfig& c) { return {header_line(c.canonical())}; }

fs::path out_dir(const RunConfig& c) { return c.out.empty() ? fs::path(c.command) : fs::path(c.out); }

void emit(const RunConfig& c, const std::string& text, const std::string& default_name) {
  if (c.out.empty() && default_name.empty()) {
    std::cout << text;
    return;
  }
  write_text(c.out.empty() ? fs::path(default_name) : fs::path(c.out), text);
}

bool polygonal(const DomainSpec& d) {
  return d.kind == DomainSpec::Kind::square || d.kind == DomainSpec::Kind::rectangle;
}

double require_single_lambda(const RunConfig& c) {
  if (c.lambdas.size() != 1) throw ConfigError(c.command + " needs exactly one --lambda");
  return c.lambdas.front();
}

// Center and size used to place the default bump.
std::pair<Point2, double> domain_frame(const DomainSpec& d) {
  switch (d.kind) {
    case DomainSpec::Kind::square: return {{0.5, 0.5}, 0.5};
    case DomainSpec::Kind::rectangle: return {{d.a / 2, d.b / 2}, std::min(d.a, d.b) / 2};
    case DomainSpec::Kind::disk: return {{0.0, 0.0}, 1.0};
    case DomainSpec::Kind::ellipse: {
      Eigen::JacobiSVD<Eigen::Matrix2d> svd(d.A);
      return {{d.v(0), d.v(1)}, svd.singularValues()(1)};
    }
    default: {
      const auto box = domain_curve(d).bounding_box();
      return {{(box[0] + box[1]) / 2, (box[2] + box[3]) / 2},
              std::min(box[1] - box[0], box[3] - box[2]) / 2};
    }
  }
}

Field bump(Point2 center, double radius) {
  return [center, radius](Point2 x) {
    const double dx = x.x1 - center.x1, dy = x.x2 - center.x2;
    const double q = (dx * dx + dy * dy) / (radius * radius);
    return q < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - q)) : 0.0;
  };
}

// one | bump[:fraction of the domain half-width] | poly
Field parse_forcing(const std::string& spec, const DomainSpec& d, const std::string& fallback) {
  const std::string s = spec == "default" ? fallback : spec;
  if (s == "one") return [](Point2) { return 1.0; };
  if (s == "poly") return [](Point2 x) { return 1.0 + x.x1 - 0.5 * x.x2 + x.x1 * x.x2; };
  if (s.rfind("bump", 0) == 0) {
    double fraction = 0.6;
    if (s.size() > 4) {
      if (s[4] != ':') throw ConfigError("bad forcing '" + s + "'");
      try {
        fraction = std::stod(s.substr(5));
      } catch (const std::logic_error&) {
        throw ConfigError("bad bump radius in '" + s + "'");
      }
      if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("bump radius must lie in (0, 1]");
    }
    const auto [center, half] = domain_frame(d);
    return bump(center, fraction * half);
  }
  throw ConfigError("unknown forcing '" + s + "'");
}

std::vector<EigenMode> closed_form_modes(const RunConfig& c) {
  const auto& d = c.domain;
  switch (d.kind) {
    case DomainSpec::Kind::square: return square_modes(c.kmax);
    case DomainSpec::Kind::rectangle: return rectangle_modes(d.a, d.b, c.kmax);
    case DomainSpec::Kind::disk: return disk_modes(c.nmax);
    case DomainSpec::Kind::ellipse: {
      std::vector<EigenMode> modes;
      for (int N = 2; N <= c.nmax; ++N) {
        for (int k = 1; k < N; ++k) modes.push_back(transported_disk_mode(d.A, d.v, k, N));
      }
      return modes;
    }
    default:
      throw UnsupportedDomainError("closed-form eigenmodes exist only for square, rectangle, disk and ellipse");
  }
}

std::string fraction_text(const std::optional<Fraction>& f, bool numerator) {
  if (!f) return "0";
  return std::to_string(numerator ? f->num : f->den);
}

}  // namespace

int cmd_rotnum(const RunConfig& c) {
  if (c.lambdas.empty()) throw ConfigError("rotnum needs --lambda or --lambda-grid");
  CsvWriter csv(header(c), {"lambda", "rotation", "error", "locked", "q"});
  const auto& d = c.domain;
  if (polygonal(d)) {
    for (double l : c.lambdas) {
      const double r = d.kind == DomainSpec::Kind::square ? square_rotation_number(l)
                                                          : rectangle_rotation_number(l, d.a, d.b);
      csv.row({num(l), num(r), num(0.0), "0", "0"});
    }
  } else {
    const auto curve = domain_curve(d);
    for (const auto& pt : rotation_curve(curve, c.lambdas, c.orbit, c.q_max)) {
      if (!pt.simple) {
        csv.row({num(pt.lambda), "nan", "nan", "0", "0"});
        continue;
      }
      const auto& e = pt.estimate;
      csv.row({num(pt.lambda), num(e.value), num(e.error_bound), e.locked() ? "1" : "0",
               std::to_string(e.q)});
    }
  }
  emit(c, csv.str(), "");
  return kOk;
}

int cmd_eigs(const RunConfig& c) {
  const auto modes = closed_form_modes(c);
  const fs::path dir = out_dir(c);
  const auto& d = c.domain;
  CsvWriter index(header(c), {"file", "tag", "i", "j", "eigenvalue", "lambda", "eigenvalue_num", "eigenvalue_den"});
  std::optional<BoundaryCurve> curve;
  if (!polygonal(d)) curve = domain_curve(d);
  for (const auto& m : modes) {
    const std::string name = fmt::format("mode_{}_{}.csv", m.i, m.j);
    const Field u = [&m](Point2 x) { return m.value(x); };
    const GridFunction g = curve ? GridFunction(*curve, c.grid, u)
                                 : GridFunction::on_box({0.0, d.a, 0.0, d.b}, c.grid, u);
    CsvWriter out(header(c), {"x1", "x2", "inside", "u"});
    for (int i = 0; i < g.size(); ++i) {
      for (int j = 0; j < g.size(); ++j) {
        const Point2 p = g.point(i, j);
        out.row({num(p.x1), num(p.x2), g.inside(i, j) ? "1" : "0", num(g.value(i, j))});
      }
    }
    out.save(dir / name);
    index.row({name, to_string(m.tag), std::to_string(m.i), std::to_string(m.j), num(m.eigenvalue),
               num(m.lambda()), fraction_text(m.exact_eigenvalue, true),
               fraction_text(m.exact_eigenvalue, false)});
  }
  index.save(dir / "index.csv");
  return kOk;
}

int cmd_specmeasure(const RunConfig& c) {
  const auto modes = closed_form_modes(c);
  const Field f = parse_forcing(c.forcing, c.domain, "bump");
  const auto mu = spectral_measure(f, modes, c.forcing);
  const fs::path dir = out_dir(c);

  auto comments = header(c);
  comments.push_back(fmt::format("# total={} tail_estimate={}", num(mu.total), num(mu.tail_estimate)));
  CsvWriter hist(comments, {"eigenvalue_num", "eigenvalue_den", "position", "mass"});
  for (const auto& a : mu.atoms) {
    hist.row({fraction_text(a.exact, true), fraction_text(a.exact, false), num(a.position), num(a.mass)});
  }
  hist.save(dir / "histogram.csv");

  const auto epsilons = c.epsilons.empty() ? log_space(1e-4, 1e-1, 13) : c.epsilons;
  for (std::size_t i = 0; i < c.lambdas.size(); ++i) {
    const double l = c.lambdas[i];
    const auto sweep = epsilon_sweep(mu, l * l, epsilons);
    auto sc = header(c);
    sc.push_back(fmt::format("# lambda={} center={} slope={}", num(l), num(l * l), num(sweep.slope)));
    CsvWriter out(sc, {"epsilon", "mass"});
    for (std::size_t k = 0; k < sweep.epsilon.size(); ++k) out.row({num(sweep.epsilon[k]), num(sweep.mass[k])});
    out.save(dir / fmt::format("sweep_{}.csv", i));
  }
  return kOk;
}

int cmd_evolve(const RunConfig& c) {
  if (c.domain.kind != DomainSpec::Kind::square) {
    throw UnsupportedDomainError("evolve supports the unit square only");
  }
  const double lambda = require_single_lambda(c);
  const auto times = log_time_grid(c.t_min, c.t_max, c.per_decade);
  EvolutionTrace trace;
  if (c.forcing.rfind("mode:", 0) == 0) {
    std::vector<int> k;
    for (const std::string& part : {c.forcing.substr(5, c.forcing.find(',') - 5),
                                   c.forcing.substr(c.forcing.find(',') + 1)}) {
      try {
        k.push_back(std::stoi(part));
      } catch (const std::logic_error&) {
        throw ConfigError("forcing mode must look like mode:k1,k2");
      }
    }
    if (c.forcing.find(',') == std::string::npos || k[0] < 1 || k[1] < 1) {
      throw ConfigError("forcing mode must look like mode:k1,k2 with positive indices");
    }
    const auto all = square_modes(std::max(k[0], k[1]));
    const EigenMode mode = *std::find_if(all.begin(), all.end(),
                                         [&](const EigenMode& m) { return m.i == k[0] && m.j == k[1]; });
    const double one = 1.0;
    trace = evolve_modal(std::span(&one, 1), lambda, std::span(&mode, 1), times);
  } else {
    trace = evolve_square(parse_forcing(c.forcing, c.domain, "bump"), lambda, times, c.kmax);
  }
  auto comments = header(c);
  comments.push_back(fmt::format("# growth={} slope={} tail_estimate={}", trace.growth ? 1 : 0,
                                 num(trace.growth_slope), num(trace.tail_estimate)));
  CsvWriter out(comments, {"t", "energy_h10", "norm_hminus1"});
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    out.row({num(trace.times[i]), num(trace.energy_h10[i]), num(trace.norm_hminus1[i])});
  }
  emit(c, out.str(), "");
  return kOk;
}

int cmd_rightinv(const RunConfig& c) {
  const double lambda = require_single_lambda(c);
  const auto curve = domain_curve(c.domain);
  const Field f = parse_forcing(c.forcing, c.domain, "one");
  RightInverseOptions opt;
  opt.orbit = c.orbit;
  const auto result = right_inverse(curve, LambdaContext(lambda), GridFunction(curve, c.grid, f), opt);
  const auto& r = result.report;
  nlohmann::ordered_json j;
  j["residual"] = r.residual;
  j["boundary_norm"] = r.boundary_norm;
  j["residual_tol"] = r.residual_tol;
  j["boundary_tol"] = r.boundary_tol;
  j["lambda"] = r.lambda;
  j["rotation_number"] = r.rotation_number;
  j["conjugacy_residual"] = r.conjugacy_residual;
  j["zero_average_plus"] = r.zero_average_plus;
  j["zero_average_minus"] = r.zero_average_minus;
  j["arc_mismatch"] = r.arc_mismatch;
  j["cohomology_residual"] = r.cohomology_residual;
  j["fourier_order"] = r.fourier_order;
  j["chebyshev_order"] = r.chebyshev_order;
  j["verified"] = r.verified;
  j["message"] = r.message;
  // Round-trip float formatting for every number.
  std::string body = "{\n";
  bool first = true;
  for (const auto& [key, value] : j.items()) {
    body += first ? "" : ",\n";
    first = false;
    body += "  \"" + key + "\": " + (value.is_number_float() ? num(value.get<double>()) : value.dump());
  }
  body += "\n}\n";
  emit(c, header(c).front() + "\n" + body, "");
  if (!r.verified) {
    std::cerr << "iwaves: right inverse failed verification: " << r.message << "\n";
    return kNumericalError;
  }
  return kOk;
}

int run(const RunConfig& c) {
  if (c.command == "rotnum") return cmd_rotnum(c);
  if (c.command == "eigs") return cmd_eigs(c);
  if (c.command == "specmeasure") return cmd_specmeasure(c);
  if (c.command == "evolve") return cmd_evolve(c);
  if (c.command == "rightinv") return cmd_rightinv(c);
  throw ConfigError("unknown command '" + c.command + "'");
}

int main_entry(int argc, const char* const* argv) {
  try {
    bool help = false;
    const RunConfig c = parse_command_line(argc, argv, &help);
    if (help) return kOk;
    return run(c);
  } catch (const InputError& e) {
    std::cerr << "iwaves: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalError& e) {
    std::cerr << "iwaves: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "iwaves: " << e.what() << "\n";
    return kNumericalError;
  }
}

}  // namespace iwaves::cli
