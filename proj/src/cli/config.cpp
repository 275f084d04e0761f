#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "iwaves/spectra.hpp"

namespace iwaves::cli {

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("not a number: '" + s + "'");
  }
}

std::vector<double> numbers(std::string_view text) {
  std::vector<double> out;
  for (const auto& s : split(text, ',')) out.push_back(to_double(s));
  return out;
}

std::tuple<double, double, int> grid_triplet(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ConfigError("grid must look like a:b:n, got '" + std::string(text) + "'");
  const double a = to_double(parts[0]);
  const double b = to_double(parts[1]);
  const double n = to_double(parts[2]);
  if (n < 1 || n != std::floor(n)) throw ConfigError("grid point count must be a positive integer");
  return {a, b, static_cast<int>(n)};
}

}  // namespace

DomainSpec parse_domain(std::string_view text) {
  DomainSpec d;
  d.text = std::string(text);
  const auto colon = text.find(':');
  const std::string head(text.substr(0, colon));
  const std::string_view rest = colon == std::string_view::npos ? "" : text.substr(colon + 1);
  if (head == "disk" && rest.empty()) {
    d.kind = DomainSpec::Kind::disk;
  } else if (head == "square" && rest.empty()) {
    d.kind = DomainSpec::Kind::square;
  } else if (head == "rectangle") {
    const auto v = numbers(rest);
    if (v.size() != 2 || !(v[0] > 0 && v[1] > 0)) throw ConfigError("rectangle needs two positive sides");
    d.kind = DomainSpec::Kind::rectangle;
    d.a = v[0];
    d.b = v[1];
  } else if (head == "ellipse") {
    const auto v = numbers(rest);
    if (v.size() != 4 && v.size() != 6) throw ConfigError("ellipse needs a11,a12,a21,a22[,v1,v2]");
    d.kind = DomainSpec::Kind::ellipse;
    d.A << v[0], v[1], v[2], v[3];
    if (v.size() == 6) d.v << v[4], v[5];
    if (std::abs(d.A.determinant()) < 1e-12) throw ConfigError("ellipse matrix is singular");
  } else if (head == "rounded-square") {
    const auto v = numbers(rest);
    if (v.empty() || v.size() > 2) throw ConfigError("rounded-square needs eta[,tilt]");
    d.kind = DomainSpec::Kind::rounded_square;
    d.eta = v[0];
    if (v.size() == 2) d.tilt = v[1];
    if (!(d.eta >= 0.0 && d.eta < 1.0 / 3.0)) throw ConfigError("rounded-square eta must lie in [0, 1/3)");
  } else if (head == "file") {
    d.kind = DomainSpec::Kind::file;
    d.path = std::string(rest);
  } else if (text.size() > 5 && text.substr(text.size() - 5) == ".json") {
    d.kind = DomainSpec::Kind::file;
    d.path = std::string(text);
  } else {
    throw ConfigError("unknown domain '" + std::string(text) + "'");
  }
  return d;
}

BoundaryCurve domain_curve(const DomainSpec& d) {
  switch (d.kind) {
    case DomainSpec::Kind::disk: return BoundaryCurve::circle();
    case DomainSpec::Kind::ellipse: return BoundaryCurve::ellipse(d.A, {d.v(0), d.v(1)});
    case DomainSpec::Kind::rounded_square: return BoundaryCurve::rounded_square(d.eta, d.tilt);
    case DomainSpec::Kind::file: return load_boundary_file(d.path);
    case DomainSpec::Kind::square:
    case DomainSpec::Kind::rectangle:
      throw UnsupportedDomainError("polygonal domains have no smooth boundary curve");
  }
  throw UnsupportedDomainError("unknown domain");
}

std::vector<double> parse_linear_grid(std::string_view text) {
  const auto [a, b, n] = grid_triplet(text);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  if (n > 1) out.back() = b;
  return out;
}

std::vector<double> parse_log_grid(std::string_view text) {
  const auto [a, b, n] = grid_triplet(text);
  if (!(a > 0 && b > 0)) throw ConfigError("logarithmic grid needs positive ends");
  return log_space(a, b, n);
}

std::string RunConfig::canonical() const {
  nlohmann::json j;
  j["command"] = command;
  j["domain"] = domain.text;
  j["lambdas"] = lambdas;
  j["orbit"] = orbit;
  j["q_max"] = q_max;
  j["kmax"] = kmax;
  j["nmax"] = nmax;
  j["grid"] = grid;
  j["epsilons"] = epsilons;
  j["forcing"] = forcing;
  j["t_min"] = t_min;
  j["t_max"] = t_max;
  j["per_decade"] = per_decade;
  j["seed"] = seed;
  return j.dump();
}

RunConfig apply_json(RunConfig c, std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "command") c.command = value.get<std::string>();
      else if (key == "domain") c.domain = parse_domain(value.get<std::string>());
      else if (key == "lambda") {
        c.lambdas = value.is_array() ? value.get<std::vector<double>>()
                                     : std::vector<double>{value.get<double>()};
      } else if (key == "lambda_grid") c.lambdas = parse_linear_grid(value.get<std::string>());
      else if (key == "orbit") c.orbit = value.get<long>();
      else if (key == "q_max") c.q_max = value.get<long>();
      else if (key == "kmax") c.kmax = value.get<int>();
      else if (key == "nmax") c.nmax = value.get<int>();
      else if (key == "grid") c.grid = value.get<int>();
      else if (key == "epsilon_sweep") c.epsilons = parse_log_grid(value.get<std::string>());
      else if (key == "forcing") c.forcing = value.get<std::string>();
      else if (key == "tmin") c.t_min = value.get<double>();
      else if (key == "tmax") c.t_max = value.get<double>();
      else if (key == "per_decade") c.per_decade = value.get<int>();
      else if (key == "out") c.out = value.get<std::string>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else throw ConfigError("unknown configuration key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad configuration value: ") + e.what());
  }
  return c;
}

void validate(const RunConfig& c) {
  static const std::vector<std::string> commands{"rotnum", "eigs", "specmeasure", "evolve", "rightinv"};
  if (std::find(commands.begin(), commands.end(), c.command) == commands.end()) {
    throw ConfigError("unknown command '" + c.command + "'");
  }
  for (double l : c.lambdas) {
    if (!(l > 0.0 && l < 1.0)) throw ConfigError("lambda values must lie in (0, 1)");
  }
  if (c.orbit < 1000) throw ConfigError("--orbit must be at least 1000");
  if (c.q_max < 1 || c.kmax < 1 || c.nmax < 2 || c.grid < 3 || c.per_decade < 1) {
    throw ConfigError("budgets must be positive (nmax >= 2, grid >= 3)");
  }
  if (!(c.t_min > 0.0 && c.t_max > c.t_min)) throw ConfigError("need 0 < tmin < tmax");
  for (double e : c.epsilons) {
    if (!(e > 0.0)) throw ConfigError("epsilon values must be positive");
  }
}

RunConfig parse_command_line(int argc, const char* const* argv, bool* help_requested) {
  CLI::App app{"Numerical laboratory for internal waves in 2D domains", "iwaves"};
  app.require_subcommand(1);
  RunConfig c;
  std::string domain = "disk", lambda_grid, epsilon_sweep, config_path;
  std::vector<double> lambdas;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"rotnum", "rotation-number curve as CSV"},
      {"eigs", "closed-form eigenmode grids plus index.csv"},
      {"specmeasure", "spectral-measure histogram and epsilon sweeps"},
      {"evolve", "forced evolution energy trace"},
      {"rightinv", "stationary right inverse report as JSON"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--domain", domain, "disk | square | rectangle:a,b | ellipse:... | rounded-square:eta[,tilt] | file:PATH");
    sub->add_option("--lambda", lambdas, "forcing frequency (repeatable)");
    sub->add_option("--lambda-grid", lambda_grid, "a:b:n inclusive");
    sub->add_option("--orbit", c.orbit, "orbit length");
    sub->add_option("--qmax", c.q_max, "largest period tested for locking");
    sub->add_option("--kmax", c.kmax, "sine-mode cutoff");
    sub->add_option("--nmax", c.nmax, "disk-mode degree cutoff");
    sub->add_option("--grid", c.grid, "samples per side of output grids");
    sub->add_option("--epsilon-sweep", epsilon_sweep, "a:b:n log-spaced half-widths");
    sub->add_option("--forcing", c.forcing, "default | one | bump[:radius] | mode:k1,k2");
    sub->add_option("--tmin", c.t_min, "first positive time");
    sub->add_option("--tmax", c.t_max, "final time");
    sub->add_option("--per-decade", c.per_decade, "time samples per decade");
    sub->add_option("--out", c.out, "output file or directory");
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--config", config_path, "JSON configuration file");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    if (help_requested) *help_requested = true;
    std::cout << app.help();
    return c;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }
  auto* sub = app.get_subcommands().front();
  c.command = sub->get_name();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot read configuration " + config_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const RunConfig from_file = apply_json(c, buffer.str());
    // Explicit flags win over the file.
    RunConfig merged = from_file;
    auto given = [&](const char* flag) { return sub->count(flag) > 0; };
    if (given("--orbit")) merged.orbit = c.orbit;
    if (given("--qmax")) merged.q_max = c.q_max;
    if (given("--kmax")) merged.kmax = c.kmax;
    if (given("--nmax")) merged.nmax = c.nmax;
    if (given("--grid")) merged.grid = c.grid;
    if (given("--forcing")) merged.forcing = c.forcing;
    if (given("--tmin")) merged.t_min = c.t_min;
    if (given("--tmax")) merged.t_max = c.t_max;
    if (given("--per-decade")) merged.per_decade = c.per_decade;
    if (given("--out")) merged.out = c.out;
    if (given("--seed")) merged.seed = c.seed;
    if (given("--domain")) merged.domain = parse_domain(domain);
    if (given("--lambda")) merged.lambdas = lambdas;
    if (given("--lambda-grid")) merged.lambdas = parse_linear_grid(lambda_grid);
    if (given("--epsilon-sweep")) merged.epsilons = parse_log_grid(epsilon_sweep);
    merged.command = c.command;
    c = merged;
  } else {
    c.domain = parse_domain(domain);
    if (!lambda_grid.empty() && !lambdas.empty()) throw ConfigError("give --lambda or --lambda-grid, not both");
    c.lambdas = lambda_grid.empty() ? lambdas : parse_linear_grid(lambda_grid);
    if (!epsilon_sweep.empty()) c.epsilons = parse_log_grid(epsilon_sweep);
  }
  validate(c);
  return c;
}

}  // namespace iwaves::cli
