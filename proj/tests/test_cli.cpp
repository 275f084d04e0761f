#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "commands.hpp"
#include "config.hpp"
#include "iwaves/io.hpp"
#include "iwaves/spectra.hpp"

using namespace iwaves;
using namespace iwaves::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "iwaves_cli_test" / name;
  fs::remove_all(p);
  return p;
}

int tool(const std::string& args) {
  const int status = std::system((std::string(IWAVES_TOOL) + " " + args + " 2>/dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

RunConfig parse(std::vector<std::string> args) {
  args.insert(args.begin(), "iwaves");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse_command_line(static_cast<int>(argv.size()), argv.data());
}

double header_value(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + "=");
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size() + 1));
}

}  // namespace

TEST_CASE("domain and grid parsing") {
  CHECK(parse_domain("disk").kind == DomainSpec::Kind::disk);
  const auto r = parse_domain("rectangle:2,1");
  CHECK(r.kind == DomainSpec::Kind::rectangle);
  CHECK(r.a == 2.0);
  const auto e = parse_domain("ellipse:2,0,0,1,0.5,0");
  CHECK(e.A(0, 0) == 2.0);
  CHECK(e.v(0) == 0.5);
  CHECK(parse_domain("rounded-square:0.1,0.157").tilt == 0.157);
  CHECK(parse_domain("shape.json").kind == DomainSpec::Kind::file);
  CHECK_THROWS_AS(parse_domain("triangle"), ConfigError);
  CHECK_THROWS_AS(parse_domain("ellipse:1,1,1,1"), ConfigError);
  CHECK_THROWS_AS(domain_curve(parse_domain("square")), UnsupportedDomainError);

  const auto g = parse_linear_grid("0.1:0.9:5");
  REQUIRE(g.size() == 5);
  CHECK(g[2] == doctest::Approx(0.5));
  CHECK(g.back() == 0.9);
  CHECK(parse_log_grid("1e-4:1e-1:4")[1] == doctest::Approx(1e-3));
  CHECK_THROWS_AS(parse_linear_grid("0:1"), ConfigError);
  CHECK_THROWS_AS(parse_linear_grid("0:1:0"), ConfigError);
}

TEST_CASE("command line and JSON configuration") {
  const auto c = parse({"rotnum", "--domain", "square", "--lambda-grid", "0.1:0.9:9", "--orbit", "5000"});
  CHECK(c.command == "rotnum");
  CHECK(c.lambdas.size() == 9);
  CHECK(c.orbit == 5000);
  CHECK_THROWS_AS(parse({"rotnum", "--lambda", "1.5"}), ConfigError);
  CHECK_THROWS_AS(parse({"rotnum", "--lambda", "0.5", "--lambda-grid", "0.1:0.2:2"}), ConfigError);
  CHECK_THROWS_AS(parse({"frobnicate"}), ConfigError);
  CHECK_THROWS_AS(parse({"rotnum", "--orbit", "-3"}), ConfigError);

  const auto j = apply_json(c, R"({"kmax": 7, "lambda": [0.3, 0.4], "domain": "disk"})");
  CHECK(j.kmax == 7);
  CHECK(j.lambdas.size() == 2);
  CHECK(j.domain.kind == DomainSpec::Kind::disk);
  CHECK_THROWS_AS(apply_json(c, R"({"unknown": 1})"), ConfigError);
  CHECK_THROWS_AS(apply_json(c, "[1,2]"), ConfigError);

  const fs::path dir = scratch("config");
  write_text(dir / "run.json", R"({"lambda": [0.2], "kmax": 3, "orbit": 2000})");
  const auto f = parse({"eigs", "--config", (dir / "run.json").string(), "--kmax", "4"});
  CHECK(f.kmax == 4);
  CHECK(f.orbit == 2000);
  CHECK(f.lambdas == std::vector<double>{0.2});

  auto out1 = c, out2 = c;
  out1.out = "a.csv";
  out2.out = "b.csv";
  CHECK(out1.canonical() == out2.canonical());
}

TEST_CASE("rotnum") {
  const fs::path dir = scratch("rotnum");
  REQUIRE(tool(fmt::format("rotnum --domain disk --lambda-grid 0.01:0.99:101 --orbit 100000 --out {}",
                           (dir / "disk.csv").string())) == 0);
  const auto rows = csv_rows(dir / "disk.csv");
  REQUIRE(rows.size() == 101);
  for (const auto& r : rows) {
    const double l = std::stod(r[0]);
    CHECK(std::abs(std::stod(r[1]) - disk_rotation_number(l)) <= std::stod(r[2]) + 1e-12);
  }

  REQUIRE(tool(fmt::format("rotnum --domain square --lambda-grid 0.1:0.9:9 --out {}", (dir / "sq.csv").string())) == 0);
  for (const auto& r : csv_rows(dir / "sq.csv")) {
    CHECK(std::stod(r[1]) == doctest::Approx(square_rotation_number(std::stod(r[0]))).epsilon(1e-15));
  }

  CHECK(tool(fmt::format("rotnum --domain disk --out {}", (dir / "empty.csv").string())) == 2);
  CHECK(tool("rotnum --domain disk --lambda-grid 0.1:0.9:x") == 2);

  // A non-simple lambda is kept as a marked row.
  write_text(dir / "peanut.json",
             R"({"cos1":[0,1.3,0,0.3],"sin1":[0,0,0,0],"cos2":[0,0,0,0],"sin2":[0,0.7,0,0.3],"resolution":1024})");
  REQUIRE(tool(fmt::format("rotnum --domain {} --lambda 0.95 --lambda 0.5 --orbit 10000 --out {}",
                           (dir / "peanut.json").string(), (dir / "p.csv").string())) == 0);
  const auto p = csv_rows(dir / "p.csv");
  REQUIRE(p.size() == 2);
  // Rows come out sorted by lambda.
  CHECK(p[0][0] == "0.5");
  CHECK(p[1][1] == "nan");
}

TEST_CASE("eigs") {
  const fs::path dir = scratch("eigs");
  REQUIRE(tool(fmt::format("eigs --domain disk --nmax 5 --grid 21 --out {}", (dir / "disk").string())) == 0);
  int files = 0;
  for (const auto& e : fs::directory_iterator(dir / "disk")) files += e.path().filename() != "index.csv";
  CHECK(files == 10);
  CHECK(csv_rows(dir / "disk" / "index.csv").size() == 10);
  CHECK(csv_rows(dir / "disk" / "mode_1_2.csv").size() == 21 * 21);

  REQUIRE(tool(fmt::format("eigs --domain square --kmax 2 --grid 11 --out {}", (dir / "sq").string())) == 0);
  CHECK(csv_rows(dir / "sq" / "index.csv").size() == 4);

  REQUIRE(tool(fmt::format("eigs --domain ellipse:2,0,0,1 --nmax 3 --grid 11 --out {}", (dir / "el").string())) == 0);
  CHECK(csv_rows(dir / "el" / "index.csv").size() == 3);

  write_text(dir / "c.json", BoundaryCurve::circle().to_json());
  CHECK(tool(fmt::format("eigs --domain file:{} --out {}", (dir / "c.json").string(), (dir / "f").string())) == 2);
}

TEST_CASE("specmeasure separates Diophantine and Liouville rotation numbers") {
  const fs::path dir = scratch("spec");
  // Square lambda with rotation number r: lambda / sqrt(1 - lambda^2) = r / (1 - r).
  auto lambda_for = [](double r) {
    const double q = r / (1 - r);
    return q / std::sqrt(1 + q * q);
  };
  const double golden = lambda_for((std::sqrt(5.0) - 1) / 2);
  const double liouville = lambda_for(0.76562505960464477539);  // partial sum of 2^{-n!}, n <= 5
  REQUIRE(tool(fmt::format("specmeasure --domain square --kmax 128 --forcing bump:0.6 --lambda {:.17g} "
                           "--lambda {:.17g} --epsilon-sweep 1e-4:1e-1:13 --out {}",
                           golden, liouville, dir.string())) == 0);
  const double slope_golden = header_value(slurp(dir / "sweep_0.csv"), "slope");
  const double slope_liouville = header_value(slurp(dir / "sweep_1.csv"), "slope");
  CHECK(slope_golden > slope_liouville);
  CHECK(csv_rows(dir / "sweep_0.csv").size() == 13);
  CHECK_FALSE(csv_rows(dir / "histogram.csv").empty());
}

TEST_CASE("rightinv and evolve") {
  const fs::path dir = scratch("run");
  REQUIRE(tool(fmt::format("rightinv --domain disk --lambda 0.3 --forcing one --grid 41 --orbit 100000 --out {}",
                           (dir / "ri.json").string())) == 0);
  const std::string ri = slurp(dir / "ri.json");
  CHECK(ri.rfind("# iwaves", 0) == 0);
  CHECK(ri.find("\"verified\": true") != std::string::npos);
  const auto pos = ri.find("\"residual\": ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(ri.substr(pos + 12)) <= 1e-4);
  CHECK(tool(fmt::format("rightinv --domain disk --lambda 0.70710678118654757 --out {}",
                         (dir / "rational.json").string())) == 3);

  REQUIRE(tool(fmt::format("evolve --domain square --lambda 0.70710678118654757 --forcing mode:1,1 "
                           "--tmin 0.01 --tmax 1000 --per-decade 64 --out {}",
                           (dir / "res.csv").string())) == 0);
  CHECK(header_value(slurp(dir / "res.csv"), "growth") == 1.0);
  REQUIRE(tool(fmt::format("evolve --domain square --lambda 0.6 --forcing mode:1,1 --tmin 0.01 --tmax 100000 "
                           "--per-decade 64 --out {}",
                           (dir / "off.csv").string())) == 0);
  CHECK(header_value(slurp(dir / "off.csv"), "growth") == 0.0);
  CHECK(tool("evolve --domain disk --lambda 0.6") == 2);
}

TEST_CASE("outputs are deterministic and carry the configuration hash") {
  const fs::path dir = scratch("determinism");
  const std::string args = "rotnum --domain rounded-square:0.1,0.15 --lambda-grid 0.3:0.7:5 --orbit 20000 --seed 3";
  REQUIRE(tool(args + " --out " + (dir / "a.csv").string()) == 0);
  REQUIRE(tool(args + " --out " + (dir / "b.csv").string()) == 0);
  const std::string a = slurp(dir / "a.csv");
  CHECK(a == slurp(dir / "b.csv"));

  const auto c = parse({"rotnum", "--domain", "rounded-square:0.1,0.15", "--lambda-grid", "0.3:0.7:5", "--orbit",
                        "20000", "--seed", "3"});
  CHECK(a.substr(0, a.find('\n')) == header_line(c.canonical()));
}
