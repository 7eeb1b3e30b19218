#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "diverge/errors.hpp"
#include "diverge/harness.hpp"
#include "diverge/run_config.hpp"
#include "diverge/tabular.hpp"

using namespace diverge;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("diverge_tests_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path source_path(const std::string& rel) { return fs::path(DIVERGE_SOURCE_DIR) / rel; }

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

const char* kZeroDemand = R"(
seed: 5
simulation: {cells_per_link: 20, time_steps: 200, link_length: 10, horizon: 90}
model: {kind: lebacque, xi: [0.7, 0.3]}
links:
  - {diagram: {kind: del_castillo_mainline}, initial_density: 0}
  - {diagram: {kind: del_castillo_mainline}, initial_density: 0}
  - {diagram: {kind: del_castillo_ramp}, initial_density: 0}
)";

}  // namespace

TEST_CASE("FNV-1a test vectors") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("numbers are written with twelve significant digits") {
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(123456.7890123456) == "123456.789012");
  CHECK(format_number(-2.5e-9) == "-2.5e-09");
}

TEST_CASE("configuration parsing") {
  const ExperimentConfig c = parse_config(kZeroDemand);
  CHECK(c.seed == 5);
  CHECK(c.sim.cells_per_link == 20);
  CHECK(c.sim.model.kind() == ModelKind::Lebacque);
  CHECK(c.config_hash == fnv1a(kZeroDemand));

  const ExperimentConfig defaults = parse_config("seed: 1\n");
  CHECK(defaults.sim.cells_per_link == SimConfig{}.cells_per_link);

  CHECK_THROWS_AS(parse_config("seed: 1\nsimulaton: {cells_per_link: 4}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model: {kind: roundabout}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model: {kind: daganzo_fifo, xi: [1.0, 0.0]}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("seed: [1, 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("links: [{diagram: {kind: del_castillo_mainline}}]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("converge: {resolutions: []}\n"), ConfigError);
  const ExperimentConfig vs = parse_config("converge: {against: {kind: lebacque, xi: [0.6, 0.4]}}\n");
  REQUIRE(vs.converge.against.has_value());
  CHECK(vs.converge.against->kind() == ModelKind::Lebacque);
  CHECK(vs.converge.against->xi()[0] == 0.6);
  CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), ConfigError);
  for (const char* name : {"riemann_lebacque.yaml", "pure_shock.yaml", "converge.yaml", "props.yaml",
                           "flux_map_daganzo_fifo.yaml", "flux_map_supply_proportional.yaml",
                           "flux_map_priority_based.yaml", "flux_map_partial_evacuation.yaml"}) {
    CHECK_NOTHROW(load_config(source_path(std::string("configs/") + name)).sim.validate());
  }
}

TEST_CASE("report rendering carries hash, seed and verdict") {
  Report r;
  r.title = "demo";
  r.config_hash = 0xabcULL;
  r.seed = 9;
  r.check(true, "first", "ok");
  CHECK(r.passed);
  r.check(false, "second", "bad");
  CHECK_FALSE(r.passed);
  const std::string text = r.render();
  CHECK(text.find("config_hash abc\n") != std::string::npos);
  CHECK(text.find("seed 9") != std::string::npos);
  CHECK(text.find("PASS first: ok") != std::string::npos);
  CHECK(text.find("FAIL second: bad") != std::string::npos);
  CHECK(text.find("verdict FAIL") != std::string::npos);
}

TEST_CASE("zero-demand verification passes with all-zero output") {
  const fs::path out = scratch("zero");
  const Report r = riemann_verify(parse_config(kZeroDemand), out);
  CHECK(r.passed);
  const auto rows = read_csv(out / "fields.csv");
  REQUIRE(rows.size() > 1);
  CHECK(rows[0] == std::vector<std::string>{"step", "link", "cell", "density", "proportion"});
  for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k][3] == "0");
  CHECK(fs::exists(out / "junction.csv"));
  CHECK(fs::exists(out / "report"));
}

TEST_CASE("convergence: identical models give zero difference") {
  ExperimentConfig c = load_config(source_path("configs/converge.yaml"));
  c.converge.against = c.sim.model;
  const fs::path out = scratch("converge_same");
  (void)convergence_study(c, out);
  for (int m : c.converge.resolutions) {
    const auto rows = read_csv(out / ("epsilon_M" + std::to_string(m) + ".csv"));
    REQUIRE(rows.size() > 2);
    for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k][1] == "0");
  }
}

TEST_CASE("convergence series at M=160 matches the golden file bit for bit") {
  const ExperimentConfig c = load_config(source_path("configs/converge.yaml"));
  const fs::path out = scratch("converge_golden");
  const Report r = convergence_study(c, out);
  CHECK(r.passed);
  const std::string produced = slurp(out / "epsilon_M160.csv");
  CHECK(produced == slurp(source_path("tests/golden/epsilon_M160.csv")));
  // Bounded by the total mass that could differ on the three links.
  double worst = 0.0;
  for (const auto& row : read_csv(out / "epsilon_M160.csv")) {
    if (row[0] == "step") continue;
    worst = std::max(worst, std::stod(row[1]));
  }
  CHECK(worst > 0.0);
  CHECK(worst < 3.0 * 2.0 * c.sim.link_length);
}

TEST_CASE("flux map regions") {
  const fs::path out = scratch("flux_dag");
  ExperimentConfig dag = load_config(source_path("configs/flux_map_daganzo_fifo.yaml"));
  dag.flux_map.demand = 0.2;
  CHECK(flux_map(dag, out).passed);
  const auto rows = read_csv(out / "flux_map.csv");
  REQUIRE(rows.size() > 1);
  CHECK(rows[0] == std::vector<std::string>{"region", "d0", "s1", "s2", "q0", "q1", "q2"});
  int region_one = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double d0 = std::stod(rows[k][1]);
    const double s1 = std::stod(rows[k][2]);
    const double s2 = std::stod(rows[k][3]);
    if (d0 < std::min(s1 / 0.7, s2 / 0.3) - 1e-9) {
      ++region_one;
      CHECK(rows[k][0] == "I");
      CHECK(std::abs(std::stod(rows[k][5]) - 0.7 * d0) < 1e-11);
      CHECK(std::abs(std::stod(rows[k][6]) - 0.3 * d0) < 1e-11);
    }
    if (s1 == 0.0 && s2 == 0.0) {
      CHECK(std::stod(rows[k][5]) == 0.0);
      CHECK(std::stod(rows[k][6]) == 0.0);
    }
  }
  CHECK(region_one > 0);

  const fs::path out_sp = scratch("flux_sp");
  const ExperimentConfig sp = load_config(source_path("configs/flux_map_supply_proportional.yaml"));
  CHECK(flux_map(sp, out_sp).passed);
  const double c1 = sp.sim.diagrams[1].capacity();
  const double c2 = sp.sim.diagrams[2].capacity();
  int fair = 0;
  for (const auto& row : read_csv(out_sp / "flux_map.csv")) {
    if (row[0] == "region") continue;
    const double d0 = std::stod(row[1]);
    const double s1 = std::stod(row[2]);
    const double s2 = std::stod(row[3]);
    if (s1 > c1 * d0 / (c1 + c2) + 1e-9 && s2 > c2 * d0 / (c1 + c2) + 1e-9) {
      ++fair;
      CHECK(std::abs(std::stod(row[5]) - c1 * d0 / (c1 + c2)) < 1e-11);
      CHECK(std::abs(std::stod(row[6]) - c2 * d0 / (c1 + c2)) < 1e-11);
    }
  }
  CHECK(fair > 0);
}

TEST_CASE("property suite passes and is reproducible") {
  ExperimentConfig c = load_config(source_path("configs/props.yaml"));
  c.props.random_inputs = 1500;
  c.props.oracle_grid = 6;
  const Report a = property_suite(c, scratch("props_a"));
  CHECK(a.passed);
  const Report b = property_suite(c, scratch("props_b"));
  CHECK(a.render() == b.render());
  CHECK(a.render().find("seed 20090220") != std::string::npos);
}

TEST_CASE("property suite catches a solver with min turned into max") {
  ExperimentConfig c = load_config(source_path("configs/props.yaml"));
  c.props.random_inputs = 200;
  c.props.oracle_grid = 6;
  const FluxSolver mutated = [](const DivergeModel& m, const RiemannInput& in) {
    if (m.kind() != ModelKind::DaganzoFifo) return solve_fluxes(m, in);
    const auto& xi = m.xi();
    const double q0 = std::min(in.states[0].demand,
                               std::max(in.states[1].supply / xi[0], in.states[2].supply / xi[1]));
    return FluxTriple{q0, xi[0] * q0, xi[1] * q0};
  };
  const Report r = property_suite(c, scratch("props_mutated"), mutated);
  CHECK_FALSE(r.passed);
  const auto line = std::find_if(r.lines.begin(), r.lines.end(), [](const std::string& s) {
    return s.rfind("FAIL brute-force oracle equivalence", 0) == 0;
  });
  REQUIRE(line != r.lines.end());
  CHECK(line->find("counterexample: daganzo") != std::string::npos);
}
