#include <cmath>
#include <stdexcept>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "rdns/config.hpp"
#include "rdns/io.hpp"
#include "rdns/runner.hpp"

using namespace rdns;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rdns_unit_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunConfig small_run(Mode mode, double t_end) {
  RunConfig c;
  c.mode = mode;
  c.grid.n = 64;
  c.solver.t_end = t_end;
  return c;
}

}  // namespace

TEST_CASE("config defaults and echo round trip") {
  const RunConfig d = parse_config("{}");
  CHECK(d.params.delta == 0.8);
  CHECK(d.grid.n == 1024);
  CHECK(d.mode == Mode::primitive);
  CHECK_FALSE(d.params.a2.has_value());

  RunConfig c = parse_config(R"({"params": {"delta": 0.85, "a2": -0.1}, "grid": {"N": 300},
                                 "diagnostics": {"output_cadence": 0.02}, "mode": "both",
                                 "solver": {"scheme": "imex"}, "seed": 9})");
  CHECK(c.params.delta == 0.85);
  CHECK(*c.params.a2 == -0.1);
  CHECK(c.grid.n == 300);
  CHECK(c.solver.output_cadence == 0.02);
  CHECK(c.solver.scheme == Scheme::imex);
  CHECK(c.seed == 9);
  const std::string e = echo_config(c);
  CHECK(echo_config(parse_config(e)) == e);
  CHECK(e.back() == '\n');
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config(R"({"params": {"detla": 0.8}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"N": "many"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"mode": "fly"})"), ConfigError);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"solver": {"t_end": -1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"initial_data": {"family": "shock"}})"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/rdns.json"), ConfigError);
  CHECK_THROWS_AS(resolve_params(ParamsConfig{1.0, 1.5, 1.5, 1.0, 3, {}, 1e-12}), ConfigError);
}

TEST_CASE("set_config_value addresses numeric fields") {
  RunConfig c;
  set_config_value(c, "params.delta", 0.9);
  CHECK(c.params.delta == 0.9);
  set_config_value(c, "grid.N", 256);
  CHECK(c.grid.n == 256);
  set_config_value(c, "params.a2", -0.3);
  CHECK(*c.params.a2 == -0.3);
  set_config_value(c, "diagnostics.output_cadence", 0.05);
  CHECK(c.solver.output_cadence == 0.05);
  CHECK_THROWS_AS(set_config_value(c, "grid.N", 2.5), ConfigError);
  CHECK_THROWS_AS(set_config_value(c, "grid.stretch", 1.0), ConfigError);
  CHECK_THROWS_AS(set_config_value(c, "nope.x", 1.0), ConfigError);
}

TEST_CASE("resting family zeroes the velocity") {
  InitialDataConfig ic;
  ic.family = "power_law_rest";
  const RadialGrid g = build_grid(20.0, 64);
  const PrimitiveState s = resolve_initial_state(ic, g);
  for (double u : s.u) CHECK(u == 0.0);
  CHECK(s.rho[0] > 0.9);
}

TEST_CASE("snapshot files round trip") {
  const fs::path dir = scratch("snap");
  fs::create_directories(dir);
  Snapshot s;
  s.formulation = Formulation::enlarged;
  s.t = 0.125;
  s.r_max = 4.0;
  s.r = {0.5, 1.5, 2.5, 3.5};
  s.rho = {1.0, 0.5, 0.25, 0.125};
  s.u = {0.1, -0.2, 0.3, std::nextafter(0.4, 1.0)};
  s.psi = {-1.0, -2.0, -3.0, -4.0};
  const std::string path = (dir / "snap_00000.bin").string();
  write_snapshot(path, s);
  CHECK(fs::file_size(path) == 5 + 4 + 8 + 8 + 1 + 4 * 4 * 8);
  const Snapshot b = read_snapshot(path);
  CHECK(b.formulation == s.formulation);
  CHECK(b.t == s.t);
  CHECK(b.r_max == s.r_max);
  CHECK(b.r == s.r);
  CHECK(b.rho == s.rho);
  CHECK(b.u == s.u);
  CHECK(b.psi == s.psi);

  s.formulation = Formulation::primitive;
  write_snapshot((dir / "snap_00001.bin").string(), s);
  CHECK(read_snapshot((dir / "snap_00001.bin").string()).psi.empty());
  CHECK(list_snapshots(dir.string()).size() == 2);

  std::string raw = slurp(path);
  raw[0] = 'X';
  std::ofstream((dir / "bad.bin").string(), std::ios::binary) << raw;
  CHECK_THROWS_AS(read_snapshot((dir / "bad.bin").string()), std::runtime_error);
  std::ofstream((dir / "short.bin").string(), std::ios::binary) << slurp(path).substr(0, 40);
  CHECK_THROWS_AS(read_snapshot((dir / "short.bin").string()), std::runtime_error);
  std::ofstream((dir / "long.bin").string(), std::ios::binary) << slurp(path) << "x";
  CHECK_THROWS_AS(read_snapshot((dir / "long.bin").string()), std::runtime_error);
  s.u.pop_back();
  CHECK_THROWS_AS(write_snapshot(path, s), std::invalid_argument);
}

TEST_CASE("double formatting") {
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(INFINITY) == "inf");
  CHECK(format_double(-INFINITY) == "-inf");
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02e23})
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
}

TEST_CASE("diagnostics csv layout") {
  const fs::path dir = scratch("csv");
  fs::create_directories(dir);
  DiagnosticsRecord r;
  r.t = 0.5;
  r.clamps = 3;
  r.ledger = {{"u_p2", 1.0, true}};
  write_diagnostics_csv((dir / "d.csv").string(), {r, r});
  const std::string text = slurp(dir / "d.csv");
  CHECK(text.find('\r') == std::string::npos);
  std::istringstream in(text);
  std::string head, row;
  std::getline(in, head);
  std::getline(in, row);
  CHECK(head.rfind("t,mass,", 0) == 0);
  CHECK(head.substr(head.size() - 11) == "clamps,u_p2");
  CHECK(row.rfind("0.5,", 0) == 0);
  CHECK(row.find(",3,1") != std::string::npos);
  std::size_t lines = 0;
  for (char ch : text) lines += ch == '\n';
  CHECK(lines == 3);
}

TEST_CASE("thresholds mode passes and writes a report") {
  const fs::path dir = scratch("thr");
  RunConfig c;
  c.mode = Mode::thresholds;
  const RunOutcome o = run(c, dir.string());
  CHECK(o.exit_code == kExitOk);
  CHECK_FALSE(o.checks.empty());
  for (const auto& ch : o.checks) CHECK_MESSAGE(ch.pass, ch.name);
  const auto rep = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(rep["exit_code"] == 0);
  CHECK(rep["mode"] == "thresholds");
  CHECK(fs::exists(dir / "config.echo"));
}

TEST_CASE("both formulations at t_end = 0") {
  const fs::path dir = scratch("both0");
  const RunOutcome o = run(small_run(Mode::both, 0.0), dir.string());
  CHECK(o.exit_code == kExitOk);
  CHECK(o.summary.at("cross_rho_sup") < 1e-13);
  CHECK(list_snapshots((dir / "primitive" / "snapshots").string()).size() == 1);
  CHECK(list_snapshots((dir / "enlarged" / "snapshots").string()).size() == 1);
  CHECK(fs::exists(dir / "primitive" / "diagnostics.csv"));
  CHECK(fs::exists(dir / "enlarged" / "report.json"));
  const CompareResult cr = compare_dirs((dir / "primitive").string(), (dir / "enlarged").string());
  CHECK(cr.snapshots == 1);
  CHECK(cr.rho_sup < 1e-13);
}

TEST_CASE("short primitive run") {
  const fs::path dir = scratch("prim");
  const RunOutcome o = run(small_run(Mode::primitive, 0.03), dir.string());
  CHECK(o.exit_code == kExitOk);
  CHECK(list_snapshots((dir / "snapshots").string()).size() == 4);
  const std::string csv = slurp(dir / "diagnostics.csv");
  std::size_t lines = 0;
  for (char ch : csv) lines += ch == '\n';
  CHECK(lines == 5);
  CHECK(o.final_rho.size() == 64);
  const CompareResult same = compare_dirs(dir.string(), dir.string());
  CHECK(same.rho_sup == 0.0);
  CHECK(same.snapshots == 4);
  const fs::path other = scratch("both0b");
  run(small_run(Mode::primitive, 0.0), other.string());
  CHECK_THROWS_AS(compare_dirs(dir.string(), other.string()), std::runtime_error);
}

TEST_CASE("strict mode rejects inadmissible parameters") {
  RunConfig c = small_run(Mode::primitive, 0.0);
  c.params.delta = 0.6;
  c.strict = true;
  CHECK(run(c, scratch("strict").string()).exit_code == kExitConfigError);
  c.strict = false;
  const fs::path dir = scratch("lenient");
  CHECK(run(c, dir.string()).exit_code == kExitOk);
  const auto rep = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(rep["admissibility"]["admissible"] == false);
}

TEST_CASE("sweeps") {
  const fs::path empty = scratch("sweep_empty");
  CHECK(sweep(RunConfig{}, "params.delta", {}, empty.string(), 2) == 0);
  CHECK(slurp(empty / "sweep_summary.csv") == "index,params.delta,exit_code,p_tilde\n");

  RunConfig c;
  c.mode = Mode::thresholds;
  const fs::path dir = scratch("sweep_delta");
  CHECK(sweep(c, "params.delta", {0.7, 0.8, 0.9}, dir.string(), 2) == 0);
  std::istringstream in(slurp(dir / "sweep_summary.csv"));
  std::string head, row;
  std::getline(in, head);
  CHECK(head.find("pass_p_tilde_1_at_half") != std::string::npos);
  std::size_t rows = 0;
  while (std::getline(in, row)) ++rows;
  CHECK(rows == 3);
  CHECK(fs::exists(dir / "run_002" / "report.json"));
  CHECK_THROWS_AS(sweep(c, "params.bogus", {1.0}, scratch("sweep_bad").string(), 1), ConfigError);
}

TEST_CASE("refinement orders of a second-order family") {
  const double R = 4.0;
  std::vector<Field> finals;
  std::vector<std::size_t> sizes{16, 32, 64, 128};
  for (std::size_t n : sizes) {
    const double h = R / static_cast<double>(n);
    Field f(n);
    for (std::size_t j = 0; j < n; ++j) f[j] = 0.3 * (j + 0.5) * h + h * h;
    finals.push_back(f);
  }
  const auto o = refinement_orders(finals, sizes, R);
  REQUIRE(o.size() == 4);
  CHECK(std::isnan(o[0]));
  CHECK(std::isnan(o[3]));
  CHECK(o[1] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(o[2] == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("output directory resolution") {
  RunConfig c;
  c.mode = Mode::thresholds;
  unsetenv("RDNS_OUT");
  CHECK(resolve_output_dir("x", c) == "x");
  CHECK(resolve_output_dir("", c) == "rdns_out");
  setenv("RDNS_OUT", "/tmp/base", 1);
  CHECK(resolve_output_dir("", c) == "/tmp/base/thresholds");
  c.output_dir = "rel";
  CHECK(resolve_output_dir("", c) == "/tmp/base/rel");
  c.output_dir = "/abs";
  CHECK(resolve_output_dir("", c) == "/abs");
  unsetenv("RDNS_OUT");
}
