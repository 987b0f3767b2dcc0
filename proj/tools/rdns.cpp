#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rdns/config.hpp"
#include "rdns/runner.hpp"

namespace {

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool strict = false;
};

void add_common(CLI::App* app, Common& c, bool config_required) {
  auto* opt = app->add_option("--config", c.config, "run configuration (JSON)");
  if (config_required) opt->required();
  app->add_option("--out", c.out, "output directory (default: config output_dir or $RDNS_OUT)");
  app->add_option("--seed", c.seed, "override the configuration seed");
  app->add_flag("--strict", c.strict, "treat inadmissible parameters as a configuration error");
}

rdns::RunConfig load(const Common& c, std::optional<rdns::Mode> mode) {
  rdns::RunConfig cfg = c.config.empty() ? rdns::RunConfig{} : rdns::load_config(c.config);
  if (mode) cfg.mode = *mode;
  if (c.seed) cfg.seed = *c.seed;
  if (c.strict) cfg.strict = true;
  return cfg;
}

int do_run(const Common& c, std::optional<rdns::Mode> mode) {
  const rdns::RunConfig cfg = load(c, mode);
  const std::string dir = rdns::resolve_output_dir(c.out, cfg);
  const rdns::RunOutcome o = rdns::run(cfg, dir);
  for (const auto& ch : o.checks)
    std::printf("%-40s %-4s value=%.6g threshold=%.6g%s\n", ch.name.c_str(), ch.pass ? "PASS" : "FAIL",
                ch.value, ch.threshold, ch.enabled ? "" : " (not gating)");
  if (!o.message.empty()) std::fprintf(stderr, "rdns: %s\n", o.message.c_str());
  std::printf("output: %s  exit: %d\n", dir.c_str(), o.exit_code);
  return o.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial degenerate-viscosity Navier-Stokes laboratory"};
  app.require_subcommand(1);

  Common run_opts, id_opts, th_opts, sw_opts;
  auto* run = app.add_subcommand("run", "run the mode selected in the configuration");
  add_common(run, run_opts, true);

  auto* ids = app.add_subcommand("identities", "pointwise identity and coercivity suite");
  add_common(ids, id_opts, false);

  auto* ths = app.add_subcommand("thresholds", "closed-form parameter thresholds");
  add_common(ths, th_opts, false);

  auto* sw = app.add_subcommand("sweep", "one run per value of a numeric configuration field");
  add_common(sw, sw_opts, true);
  std::string axis;
  std::vector<double> values;
  std::size_t jobs = 1;
  sw->add_option("--axis", axis, "field as block.key, e.g. params.delta or grid.N")->required();
  sw->add_option("--values", values, "comma-separated values")->delimiter(',');
  sw->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* cmp = app.add_subcommand("compare", "difference norms between two snapshot directories");
  std::string dir_a, dir_b, cmp_out;
  cmp->add_option("a", dir_a, "first run or snapshot directory")->required();
  cmp->add_option("b", dir_b, "second run or snapshot directory")->required();
  cmp->add_option("--out", cmp_out, "write compare.json into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : rdns::kExitConfigError;
  }

  try {
    if (*run) return do_run(run_opts, std::nullopt);
    if (*ids) return do_run(id_opts, rdns::Mode::identities);
    if (*ths) return do_run(th_opts, rdns::Mode::thresholds);
    if (*sw) {
      const rdns::RunConfig cfg = load(sw_opts, std::nullopt);
      const std::string dir = rdns::resolve_output_dir(sw_opts.out, cfg);
      const int rc = rdns::sweep(cfg, axis, values, dir, jobs);
      std::printf("summary: %s/sweep_summary.csv  exit: %d\n", dir.c_str(), rc);
      return rc;
    }
    if (*cmp) {
      const rdns::CompareResult r = rdns::compare_dirs(dir_a, dir_b);
      const nlohmann::ordered_json j = {{"snapshots", r.snapshots},
                                        {"rho_sup", r.rho_sup},
                                        {"u_sup", r.u_sup},
                                        {"rho_l2_final", r.rho_l2},
                                        {"max_time_mismatch", r.max_time_mismatch}};
      std::cout << j.dump(2) << '\n';
      if (!cmp_out.empty()) {
        std::filesystem::create_directories(cmp_out);
        std::ofstream(std::filesystem::path(cmp_out) / "compare.json") << j.dump(2) << '\n';
      }
      return rdns::kExitOk;
    }
  } catch (const rdns::ConfigError& e) {
    std::fprintf(stderr, "rdns: config error: %s\n", e.what());
    return rdns::kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "rdns: %s\n", e.what());
    return rdns::kExitConfigError;
  }
  return rdns::kExitOk;
}
