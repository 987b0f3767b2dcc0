#include "rdns/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <thread>

#include "json.hpp"
#include "rdns/diagnostics.hpp"
#include "rdns/identity_checker.hpp"
#include "rdns/io.hpp"
#include "rdns/solver_enlarged.hpp"

namespace rdns {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

json checks_json(const std::vector<CheckOutcome>& checks) {
  json j = json::array();
  for (const auto& c : checks)
    j.push_back({{"name", c.name},
                 {"value", c.value},
                 {"threshold", c.threshold},
                 {"pass", c.pass},
                 {"enabled", c.enabled}});
  return j;
}

int exit_from_checks(const std::vector<CheckOutcome>& checks) {
  for (const auto& c : checks)
    if (c.enabled && !c.pass) return kExitCheckFailed;
  return kExitOk;
}

CheckOutcome le_check(std::string name, double value, double threshold, bool enabled = true) {
  return {std::move(name), value, threshold, std::isfinite(value) && value <= threshold, enabled};
}

/// Smallest successive log2 ratio of a residual sequence on doubling grids.
double min_order(const std::vector<double>& e) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < e.size(); ++k) best = std::min(best, std::log2(e[k] / e[k + 1]));
  return e.size() < 2 ? kNaN : best;
}

json admissibility_json(const Params& p, const AdmissibilityReport& rep) {
  const SigmaRange sr = tail_exponent_range(p);
  return {{"admissible", rep.admissible},
          {"reasons", rep.reasons},
          {"reduced_initial_conditions", rep.reduced_initial_conditions},
          {"delta_lower_3d", rep.thresholds.delta_lower_3d},
          {"gamma_upper_3d", rep.thresholds.gamma_upper_3d},
          {"delta_star", rep.thresholds.delta_star},
          {"p_tilde", rep.thresholds.p_tilde},
          {"sigma_lower", sr.lower},
          {"sigma_upper", sr.upper}};
}

json params_json(const Params& p) {
  return {{"A", p.A},   {"gamma", p.gamma}, {"delta", p.delta}, {"a1", p.a1}, {"a2", p.a2},
          {"n", p.n},   {"m", p.m},         {"a", p.a},         {"iota", p.iota},
          {"a2_override", p.a2_override}};
}

struct FormulationRun {
  Trajectory traj;
  std::vector<DiagnosticsRecord> records;
  std::vector<CheckOutcome> checks;
  json report;
};

FormulationRun run_formulation(const RunConfig& cfg, Formulation form, const Params& p,
                               const RadialGrid& grid, const PrimitiveState& init,
                               const fs::path& dir) {
  FormulationRun fr;
  fs::create_directories(dir);
  if (form == Formulation::primitive) {
    fr.traj = simulate(init, p, grid, cfg.solver);
  } else {
    EnlargedState e;
    try {
      e = to_enlarged(init, p, grid);
    } catch (const std::domain_error& err) {
      throw ConfigError(err.what());
    }
    fr.traj = simulate_enlarged(e, p, grid, cfg.solver);
  }
  DiagnosticsOptions opt;
  opt.ball_radius = cfg.diagnostics.ball_radius;
  opt.p_list = cfg.diagnostics.p_list;
  opt.slack = cfg.diagnostics.slack;
  fr.records = build_records(fr.traj, p, grid, opt);
  write_diagnostics_csv((dir / "diagnostics.csv").string(), fr.records);
  write_trajectory_snapshots((dir / "snapshots").string(), fr.traj, grid);

  const double R = cfg.diagnostics.ball_radius > 0.0 ? cfg.diagnostics.ball_radius : 0.5 * grid.r_max();
  const auto& rec = fr.records;
  double mass_drift = 0.0, energy_rise = 0.0, rho_min = std::numeric_limits<double>::infinity();
  double w_min = std::numeric_limits<double>::infinity();
  for (const auto& r : rec) {
    mass_drift = std::max(mass_drift, std::abs(r.mass - rec.front().mass) / rec.front().mass);
    const double w = r.energy + r.dissipation_cum;
    w_min = std::min(w_min, w);
    energy_rise = std::max(energy_rise, (w - w_min) / rec.front().energy);
    rho_min = std::min(rho_min, r.rho_min);
  }
  bool momentum_zero = true;
  for (const auto& s : fr.traj.states) {
    const Momentum mo = momentum(s, grid, p.m);
    momentum_zero = momentum_zero && mo.vector[0] == 0.0 && mo.vector[1] == 0.0 && mo.vector[2] == 0.0 &&
                    std::isfinite(mo.radial_integral);
  }
  const auto& k = cfg.checks;
  // Only the primitive continuity equation is in flux form; the enlarged
  // drift is reported but converges at the scheme order instead.
  fr.checks.push_back(le_check("mass_drift", mass_drift, k.mass_tol, k.mass && form == Formulation::primitive));
  fr.checks.push_back(le_check("energy_rise", energy_rise, k.energy_tol, k.energy));
  fr.checks.push_back({"rho_min_positive", rho_min, 0.0, rho_min > 0.0, k.positivity});
  fr.checks.push_back({"momentum_vector_zero", momentum_zero ? 0.0 : 1.0, 0.0, momentum_zero, true});

  json bounds;
  const double T = fr.traj.states.back().t;
  if (fr.traj.states.size() >= 3) {
    if (init.far_field_density > 0.0 || cfg.initial_data.spec.far_field_density > 0.0) {
      const PositiveBoundReport pb = positive_density_bounds(fr.traj, grid, R, T, cfg.diagnostics.slack);
      bounds = {{"class", "positive"}, {"C", pb.C}, {"violations", pb.violations},
                {"min_rho", pb.min_rho}, {"max_rho", pb.max_rho}};
      fr.checks.push_back({"density_bounds", static_cast<double>(pb.violations), 0.0,
                           pb.violations == 0, k.density_bounds});
    } else {
      const BoundReport b = density_bounds(fr.traj, init.rho, p, grid, R, T, cfg.diagnostics.slack);
      bounds = {{"class", "vacuum_far_field"},
                {"C_low", b.C_low},
                {"C_up", b.C_up},
                {"C_tail", b.C_tail},
                {"lower_violations", b.lower_violations},
                {"upper_violations", b.upper_violations},
                {"worst_lower_ratio", b.worst_lower_ratio},
                {"worst_upper_ratio", b.worst_upper_ratio},
                {"min_rho_ball", b.min_rho_ball},
                {"samples_fit", b.samples_fit},
                {"samples_test", b.samples_test}};
      const std::size_t v = b.lower_violations + b.upper_violations;
      fr.checks.push_back({"density_bounds", static_cast<double>(v), 0.0, v == 0, k.density_bounds});
    }
  }

  const ResidualSeries vr = fr.traj.states.size() >= 3 ? v_residual(fr.traj, p, grid, R) : ResidualSeries{};
  json rep;
  rep["formulation"] = form == Formulation::primitive ? "primitive" : "enlarged";
  rep["completed"] = fr.traj.completed;
  rep["failure"] = fr.traj.failure;
  rep["steps"] = fr.traj.steps;
  rep["clamp_events"] = fr.traj.clamp_events;
  rep["snapshots"] = fr.traj.states.size();
  rep["t_final"] = T;
  rep["mass_drift"] = mass_drift;
  rep["energy_rise"] = energy_rise;
  rep["v_residual_max"] = vr.norm.empty() ? kNaN : vr.max();
  rep["density_bounds"] = bounds;
  if (form == Formulation::enlarged) rep["constraint_residual"] = fr.traj.constraint_residual;
  rep["checks"] = checks_json(fr.checks);
  write_text(dir / "report.json", rep.dump(2) + "\n");
  fr.report = rep;
  return fr;
}

void fill_summary(RunOutcome& out, const FormulationRun& fr, const std::string& prefix) {
  const auto& last = fr.records.back();
  out.summary[prefix + "t_final"] = last.t;
  out.summary[prefix + "mass"] = last.mass;
  out.summary[prefix + "energy"] = last.energy;
  out.summary[prefix + "dissipation_cum"] = last.dissipation_cum;
  out.summary[prefix + "bd_entropy"] = last.bd_entropy;
  out.summary[prefix + "rho_min"] = last.rho_min;
  out.summary[prefix + "rho_max"] = last.rho_max;
  for (const auto& c : fr.checks) out.summary[prefix + c.name] = c.value;
}

RunOutcome run_simulation(const RunConfig& cfg, const Params& p, const fs::path& out_dir, json& report) {
  RunOutcome out;
  const RadialGrid grid = resolve_grid(cfg.grid);
  const PrimitiveState init = resolve_initial_state(cfg.initial_data, grid);
  const CompatibilityReport cr = check_compatibility(init.rho, init.u, p, grid);
  report["compatibility"] = {{"g1_norm", cr.g1_norm},           {"g2_norm", cr.g2_norm},
                             {"gstar_norm", cr.gstar_norm},     {"g1_finite", cr.g1_finite},
                             {"g2_finite", cr.g2_finite},       {"gstar_finite", cr.gstar_finite},
                             {"tail_exponent_fit", cr.tail_exponent_fit}};

  std::vector<std::pair<Formulation, fs::path>> forms;
  if (cfg.mode == Mode::primitive) forms.push_back({Formulation::primitive, out_dir});
  if (cfg.mode == Mode::enlarged) forms.push_back({Formulation::enlarged, out_dir});
  if (cfg.mode == Mode::both) {
    forms.push_back({Formulation::primitive, out_dir / "primitive"});
    forms.push_back({Formulation::enlarged, out_dir / "enlarged"});
  }
  std::vector<FormulationRun> runs;
  bool failed = false;
  for (const auto& [f, dir] : forms) {
    runs.push_back(run_formulation(cfg, f, p, grid, init, dir));
    const auto& fr = runs.back();
    const std::string prefix = cfg.mode == Mode::both ? fr.report["formulation"].get<std::string>() + "." : "";
    for (auto c : fr.checks) {
      c.name = prefix + c.name;
      out.checks.push_back(c);
    }
    fill_summary(out, fr, prefix);
    report[cfg.mode == Mode::both ? fr.report["formulation"].get<std::string>() : "run"] = fr.report;
    if (!fr.traj.completed) {
      failed = true;
      out.message += fr.traj.failure;
    }
  }
  out.final_rho = runs.front().traj.states.back().rho;
  if (cfg.mode == Mode::both && !failed) {
    const auto& a = runs[0].traj.states;
    const auto& b = runs[1].traj.states;
    double sup = 0.0;
    for (std::size_t i = 0; i < a.back().rho.size(); ++i)
      sup = std::max(sup, std::abs(a.back().rho[i] - b.back().rho[i]));
    const bool same_count = a.size() == b.size();
    report["cross_formulation"] = {{"rho_sup_final", sup}, {"snapshots_match", same_count}};
    out.checks.push_back(le_check("cross_formulation_rho_sup", sup, cfg.checks.cross_tol,
                                  cfg.checks.cross_formulation));
    out.summary["cross_rho_sup"] = sup;
  }
  out.exit_code = failed ? kExitSimulationFailed : exit_from_checks(out.checks);
  return out;
}

RunOutcome run_thresholds(const RunConfig& cfg, const Params& p, json& report) {
  RunOutcome out;
  const double dl = 7.0 - 2.0 * std::sqrt(10.0);
  const double pt1 = p_tilde(1, 0.5);
  const double pt2 = p_tilde(2, dl);
  out.checks.push_back(le_check("p_tilde_1_at_half", std::abs(pt1 - 2.0), 1e-9));
  out.checks.push_back(le_check("p_tilde_2_at_delta_lower", std::abs(pt2 - 3.0), 1e-9));

  double disc_max = 0.0;
  std::size_t sign_mismatch = 0;
  double boundary = 0.0;
  for (int m = 1; m <= 2; ++m) {
    const double crit = static_cast<double>(m) / (m + 1);
    boundary = std::max(boundary, std::abs(discriminant(m, crit, 2.0)));
    for (int k = 0; k < 1000; ++k) {
      const double d = 0.5 + 0.5 * (k + 0.5) / 1000.0;
      try {
        disc_max = std::max(disc_max, discriminant_relative(m, d, p_tilde(m, d)));
      } catch (const std::domain_error&) {
      }
      if (std::abs(d - crit) < 1e-12) continue;
      if ((discriminant(m, d, 2.0) < 0.0) != (d > crit)) ++sign_mismatch;
    }
  }
  out.checks.push_back(le_check("discriminant_at_p_tilde_relative", disc_max, 1e-9));
  out.checks.push_back(le_check("discriminant_2_sign_mismatches", static_cast<double>(sign_mismatch), 0.0));
  out.checks.push_back(le_check("discriminant_2_boundary", boundary, 1e-12));

  const double g53 = 5.0 / 3.0;
  const double gap = std::abs(delta_star_low_branch(g53) - delta_star_high_branch(g53));
  out.checks.push_back(le_check("delta_star_branch_gap", gap, 1e-12));
  const double gu = 1.0 + 2.0 / std::sqrt(3.0);
  double ds_max = -std::numeric_limits<double>::infinity();
  for (int k = 1; k < 1000; ++k) ds_max = std::max(ds_max, delta_star(1.0 + (gu - 1.0) * k / 1000.0));
  out.checks.push_back({"delta_star_below_half", ds_max, 0.5, ds_max < 0.5, true});

  report["thresholds"] = {{"p_tilde_1_half", pt1},
                          {"p_tilde_2_delta_lower", pt2},
                          {"delta_lower_3d", dl},
                          {"delta_star_5_3", delta_star(g53)},
                          {"delta_star_branch_low", delta_star_low_branch(g53)},
                          {"delta_star_branch_high", delta_star_high_branch(g53)},
                          {"config_p_tilde", check_admissible(p, cfg.params.tolerance).thresholds.p_tilde}};
  out.exit_code = exit_from_checks(out.checks);
  return out;
}

/// Deterministic admissible (m, delta, p) triples with p inside [2, p~).
std::vector<std::array<double, 3>> coercivity_triples() {
  std::vector<std::array<double, 3>> t;
  for (int m = 1; m <= 2; ++m) {
    const double lo = m == 1 ? 0.55 : 0.70;
    for (int k = 0; k < 10; ++k) {
      const double d = lo + (0.98 - lo) * k / 9.0;
      const double pt = p_tilde(m, d);
      t.push_back({static_cast<double>(m), d, 2.0 + 0.5 * (pt - 2.0)});
    }
  }
  return t;
}

RunOutcome run_identities(const RunConfig& cfg, const Params& p, json& report) {
  RunOutcome out;
  const auto& ic = cfg.identities;
  if (ic.grid_sizes.empty()) throw ConfigError("identities.grid_sizes must not be empty");
  std::mt19937_64 rng(cfg.seed);
  const double alphas[2] = {0.0, alpha_weight(p.delta)};
  const RadialGrid g0 = build_grid(ic.r_max, ic.grid_sizes.front());
  double exact_max = 0.0, veq_exact = 0.0;
  for (std::size_t s = 0; s < ic.field_samples; ++s) {
    const SyntheticFields f = SyntheticFields::sample(rng);
    for (int ell = 2; ell <= 5; ++ell)
      for (double a : alphas)
        exact_max = std::max(exact_max, multiplier_identity_jet(f, p, a, ell, g0).max_relative_residual);
    veq_exact = std::max(veq_exact, effective_velocity_equation_jet(f, p, g0).max_relative_residual);
  }
  out.checks.push_back(le_check("multiplier_exact", exact_max, 1e-12));
  out.checks.push_back(le_check("effective_velocity_exact", veq_exact, 1e-12));

  const SyntheticFields f;
  const double a = alphas[1];
  std::vector<double> disc, fd, flux, refo, veq;
  json per_grid = json::array();
  for (std::size_t n : ic.grid_sizes) {
    const RadialGrid g = build_grid(ic.r_max, n);
    Field rho, u, rt, ut;
    f.sample_on(g, p.m, rho, u, rt, ut);
    disc.push_back(multiplier_identity_jet(f, p, a, 3, g, FluxDerivative::discrete).max_relative_residual);
    fd.push_back(multiplier_identity(rho, u, rt, ut, p, a, 3, g).max_relative_residual);
    flux.push_back(multiplier_flux_integral(f, p, a, 3, g).max_relative_residual);
    refo.push_back(reformulation_identity(rho, u, p, g).max_relative_residual);
    veq.push_back(effective_velocity_equation_identity(rho, u, p, g).max_relative_residual);
    per_grid.push_back({{"N", n},
                        {"multiplier_discrete_flux", disc.back()},
                        {"multiplier_fd", fd.back()},
                        {"flux_integral", flux.back()},
                        {"reformulation", refo.back()},
                        {"effective_velocity_fd", veq.back()}});
  }
  auto order_check = [&](const char* name, const std::vector<double>& e) {
    const double o = min_order(e);
    out.checks.push_back({name, o, 1.8, ic.grid_sizes.size() < 2 || o >= 1.8, true});
  };
  order_check("multiplier_discrete_flux_order", disc);
  order_check("multiplier_fd_order", fd);
  order_check("flux_integral_order", flux);
  order_check("reformulation_order", refo);
  order_check("effective_velocity_fd_order", veq);

  std::size_t violations = 0;
  json coerc = json::array();
  for (const auto& t : coercivity_triples()) {
    const CoercivityResult c = quadratic_form_positivity(static_cast<int>(t[0]), t[1], t[2], ic.mc_samples,
                                                         cfg.seed + coerc.size());
    violations += c.violations + (c.result.pass ? 0 : 1);
    coerc.push_back({{"m", t[0]}, {"delta", t[1]}, {"p", t[2]}, {"c_p", c.c_p}, {"violations", c.violations}});
  }
  out.checks.push_back(le_check("quadratic_form_violations", static_cast<double>(violations), 0.0));
  report["identities"] = {{"per_grid", per_grid}, {"coercivity", coerc}};
  out.exit_code = exit_from_checks(out.checks);
  return out;
}

}  // namespace

RunOutcome run(const RunConfig& cfg, const std::string& out_dir_str) {
  RunOutcome out;
  const fs::path out_dir(out_dir_str);
  json report;
  try {
    fs::create_directories(out_dir);
    write_text(out_dir / "config.echo", echo_config(cfg));
    const Params p = resolve_params(cfg.params);
    const AdmissibilityReport adm = check_admissible(p, cfg.params.tolerance);
    report["mode"] = to_string(cfg.mode);
    report["seed"] = cfg.seed;
    report["params"] = params_json(p);
    report["admissibility"] = admissibility_json(p, adm);
    if (!adm.admissible && cfg.strict) {
      std::string why;
      for (const auto& r : adm.reasons) why += (why.empty() ? "" : "; ") + r;
      throw ConfigError("parameters not admissible: " + why);
    }
    if (!adm.admissible) report["warnings"] = adm.reasons;

    switch (cfg.mode) {
      case Mode::thresholds: out = run_thresholds(cfg, p, report); break;
      case Mode::identities: out = run_identities(cfg, p, report); break;
      default: out = run_simulation(cfg, p, out_dir, report); break;
    }
    out.summary["p_tilde"] = adm.thresholds.p_tilde;
  } catch (const ConfigError& e) {
    out.exit_code = kExitConfigError;
    out.message = e.what();
  } catch (const SimulationError& e) {
    out.exit_code = kExitSimulationFailed;
    out.message = e.what();
  } catch (const std::exception& e) {
    out.exit_code = kExitSimulationFailed;
    out.message = e.what();
  }
  report["checks"] = checks_json(out.checks);
  report["exit_code"] = out.exit_code;
  report["message"] = out.message;
  try {
    fs::create_directories(out_dir);
    write_text(out_dir / "report.json", report.dump(2) + "\n");
  } catch (const std::exception& e) {
    if (out.exit_code == kExitOk) out.exit_code = kExitSimulationFailed;
    out.message += e.what();
  }
  return out;
}

std::vector<double> refinement_orders(const std::vector<Field>& finals,
                                      const std::vector<std::size_t>& sizes, double r_max) {
  const std::size_t k = finals.size();
  std::vector<double> d(k > 0 ? k - 1 : 0, kNaN), order(k, kNaN);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (sizes[i + 1] != 2 * sizes[i] || finals[i].size() != sizes[i] || finals[i + 1].size() != sizes[i + 1])
      continue;
    const double h = r_max / static_cast<double>(sizes[i]);
    double acc = 0.0;
    for (std::size_t j = 0; j < sizes[i]; ++j) {
      const double diff = finals[i][j] - 0.5 * (finals[i + 1][2 * j] + finals[i + 1][2 * j + 1]);
      acc += h * diff * diff;
    }
    d[i] = std::sqrt(acc);
  }
  for (std::size_t i = 1; i + 1 < k; ++i) order[i] = std::log2(d[i - 1] / d[i]);
  return order;
}

int sweep(const RunConfig& base, const std::string& axis, const std::vector<double>& values,
          const std::string& out_dir, std::size_t jobs) {
  fs::create_directories(out_dir);
  std::vector<RunConfig> cfgs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    RunConfig c = base;
    set_config_value(c, axis, values[i]);
    c.seed = base.seed + i;
    cfgs.push_back(c);
  }
  std::vector<RunOutcome> outs(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfgs.size(); i = next++) {
      char name[32];
      std::snprintf(name, sizeof name, "run_%03zu", i);
      outs[i] = run(cfgs[i], (fs::path(out_dir) / name).string());
    }
  };
  const std::size_t nw = std::max<std::size_t>(1, std::min(jobs, cfgs.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < nw; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::set<std::string> keys;
  std::set<std::string> check_names;
  for (const auto& o : outs) {
    for (const auto& [k, v] : o.summary) keys.insert(k);
    for (const auto& c : o.checks) check_names.insert(c.name);
  }
  keys.erase("p_tilde");
  const bool grid_axis = axis == "grid.N";
  std::vector<double> orders(outs.size(), kNaN);
  if (grid_axis && !outs.empty()) {
    std::vector<Field> finals;
    std::vector<std::size_t> sizes;
    for (const auto& c : cfgs) sizes.push_back(c.grid.n);
    for (const auto& o : outs) finals.push_back(o.final_rho);
    orders = refinement_orders(finals, sizes, base.grid.r_max);
  }

  std::ofstream csv(fs::path(out_dir) / "sweep_summary.csv", std::ios::binary | std::ios::trunc);
  csv << "index," << axis << ",exit_code,p_tilde";
  for (const auto& k : keys) csv << ',' << k;
  for (const auto& c : check_names) csv << ",pass_" << c;
  if (grid_axis) csv << ",order";
  csv << '\n';
  int worst = kExitOk;
  for (std::size_t i = 0; i < outs.size(); ++i) {
    const auto& o = outs[i];
    worst = std::max(worst, o.exit_code);
    const auto pt = o.summary.find("p_tilde");
    csv << i << ',' << format_double(values[i]) << ',' << o.exit_code << ','
        << format_double(pt == o.summary.end() ? kNaN : pt->second);
    for (const auto& k : keys) {
      const auto it = o.summary.find(k);
      csv << ',' << format_double(it == o.summary.end() ? kNaN : it->second);
    }
    for (const auto& name : check_names) {
      const auto it = std::find_if(o.checks.begin(), o.checks.end(), [&](const CheckOutcome& c) { return c.name == name; });
      csv << ',' << (it == o.checks.end() ? "" : (it->pass ? "1" : "0"));
    }
    if (grid_axis) csv << ',' << format_double(orders[i]);
    csv << '\n';
  }
  if (!csv) throw std::runtime_error("cannot write sweep_summary.csv");
  return worst;
}

CompareResult compare_dirs(const std::string& a, const std::string& b) {
  auto snaps = [](const std::string& d) {
    auto s = list_snapshots(d);
    if (s.empty()) s = list_snapshots((fs::path(d) / "snapshots").string());
    return s;
  };
  const auto sa = snaps(a), sb = snaps(b);
  if (sa.size() != sb.size())
    throw std::runtime_error("snapshot counts differ: " + std::to_string(sa.size()) + " vs " +
                             std::to_string(sb.size()));
  CompareResult res;
  res.snapshots = sa.size();
  for (std::size_t k = 0; k < sa.size(); ++k) {
    const Snapshot x = read_snapshot(sa[k]), y = read_snapshot(sb[k]);
    if (x.r != y.r) throw std::runtime_error("grids differ at snapshot " + std::to_string(k));
    res.max_time_mismatch = std::max(res.max_time_mismatch, std::abs(x.t - y.t));
    const std::size_t n = x.r.size();
    double l2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dr = x.rho[i] - y.rho[i];
      res.rho_sup = std::max(res.rho_sup, std::abs(dr));
      res.u_sup = std::max(res.u_sup, std::abs(x.u[i] - y.u[i]));
      const double lo = i == 0 ? 0.0 : 0.5 * (x.r[i - 1] + x.r[i]);
      const double hi = i + 1 == n ? x.r_max : 0.5 * (x.r[i] + x.r[i + 1]);
      l2 += (hi - lo) * dr * dr;
    }
    if (k + 1 == sa.size()) res.rho_l2 = std::sqrt(l2);
  }
  return res;
}

std::string resolve_output_dir(const std::string& cli_out, const RunConfig& cfg) {
  if (!cli_out.empty()) return cli_out;
  const char* env = std::getenv("RDNS_OUT");
  if (!cfg.output_dir.empty()) {
    const fs::path p(cfg.output_dir);
    if (p.is_relative() && env && *env) return (fs::path(env) / p).string();
    return p.string();
  }
  if (env && *env) return (fs::path(env) / to_string(cfg.mode)).string();
  return "rdns_out";
}

}  // namespace rdns
