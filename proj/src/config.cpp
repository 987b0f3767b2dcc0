#include "rdns/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace rdns {

using json = nlohmann::ordered_json;

std::string to_string(Mode m) {
  switch (m) {
    case Mode::primitive: return "primitive";
    case Mode::enlarged: return "enlarged";
    case Mode::both: return "both";
    case Mode::identities: return "identities";
    case Mode::thresholds: return "thresholds";
  }
  return "primitive";
}

Mode mode_from_string(const std::string& s) {
  if (s == "primitive") return Mode::primitive;
  if (s == "enlarged") return Mode::enlarged;
  if (s == "both") return Mode::both;
  if (s == "identities") return Mode::identities;
  if (s == "thresholds") return Mode::thresholds;
  throw ConfigError("unknown mode '" + s + "'");
}

namespace {

void reject_unknown(const json& j, const char* block, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(std::string(block) + " must be an object");
  std::set<std::string> known(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw ConfigError("unknown key '" + it.key() + "' in " + block);
}

template <class T>
void take(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

json to_json(const RunConfig& c) {
  json j;
  json p;
  p["A"] = c.params.A;
  p["gamma"] = c.params.gamma;
  p["delta"] = c.params.delta;
  p["a1"] = c.params.a1;
  p["n"] = c.params.n;
  if (c.params.a2) p["a2"] = *c.params.a2;
  p["tolerance"] = c.params.tolerance;
  j["params"] = p;

  j["grid"] = {{"R_max", c.grid.r_max}, {"N", c.grid.n}, {"stretch", c.grid.stretch},
               {"ratio", c.grid.ratio}};

  const auto& s = c.initial_data.spec;
  j["initial_data"] = {{"family", c.initial_data.family}, {"rho_c", s.rho_c},
                       {"sigma", s.sigma},                 {"amplitude", s.amplitude},
                       {"r_center", s.r_center},           {"width", s.width},
                       {"far_field_density", s.far_field_density}};

  const auto& v = c.solver;
  j["solver"] = {{"scheme", to_string(v.scheme)},
                 {"t_end", v.t_end},
                 {"dt_initial", v.dt_initial},
                 {"cfl_advective", v.cfl_advective},
                 {"stability_factor_viscous", v.stability_factor_viscous},
                 {"rho_floor", v.rho_floor},
                 {"dt_min", v.dt_min},
                 {"max_steps", v.max_steps},
                 {"h_ceiling", v.h_ceiling},
                 {"guard_radius", v.guard_radius}};

  j["diagnostics"] = {{"p_list", c.diagnostics.p_list},
                      {"ball_radius", c.diagnostics.ball_radius},
                      {"output_cadence", c.diagnostics.output_cadence},
                      {"slack", c.diagnostics.slack}};

  j["identities"] = {{"field_samples", c.identities.field_samples},
                     {"mc_samples", c.identities.mc_samples},
                     {"grid_sizes", c.identities.grid_sizes},
                     {"R_max", c.identities.r_max}};

  const auto& k = c.checks;
  j["checks"] = {{"mass", k.mass},
                 {"energy", k.energy},
                 {"positivity", k.positivity},
                 {"density_bounds", k.density_bounds},
                 {"cross_formulation", k.cross_formulation},
                 {"mass_tol", k.mass_tol},
                 {"energy_tol", k.energy_tol},
                 {"cross_tol", k.cross_tol}};

  j["mode"] = to_string(c.mode);
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  j["strict"] = c.strict;
  return j;
}

RunConfig from_json(const json& j) {
  reject_unknown(j, "config",
                 {"params", "grid", "initial_data", "solver", "diagnostics", "identities", "checks",
                  "mode", "output_dir", "seed", "strict"});
  RunConfig c;
  if (j.contains("params")) {
    const json& p = j["params"];
    reject_unknown(p, "params", {"A", "gamma", "delta", "a1", "n", "a2", "tolerance"});
    take(p, "A", c.params.A);
    take(p, "gamma", c.params.gamma);
    take(p, "delta", c.params.delta);
    take(p, "a1", c.params.a1);
    take(p, "n", c.params.n);
    take(p, "tolerance", c.params.tolerance);
    if (p.contains("a2") && !p["a2"].is_null()) {
      double a2 = 0.0;
      take(p, "a2", a2);
      c.params.a2 = a2;
    }
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    reject_unknown(g, "grid", {"R_max", "N", "stretch", "ratio"});
    take(g, "R_max", c.grid.r_max);
    take(g, "N", c.grid.n);
    take(g, "stretch", c.grid.stretch);
    take(g, "ratio", c.grid.ratio);
  }
  if (j.contains("initial_data")) {
    const json& d = j["initial_data"];
    reject_unknown(d, "initial_data",
                   {"family", "rho_c", "sigma", "amplitude", "r_center", "width",
                    "far_field_density"});
    auto& s = c.initial_data.spec;
    take(d, "family", c.initial_data.family);
    take(d, "rho_c", s.rho_c);
    take(d, "sigma", s.sigma);
    take(d, "amplitude", s.amplitude);
    take(d, "r_center", s.r_center);
    take(d, "width", s.width);
    take(d, "far_field_density", s.far_field_density);
  }
  if (j.contains("solver")) {
    const json& v = j["solver"];
    reject_unknown(v, "solver",
                   {"scheme", "t_end", "dt_initial", "cfl_advective", "stability_factor_viscous",
                    "rho_floor", "dt_min", "max_steps", "h_ceiling", "guard_radius"});
    auto& s = c.solver;
    std::string scheme = to_string(s.scheme);
    take(v, "scheme", scheme);
    try {
      s.scheme = scheme_from_string(scheme);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    take(v, "t_end", s.t_end);
    take(v, "dt_initial", s.dt_initial);
    take(v, "cfl_advective", s.cfl_advective);
    take(v, "stability_factor_viscous", s.stability_factor_viscous);
    take(v, "rho_floor", s.rho_floor);
    take(v, "dt_min", s.dt_min);
    take(v, "max_steps", s.max_steps);
    take(v, "h_ceiling", s.h_ceiling);
    take(v, "guard_radius", s.guard_radius);
  }
  if (j.contains("diagnostics")) {
    const json& d = j["diagnostics"];
    reject_unknown(d, "diagnostics", {"p_list", "ball_radius", "output_cadence", "slack"});
    take(d, "p_list", c.diagnostics.p_list);
    take(d, "ball_radius", c.diagnostics.ball_radius);
    take(d, "output_cadence", c.diagnostics.output_cadence);
    take(d, "slack", c.diagnostics.slack);
  }
  if (j.contains("identities")) {
    const json& d = j["identities"];
    reject_unknown(d, "identities", {"field_samples", "mc_samples", "grid_sizes", "R_max"});
    take(d, "field_samples", c.identities.field_samples);
    take(d, "mc_samples", c.identities.mc_samples);
    take(d, "grid_sizes", c.identities.grid_sizes);
    take(d, "R_max", c.identities.r_max);
  }
  if (j.contains("checks")) {
    const json& d = j["checks"];
    reject_unknown(d, "checks",
                   {"mass", "energy", "positivity", "density_bounds", "cross_formulation",
                    "mass_tol", "energy_tol", "cross_tol"});
    auto& k = c.checks;
    take(d, "mass", k.mass);
    take(d, "energy", k.energy);
    take(d, "positivity", k.positivity);
    take(d, "density_bounds", k.density_bounds);
    take(d, "cross_formulation", k.cross_formulation);
    take(d, "mass_tol", k.mass_tol);
    take(d, "energy_tol", k.energy_tol);
    take(d, "cross_tol", k.cross_tol);
  }
  std::string mode = to_string(c.mode);
  take(j, "mode", mode);
  c.mode = mode_from_string(mode);
  take(j, "output_dir", c.output_dir);
  take(j, "seed", c.seed);
  take(j, "strict", c.strict);

  if (c.initial_data.family != "power_law_bump" && c.initial_data.family != "power_law_rest")
    throw ConfigError("unknown initial-data family '" + c.initial_data.family + "'");
  if (c.grid.stretch != "uniform" && c.grid.stretch != "geometric")
    throw ConfigError("unknown grid stretch '" + c.grid.stretch + "'");
  if (!(c.diagnostics.output_cadence > 0.0)) throw ConfigError("output_cadence must be > 0");
  c.solver.output_cadence = c.diagnostics.output_cadence;
  try {
    validate(c.solver);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  return from_json(j);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

std::string echo_config(const RunConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

void set_config_value(RunConfig& cfg, const std::string& axis, double value) {
  const auto dot = axis.find('.');
  json j = to_json(cfg);
  const std::string block = dot == std::string::npos ? "" : axis.substr(0, dot);
  const std::string key = dot == std::string::npos ? axis : axis.substr(dot + 1);
  if (axis == "params.a2" && !j["params"].contains("a2")) j["params"]["a2"] = value;
  json* slot = block.empty() ? &j : (j.contains(block) ? &j[block] : nullptr);
  if (!slot || !slot->is_object() || !slot->contains(key))
    throw ConfigError("unknown sweep axis '" + axis + "'");
  json& target = (*slot)[key];
  if (target.is_number_integer() || target.is_number_unsigned()) {
    if (value != std::floor(value)) throw ConfigError("axis '" + axis + "' needs integer values");
    if (target.is_number_unsigned() && value < 0.0)
      throw ConfigError("axis '" + axis + "' needs non-negative values");
    target = static_cast<std::int64_t>(value);
  } else if (target.is_number()) {
    target = value;
  } else {
    throw ConfigError("axis '" + axis + "' is not numeric");
  }
  cfg = from_json(j);
}

Params resolve_params(const ParamsConfig& pc) {
  try {
    return pc.a2 ? derive_constants_with_a2(pc.A, pc.gamma, pc.delta, pc.a1, pc.n, *pc.a2)
                 : derive_constants(pc.A, pc.gamma, pc.delta, pc.a1, pc.n);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
}

RadialGrid resolve_grid(const GridConfig& gc) {
  try {
    return build_grid(gc.r_max, gc.n,
                      gc.stretch == "geometric" ? Stretch::geometric(gc.ratio) : Stretch::uniform());
  } catch (const std::exception& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

PrimitiveState resolve_initial_state(const InitialDataConfig& ic, const RadialGrid& grid) {
  InitialDataSpec spec = ic.spec;
  if (ic.family == "power_law_rest") spec.amplitude = 0.0;
  if (!(spec.rho_c > 0.0) || !(spec.sigma > 0.0) || !(spec.width > 0.0) ||
      spec.far_field_density < 0.0)
    throw ConfigError("initial_data: rho_c, sigma, width must be > 0 and far_field_density >= 0");
  return make_initial_state(spec, grid);
}

}  // namespace rdns
