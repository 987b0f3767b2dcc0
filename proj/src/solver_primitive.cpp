#include "rdns/solver_primitive.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "operators.hpp"
#include "rdns/diagnostics.hpp"
#include "stepping.hpp"

namespace rdns {

std::string to_string(Scheme s) { return s == Scheme::imex ? "imex" : "explicit-rk3"; }

Scheme scheme_from_string(const std::string& s) {
  if (s == "explicit-rk3" || s == "explicit") return Scheme::explicit_rk3;
  if (s == "imex") return Scheme::imex;
  throw std::invalid_argument("unknown scheme '" + s + "'");
}

void validate(const SolverConfig& c) {
  if (!(c.dt_initial > 0.0)) throw std::invalid_argument("solver.dt_initial must be positive");
  if (!(c.cfl_advective > 0.0)) throw std::invalid_argument("solver.cfl_advective must be positive");
  if (!(c.stability_factor_viscous > 0.0))
    throw std::invalid_argument("solver.stability_factor_viscous must be positive");
  if (c.rho_floor < 0.0) throw std::invalid_argument("solver.rho_floor must be >= 0");
  if (c.t_end < 0.0) throw std::invalid_argument("solver.t_end must be >= 0");
  if (!(c.output_cadence > 0.0)) throw std::invalid_argument("solver.output_cadence must be positive");
}

namespace {

struct Work {
  Field rc, pd, pg, ur, pdr, pgr, div;
};

void check_finite(const Field& f, const char* what, double t) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f[i])) {
      std::ostringstream os;
      os << "non-finite " << what << " at node " << i << " (t = " << t << ")";
      throw SimulationError(os.str());
    }
  }
}

void guard_density(const PrimitiveState& s, ClampCounter* clamp, Field& rc) {
  const double floor = clamp ? clamp->floor : 0.0;
  rc.resize(s.rho.size());
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    const double r = s.rho[i];
    if (!(r > floor)) {
      if (floor <= 0.0 || !std::isfinite(r)) {
        std::ostringstream os;
        os << "density " << r << " at node " << i << " (t = " << s.t << ")";
        throw SimulationError(os.str());
      }
      rc[i] = floor;
      ++clamp->events;
    } else {
      rc[i] = r;
    }
  }
}

/// Tendency with or without the viscous terms.
Tendency evaluate(const PrimitiveState& s, const Params& p, const RadialGrid& g,
                  const detail::FaceStencil& fs, ClampCounter* clamp, bool viscous) {
  const std::size_t n = g.size();
  if (s.rho.size() != n || s.u.size() != n)
    throw std::invalid_argument("rhs_primitive: field/grid size mismatch");
  Work w;
  guard_density(s, clamp, w.rc);
  w.pd.resize(n);
  w.pg.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lr = std::log(w.rc[i]);
    w.pd[i] = std::exp(p.delta * lr);
    w.pg[i] = std::exp(p.gamma * lr);
  }
  w.ur = g.d1(s.u, Parity::odd);
  w.pgr = g.d1(w.pg, Parity::even);

  Tendency t;
  t.drho_dt.assign(n, 0.0);
  t.du_dt.assign(n, 0.0);

  // Continuity in flux form: d/dt (V_i rho_i) = -(G_{i+1} - G_i).
  const auto vol = g.shell_weights(p.m);
  double g_prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double g_next = 0.0;
    if (i + 1 < n) {
      g_next = fs.face_pow_m[i + 1] * (fs.wl[i + 1] * s.rho[i] * s.u[i] + fs.wr[i + 1] * s.rho[i + 1] * s.u[i + 1]);
    }
    t.drho_dt[i] = -(g_next - g_prev) / vol[i];
    g_prev = g_next;
  }

  for (std::size_t i = 0; i < n; ++i)
    t.du_dt[i] = -s.u[i] * w.ur[i] - p.A * w.pgr[i] / w.rc[i];

  if (viscous) {
    w.pdr = g.d1(w.pd, Parity::even);
    w.div.resize(n);
    detail::strain_divergence(g, fs, w.pd, s.u, w.div);
    for (std::size_t i = 0; i < n; ++i) {
      const double visc = 2.0 * p.a1 * p.delta * w.div[i] -
                          2.0 * p.a1 * p.m * w.pdr[i] * s.u[i] / g.r(i);
      t.du_dt[i] += visc / w.rc[i];
    }
  }
  check_finite(t.drho_dt, "drho_dt", s.t);
  check_finite(t.du_dt, "du_dt", s.t);
  return t;
}

/// Crank-Nicolson update of u over `tau` for the viscous operator with rho frozen.
void viscous_cn(PrimitiveState& s, const Params& p, const RadialGrid& g,
                const detail::FaceStencil& fs, ClampCounter* clamp, double tau) {
  const std::size_t n = g.size();
  Field rc;
  guard_density(s, clamp, rc);
  Field pd(n);
  for (std::size_t i = 0; i < n; ++i) pd[i] = std::pow(rc[i], p.delta);
  const Field pdr = g.d1(pd, Parity::even);
  std::vector<double> lo, di, up;
  detail::strain_matrix(g, fs, pd, lo, di, up);
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = 2.0 * p.a1 * p.delta / rc[i];
    lo[i] *= sc;
    di[i] = di[i] * sc - 2.0 * p.a1 * p.m * pdr[i] / (g.r(i) * rc[i]);
    up[i] *= sc;
  }
  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    double lu = di[i] * s.u[i];
    if (i > 0) lu += lo[i] * s.u[i - 1];
    if (i + 1 < n) lu += up[i] * s.u[i + 1];
    rhs[i] = s.u[i] + 0.5 * tau * lu;
  }
  std::vector<double> l2(n), d2(n), u2(n);
  for (std::size_t i = 0; i < n; ++i) {
    l2[i] = -0.5 * tau * lo[i];
    d2[i] = 1.0 - 0.5 * tau * di[i];
    u2[i] = -0.5 * tau * up[i];
  }
  detail::thomas(l2, d2, u2, rhs);
  s.u = std::move(rhs);
  check_finite(s.u, "u", s.t);
}

}  // namespace

Tendency rhs_primitive(const PrimitiveState& state, const Params& params, const RadialGrid& grid,
                       ClampCounter* clamp) {
  const detail::FaceStencil fs(grid, params.m);
  return evaluate(state, params, grid, fs, clamp, true);
}

double stable_dt(const PrimitiveState& s, const Params& p, const RadialGrid& g,
                 const SolverConfig& cfg) {
  const double h = g.min_spacing();
  // Both bounds are monotone in rho, so only the extremes need powers;
  // max|u| + c(max rho) bounds max(|u| + c).
  double umax = 0.0, rmin = HUGE_VAL, rmax = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = std::max(s.rho[i], cfg.rho_floor);
    umax = std::max(umax, std::abs(s.u[i]));
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  if (!(rmin > 0.0)) {
    std::ostringstream os;
    os << "density " << rmin << " in stable_dt (t = " << s.t << ")";
    throw SimulationError(os.str());
  }
  const double vmax = umax + std::sqrt(p.A * p.gamma * std::pow(rmax, p.gamma - 1.0));
  const double rmin_pow = std::pow(rmin, 1.0 - p.delta);
  double dt = std::min(h, cfg.cfl_advective * h / vmax);
  if (cfg.scheme == Scheme::explicit_rk3)
    dt = std::min(dt, cfg.stability_factor_viscous * h * h * rmin_pow / (2.0 * p.a1 * p.delta));
  return dt;
}

namespace {

PrimitiveState axpy(const PrimitiveState& s, const Tendency& k, double dt) {
  PrimitiveState o = s;
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    o.rho[i] += dt * k.drho_dt[i];
    o.u[i] += dt * k.du_dt[i];
  }
  o.t += dt;
  return o;
}

PrimitiveState blend(const PrimitiveState& a, double wa, const PrimitiveState& b, double wb) {
  PrimitiveState o = a;
  for (std::size_t i = 0; i < a.rho.size(); ++i) {
    o.rho[i] = wa * a.rho[i] + wb * b.rho[i];
    o.u[i] = wa * a.u[i] + wb * b.u[i];
  }
  o.t = wa * a.t + wb * b.t;
  return o;
}

PrimitiveState step_impl(const PrimitiveState& s, const Params& p, const RadialGrid& g,
                         const detail::FaceStencil& fs, const SolverConfig& cfg, double dt,
                         ClampCounter* clamp, const PrimitiveSource& source) {
  const bool visc = cfg.scheme == Scheme::explicit_rk3;
  auto f = [&](const PrimitiveState& x) {
    Tendency k = evaluate(x, p, g, fs, clamp, visc);
    if (source) source(x.t, k);
    return k;
  };
  auto rk3 = [&](const PrimitiveState& x0) {
    // Shu-Osher SSP-RK3.
    const PrimitiveState x1 = axpy(x0, f(x0), dt);
    const PrimitiveState x2 = blend(x0, 0.75, axpy(x1, f(x1), dt), 0.25);
    PrimitiveState x3 = blend(x0, 1.0 / 3.0, axpy(x2, f(x2), dt), 2.0 / 3.0);
    x3.t = x0.t + dt;
    return x3;
  };
  if (visc) return rk3(s);
  PrimitiveState x = s;
  viscous_cn(x, p, g, fs, clamp, 0.5 * dt);
  x = rk3(x);
  viscous_cn(x, p, g, fs, clamp, 0.5 * dt);
  return x;
}

}  // namespace

PrimitiveState step(const PrimitiveState& state, const Params& params, const RadialGrid& grid,
                    const SolverConfig& cfg, double dt, ClampCounter* clamp,
                    const PrimitiveSource& source) {
  const detail::FaceStencil fs(grid, params.m);
  return step_impl(state, params, grid, fs, cfg, dt, clamp, source);
}

Trajectory simulate(const PrimitiveState& init, const Params& params, const RadialGrid& grid,
                    const SolverConfig& cfg, const PrimitiveSource& source) {
  validate(cfg);
  if (grid.size() < 16) throw std::invalid_argument("simulate: solver needs N >= 16");
  const detail::FaceStencil fs(grid, params.m);
  ClampCounter clamp{cfg.rho_floor, 0};

  Trajectory traj;
  traj.formulation = Formulation::primitive;
  traj.states.push_back(init);
  traj.dissipation_cum.push_back(0.0);
  traj.clamp_cum.push_back(0);

  PrimitiveState s = init;
  double d_prev = dissipation_rate(s, params, grid);
  double cum = 0.0;
  detail::OutputClock clock(init.t, cfg.t_end, cfg.output_cadence);
  bool first = true;
  try {
    while (!clock.done(s.t)) {
      double dt = stable_dt(s, params, grid, cfg);
      if (first) dt = std::min(dt, cfg.dt_initial);
      first = false;
      if (dt < cfg.dt_min) {
        std::ostringstream os;
        os << "time step underflow: dt = " << dt << " at t = " << s.t;
        throw SimulationError(os.str());
      }
      if (traj.steps >= cfg.max_steps) throw SimulationError("step limit reached");
      bool hit = false;
      dt = clock.clip(s.t, dt, hit);
      s = step_impl(s, params, grid, fs, cfg, dt, &clamp, source);
      if (hit) s.t = clock.landed();
      ++traj.steps;
      const double d_new = dissipation_rate(s, params, grid);
      cum += 0.5 * dt * (d_prev + d_new);
      d_prev = d_new;
      if (hit) {
        traj.states.push_back(s);
        traj.dissipation_cum.push_back(cum);
        traj.clamp_cum.push_back(clamp.events);
        clock.advance();
      }
    }
  } catch (const SimulationError& e) {
    traj.completed = false;
    traj.failure = e.what();
  }
  traj.clamp_events = clamp.events;
  return traj;
}

}  // namespace rdns
