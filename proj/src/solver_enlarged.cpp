#include "rdns/solver_enlarged.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "operators.hpp"
#include "rdns/diagnostics.hpp"
#include "stepping.hpp"

namespace rdns {

EnlargedState to_enlarged(const PrimitiveState& s, const Params& p, const RadialGrid& grid) {
  const std::size_t n = s.rho.size();
  EnlargedState e;
  e.phi.resize(n);
  e.u = s.u;
  e.t = s.t;
  Field g(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(s.rho[i] > 0.0)) throw std::domain_error("to_enlarged: non-positive density");
    e.phi[i] = p.enthalpy_coefficient() * std::pow(s.rho[i], p.gamma - 1.0);
    g[i] = std::pow(s.rho[i], p.delta - 1.0);
  }
  e.psi = grid.d1(g, Parity::even);
  const double c = p.delta == 1.0 ? 0.0 : p.delta / (p.delta - 1.0);
  for (auto& x : e.psi) x *= c;
  return e;
}

PrimitiveState from_enlarged(const EnlargedState& e, const Params& p) {
  PrimitiveState s;
  s.rho.resize(e.phi.size());
  const double c = (p.gamma - 1.0) / (p.A * p.gamma);
  for (std::size_t i = 0; i < e.phi.size(); ++i) {
    if (!(e.phi[i] > 0.0)) throw std::domain_error("from_enlarged: non-positive phi");
    s.rho[i] = std::pow(c * e.phi[i], 1.0 / (p.gamma - 1.0));
  }
  s.u = e.u;
  s.t = e.t;
  return s;
}

Field enthalpy_power(const EnlargedState& e, const Params& p) {
  Field h(e.phi.size());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = p.a * std::exp(2.0 * p.iota * std::log(e.phi[i]));
  return h;
}

namespace {

void check_finite(const Field& f, const char* what, double t) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f[i])) {
      std::ostringstream os;
      os << "non-finite " << what << " at node " << i << " (t = " << t << ")";
      throw SimulationError(os.str());
    }
  }
}

void check_phi(const EnlargedState& e) {
  for (std::size_t i = 0; i < e.phi.size(); ++i) {
    if (!(e.phi[i] > 0.0)) {
      std::ostringstream os;
      os << "phi " << e.phi[i] << " at node " << i << " (t = " << e.t << ")";
      throw SimulationError(os.str());
    }
  }
}

EnlargedTendency evaluate(const EnlargedState& e, const Params& p, const RadialGrid& g,
                          const detail::FaceStencil& fs, bool viscous) {
  const std::size_t n = g.size();
  if (e.phi.size() != n || e.u.size() != n || e.psi.size() != n)
    throw std::invalid_argument("rhs_enlarged: field/grid size mismatch");
  check_phi(e);
  const Field h = enthalpy_power(e, p);
  const Field ur = g.d1(e.u, Parity::odd);
  const Field phr = g.d1(e.phi, Parity::even);
  const Field psr = g.d1(e.psi, Parity::odd);
  Field qr(n, 0.0);
  if (viscous) detail::strain_divergence(g, fs, {}, e.u, qr);

  EnlargedTendency t;
  t.dphi_dt.resize(n);
  t.du_dt.resize(n);
  t.dpsi_dt.resize(n);
  const double d = p.delta, m = p.m;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = e.u[i] / g.r(i);
    t.dphi_dt[i] = -e.u[i] * phr[i] - (p.gamma - 1.0) * e.phi[i] * (ur[i] + m * y);
    const double stretch = d * ur[i] + m * (d - 1.0) * y;
    t.du_dt[i] = -e.u[i] * ur[i] - phr[i] + 2.0 * p.a1 * d * h[i] * qr[i] +
                 2.0 * p.a1 * e.psi[i] * stretch;
    t.dpsi_dt[i] = -e.u[i] * psr[i] - stretch * e.psi[i] - d * h[i] * qr[i];
  }
  check_finite(t.dphi_dt, "dphi_dt", e.t);
  check_finite(t.du_dt, "du_dt", e.t);
  check_finite(t.dpsi_dt, "dpsi_dt", e.t);
  return t;
}

/// Crank-Nicolson for u_t = 2 a1 delta h q_r over `tau`; psi absorbs -du/(2 a1)
/// so that u + 2 a1 psi is untouched by the viscous substep.
void viscous_cn(EnlargedState& e, const Params& p, const RadialGrid& g,
                const detail::FaceStencil& fs, double tau) {
  const std::size_t n = g.size();
  check_phi(e);
  const Field h = enthalpy_power(e, p);
  std::vector<double> lo, di, up;
  detail::strain_matrix(g, fs, {}, lo, di, up);
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = 2.0 * p.a1 * p.delta * h[i];
    lo[i] *= sc;
    di[i] *= sc;
    up[i] *= sc;
  }
  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    double lu = di[i] * e.u[i];
    if (i > 0) lu += lo[i] * e.u[i - 1];
    if (i + 1 < n) lu += up[i] * e.u[i + 1];
    rhs[i] = e.u[i] + 0.5 * tau * lu;
  }
  std::vector<double> l2(n), d2(n), u2(n);
  for (std::size_t i = 0; i < n; ++i) {
    l2[i] = -0.5 * tau * lo[i];
    d2[i] = 1.0 - 0.5 * tau * di[i];
    u2[i] = -0.5 * tau * up[i];
  }
  detail::thomas(l2, d2, u2, rhs);
  for (std::size_t i = 0; i < n; ++i) e.psi[i] -= (rhs[i] - e.u[i]) / (2.0 * p.a1);
  e.u = std::move(rhs);
  check_finite(e.u, "u", e.t);
}

EnlargedState axpy(const EnlargedState& s, const EnlargedTendency& k, double dt) {
  EnlargedState o = s;
  for (std::size_t i = 0; i < s.phi.size(); ++i) {
    o.phi[i] += dt * k.dphi_dt[i];
    o.u[i] += dt * k.du_dt[i];
    o.psi[i] += dt * k.dpsi_dt[i];
  }
  o.t += dt;
  return o;
}

EnlargedState blend(const EnlargedState& a, double wa, const EnlargedState& b, double wb) {
  EnlargedState o = a;
  for (std::size_t i = 0; i < a.phi.size(); ++i) {
    o.phi[i] = wa * a.phi[i] + wb * b.phi[i];
    o.u[i] = wa * a.u[i] + wb * b.u[i];
    o.psi[i] = wa * a.psi[i] + wb * b.psi[i];
  }
  o.t = wa * a.t + wb * b.t;
  return o;
}

EnlargedState step_impl(const EnlargedState& s, const Params& p, const RadialGrid& g,
                        const detail::FaceStencil& fs, const SolverConfig& cfg, double dt,
                        const EnlargedSource& source) {
  const bool visc = cfg.scheme == Scheme::explicit_rk3;
  auto f = [&](const EnlargedState& x) {
    EnlargedTendency k = evaluate(x, p, g, fs, visc);
    if (source) source(x.t, k);
    return k;
  };
  auto rk3 = [&](const EnlargedState& x0) {
    const EnlargedState x1 = axpy(x0, f(x0), dt);
    const EnlargedState x2 = blend(x0, 0.75, axpy(x1, f(x1), dt), 0.25);
    EnlargedState x3 = blend(x0, 1.0 / 3.0, axpy(x2, f(x2), dt), 2.0 / 3.0);
    x3.t = x0.t + dt;
    return x3;
  };
  if (visc) return rk3(s);
  EnlargedState x = s;
  viscous_cn(x, p, g, fs, 0.5 * dt);
  x = rk3(x);
  viscous_cn(x, p, g, fs, 0.5 * dt);
  return x;
}

void guard_h(const EnlargedState& e, const Params& p, const RadialGrid& g, const SolverConfig& cfg) {
  const double R = cfg.guard_radius > 0.0 ? cfg.guard_radius : 0.5 * g.r_max();
  for (std::size_t i = 0; i < g.size() && g.r(i) <= R; ++i) {
    const double h = p.a * std::exp(2.0 * p.iota * std::log(e.phi[i]));
    if (!(h <= cfg.h_ceiling)) {
      std::ostringstream os;
      os << "h = " << h << " exceeds ceiling " << cfg.h_ceiling << " at r = " << g.r(i)
         << " (t = " << e.t << ")";
      throw SimulationError(os.str());
    }
  }
}

}  // namespace

EnlargedTendency rhs_enlarged(const EnlargedState& e, const Params& p, const RadialGrid& grid) {
  const detail::FaceStencil fs(grid, p.m);
  return evaluate(e, p, grid, fs, true);
}

double psi_constraint_residual(const EnlargedState& e, const Params& p, const RadialGrid& grid,
                               double R) {
  if (R <= 0.0) R = 0.5 * grid.r_max();
  const Field h = enthalpy_power(e, p);  // a phi^(2 iota)
  const Field hr = grid.d1(h, Parity::even);
  const double c = p.delta == 1.0 ? 0.0 : p.delta / (p.delta - 1.0);
  Field res(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) res[i] = e.psi[i] - c * hr[i];
  return ball_l2(grid, p.m, res, R);
}

EnlargedState step_enlarged(const EnlargedState& e, const Params& p, const RadialGrid& grid,
                            const SolverConfig& cfg, double dt, const EnlargedSource& source) {
  const detail::FaceStencil fs(grid, p.m);
  return step_impl(e, p, grid, fs, cfg, dt, source);
}

Trajectory simulate_enlarged(const EnlargedState& init, const Params& p, const RadialGrid& grid,
                             const SolverConfig& cfg, const EnlargedSource& source) {
  validate(cfg);
  if (grid.size() < 16) throw std::invalid_argument("simulate_enlarged: solver needs N >= 16");
  const detail::FaceStencil fs(grid, p.m);

  Trajectory traj;
  traj.formulation = Formulation::enlarged;
  auto record = [&](const EnlargedState& e, double cum) {
    traj.states.push_back(from_enlarged(e, p));
    traj.psi.push_back(e.psi);
    traj.dissipation_cum.push_back(cum);
    traj.clamp_cum.push_back(0);
    traj.constraint_residual.push_back(psi_constraint_residual(e, p, grid, cfg.guard_radius));
  };
  record(init, 0.0);

  EnlargedState e = init;
  PrimitiveState view = traj.states.back();
  double d_prev = dissipation_rate(view, p, grid);
  double cum = 0.0;
  detail::OutputClock clock(init.t, cfg.t_end, cfg.output_cadence);
  bool first = true;
  try {
    guard_h(e, p, grid, cfg);
    while (!clock.done(e.t)) {
      double dt = stable_dt(view, p, grid, cfg);
      if (first) dt = std::min(dt, cfg.dt_initial);
      first = false;
      if (dt < cfg.dt_min) {
        std::ostringstream os;
        os << "time step underflow: dt = " << dt << " at t = " << e.t;
        throw SimulationError(os.str());
      }
      if (traj.steps >= cfg.max_steps) throw SimulationError("step limit reached");
      bool hit = false;
      dt = clock.clip(e.t, dt, hit);
      e = step_impl(e, p, grid, fs, cfg, dt, source);
      if (hit) e.t = clock.landed();
      ++traj.steps;
      check_phi(e);
      guard_h(e, p, grid, cfg);
      view = from_enlarged(e, p);
      const double d_new = dissipation_rate(view, p, grid);
      cum += 0.5 * dt * (d_prev + d_new);
      d_prev = d_new;
      if (hit) {
        record(e, cum);
        clock.advance();
      }
    }
  } catch (const SimulationError& err) {
    traj.completed = false;
    traj.failure = err.what();
  }
  return traj;
}

}  // namespace rdns
