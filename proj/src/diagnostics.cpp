#include "rdns/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rdns/initial_data.hpp"

namespace rdns {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ball_radius_or_default(double R, const RadialGrid& g) { return R > 0.0 ? R : 0.5 * g.r_max(); }
}  // namespace

double omega(int n) {
  if (n == 2) return 2.0 * std::numbers::pi;
  if (n == 3) return 4.0 * std::numbers::pi;
  throw std::invalid_argument("omega: n must be 2 or 3");
}

double mass(const PrimitiveState& s, const RadialGrid& grid, int n) {
  return omega(n) * radial_moment(grid, s.rho, n - 1);
}

Momentum momentum(const PrimitiveState& s, const RadialGrid& grid, int m) {
  Momentum out;
  const auto w = grid.shell_weights(m);
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) acc += w[i] * s.rho[i] * s.u[i];
  out.radial_integral = acc;
  return out;
}

double dissipation_rate(const PrimitiveState& s, const Params& p, const RadialGrid& grid) {
  const Field ur = grid.d1(s.u, Parity::odd);
  const auto w = grid.shell_weights(p.m);
  const double d = p.delta, m = p.m;
  const double cx = -2.0 * (1.0 - d) * m;
  const double cy = m - (1.0 - d) * m * m;
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double y = s.u[i] / grid.r(i);
    const double q = d * ur[i] * ur[i] + cx * ur[i] * y + cy * y * y;
    acc += w[i] * std::pow(s.rho[i], d) * q;
  }
  return 2.0 * p.a1 * acc;
}

Energy energy(const PrimitiveState& s, const Params& p, const RadialGrid& grid) {
  const auto w = grid.shell_weights(p.m);
  double e = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double rho = s.rho[i];
    e += w[i] * (0.5 * rho * s.u[i] * s.u[i] + p.A / (p.gamma - 1.0) * std::pow(rho, p.gamma));
  }
  return {e, dissipation_rate(s, p, grid)};
}

double bd_entropy(const PrimitiveState& s, const Params& p, const RadialGrid& grid) {
  const Field v = effective_velocity(s, p, grid);
  Field g(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) g[i] = std::pow(s.rho[i], p.delta - 0.5);
  const Field gr = grid.d1(g, Parity::even);
  const auto w = grid.shell_weights(p.m);
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    acc += w[i] * (s.rho[i] * v[i] * v[i] + gr[i] * gr[i] + std::pow(s.rho[i], p.gamma));
  return acc;
}

double ball_l2(const RadialGrid& grid, int m, const Field& f, double R) {
  const auto w = grid.shell_weights(m);
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size() && grid.r(i) <= R; ++i) acc += w[i] * f[i] * f[i];
  return std::sqrt(acc);
}

double ResidualSeries::max() const {
  double mx = 0.0;
  for (double x : norm)
    if (std::isfinite(x)) mx = std::max(mx, x);
  return mx;
}

ResidualSeries v_residual(const Trajectory& traj, const Params& p, const RadialGrid& grid,
                          double R) {
  const std::size_t ns = traj.states.size();
  if (ns < 3) throw std::invalid_argument("v_residual: need at least 3 snapshots");
  R = ball_radius_or_default(R, grid);
  std::vector<Field> vs(ns);
  std::vector<double> ts(ns);
  for (std::size_t k = 0; k < ns; ++k) {
    vs[k] = effective_velocity(traj.states[k], p, grid);
    ts[k] = traj.states[k].t;
  }
  const double K = p.A * p.gamma / (2.0 * p.a1 * p.delta);
  ResidualSeries out;
  const std::size_t n = grid.size();
  for (std::size_t k = 0; k < ns; ++k) {
    const std::size_t j0 = k == 0 ? 0 : (k + 1 == ns ? ns - 3 : k - 1);
    const std::array<double, 3> tt{ts[j0], ts[j0 + 1], ts[j0 + 2]};
    const auto w = fd_weights(ts[k], tt, 1);
    const auto& st = traj.states[k];
    const Field vr = grid.d1(vs[k], Parity::odd);
    Field res(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double vt = w[0] * vs[j0][i] + w[1] * vs[j0 + 1][i] + w[2] * vs[j0 + 2][i];
      res[i] = vt + st.u[i] * vr[i] +
               K * std::pow(st.rho[i], p.gamma - p.delta) * (vs[k][i] - st.u[i]);
    }
    out.t.push_back(ts[k]);
    out.norm.push_back(ball_l2(grid, p.m, res, R));
  }
  return out;
}

std::vector<double> duhamel_v(const std::vector<double>& t, const std::vector<double>& rho_path,
                              const std::vector<double>& u_path, double v0, const Params& p) {
  const std::size_t n = t.size();
  const double K = p.A * p.gamma / (2.0 * p.a1 * p.delta);
  std::vector<double> out(n);
  if (n == 0) return out;
  auto rate = [&](std::size_t j) { return K * std::pow(rho_path[j], p.gamma - p.delta); };
  double I = 0.0, J = 0.0;
  double g_prev = rate(0);
  double f_prev = g_prev * u_path[0];  // integrand of J times exp(I) at s = t_0
  out[0] = v0;
  for (std::size_t j = 1; j < n; ++j) {
    const double dt = t[j] - t[j - 1];
    const double g = rate(j);
    const double I_new = I + 0.5 * dt * (g_prev + g);
    const double f = g * u_path[j] * std::exp(I_new);
    J += 0.5 * dt * (f_prev + f);
    I = I_new;
    g_prev = g;
    f_prev = f;
    out[j] = std::exp(-I) * (v0 + J);
  }
  return out;
}

CharacteristicResult characteristic_v(const Trajectory& traj, double r0, const Params& p,
                                      const RadialGrid& grid, std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("characteristic_v: stride must be positive");
  CharacteristicResult res;
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < traj.states.size(); k += stride) idx.push_back(k);
  if (idx.empty()) return res;
  auto inside = [&](double x) {
    if (!(x >= 0.0 && x <= grid.r_max()))
      throw std::domain_error("characteristic_v: path left [0, R_max]");
  };
  inside(r0);
  double X = r0;
  std::vector<double> rho_path, u_path;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const auto& s = traj.states[idx[j]];
    const Field v = effective_velocity(s, p, grid);
    res.t.push_back(s.t);
    res.path.push_back(X);
    res.v_along.push_back(grid.interpolate(v, Parity::odd, X));
    rho_path.push_back(grid.interpolate(s.rho, Parity::even, X));
    u_path.push_back(grid.interpolate(s.u, Parity::odd, X));
    if (j + 1 < idx.size()) {
      const auto& s1 = traj.states[idx[j + 1]];
      const double dt = s1.t - s.t;
      const double k1 = u_path.back();
      const double Xp = X + dt * k1;
      inside(Xp);
      const double k2 = grid.interpolate(s1.u, Parity::odd, Xp);
      X += 0.5 * dt * (k1 + k2);
      inside(X);
    }
  }
  res.v_formula = duhamel_v(res.t, rho_path, u_path, res.v_along.front(), p);
  for (std::size_t j = 0; j < res.t.size(); ++j)
    res.max_mismatch = std::max(res.max_mismatch, std::abs(res.v_along[j] - res.v_formula[j]));
  return res;
}

Field running_min(const Field& rho0) {
  Field out(rho0.size());
  double mn = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rho0.size(); ++i) {
    mn = std::min(mn, rho0[i]);
    out[i] = mn;
  }
  return out;
}

Field lower_bound_profile(const Field& rho0, const Params& p, const RadialGrid& grid) {
  const Field lo = running_min(rho0);
  const double e = 1.0 / (2.0 - 2.0 * p.delta);
  Field out(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i)
    out[i] = lo[i] / ((std::pow(grid.r(i), e) + 1.0) * (lo[i] + 1.0));
  return out;
}

BoundReport density_bounds(const Trajectory& traj, const Field& rho0, const Params& p,
                           const RadialGrid& grid, double R, double T, double slack) {
  R = ball_radius_or_default(R, grid);
  const Field lb = lower_bound_profile(rho0, p, grid);
  BoundReport rep;
  rep.min_rho_ball = std::numeric_limits<double>::infinity();
  std::size_t nb = 0;
  while (nb < grid.size() && grid.r(nb) <= R) ++nb;

  for (const auto& s : traj.states) {
    for (std::size_t i = 0; i < nb; ++i) rep.min_rho_ball = std::min(rep.min_rho_ball, s.rho[i]);
    if (s.t > 0.5 * T) continue;
    for (std::size_t i = 0; i < nb; ++i) {
      rep.C_low = std::max(rep.C_low, lb[i] / s.rho[i]);
      rep.C_up = std::max(rep.C_up, s.rho[i]);
      rep.C_tail = std::max(rep.C_tail, s.rho[i] * std::pow(grid.r(i), p.m));
      ++rep.samples_fit;
    }
  }
  for (const auto& s : traj.states) {
    if (s.t <= 0.5 * T) continue;
    for (std::size_t i = 0; i < nb; ++i) {
      const double lower = lb[i] / rep.C_low;
      const double env = std::min(rep.C_up, rep.C_tail * std::pow(grid.r(i), -p.m));
      rep.worst_lower_ratio = std::max(rep.worst_lower_ratio, lower / s.rho[i]);
      rep.worst_upper_ratio = std::max(rep.worst_upper_ratio, s.rho[i] / env);
      if (s.rho[i] * slack < lower) ++rep.lower_violations;
      if (s.rho[i] > slack * env) ++rep.upper_violations;
      ++rep.samples_test;
    }
  }
  return rep;
}

PositiveBoundReport positive_density_bounds(const Trajectory& traj, const RadialGrid& grid,
                                            double R, double T, double slack) {
  R = ball_radius_or_default(R, grid);
  std::size_t nb = 0;
  while (nb < grid.size() && grid.r(nb) <= R) ++nb;
  PositiveBoundReport rep;
  rep.min_rho = std::numeric_limits<double>::infinity();
  for (const auto& s : traj.states) {
    for (std::size_t i = 0; i < nb; ++i) {
      rep.min_rho = std::min(rep.min_rho, s.rho[i]);
      rep.max_rho = std::max(rep.max_rho, s.rho[i]);
      if (s.t <= 0.5 * T) rep.C = std::max({rep.C, s.rho[i], 1.0 / s.rho[i]});
    }
  }
  for (const auto& s : traj.states) {
    if (s.t <= 0.5 * T) continue;
    for (std::size_t i = 0; i < nb; ++i)
      if (s.rho[i] > slack * rep.C || s.rho[i] * slack * rep.C < 1.0) ++rep.violations;
  }
  return rep;
}

std::vector<LedgerEntry> lp_ledger(const PrimitiveState& s, const Params& p,
                                   const RadialGrid& grid, const std::vector<double>& p_list) {
  std::vector<LedgerEntry> out;
  const std::size_t n = grid.size();
  const auto wm = grid.shell_weights(p.m);
  const auto w0 = grid.quad_weights();
  const Field v = effective_velocity(s, p, grid);
  double pt = kNaN;
  try {
    pt = p_tilde(p.m, p.delta);
  } catch (const std::domain_error&) {
  }
  auto tag = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return std::string(buf);
  };
  for (double q : p_list) {
    const bool ok = q >= 2.0 && std::isfinite(pt) && q < pt;
    double au = 0.0, av = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      au += wm[i] * s.rho[i] * std::pow(std::abs(s.u[i]), q);
      av += wm[i] * s.rho[i] * std::pow(std::abs(v[i]), q);
    }
    out.push_back({"u_p" + tag(q), std::pow(au, 1.0 / q), ok});
    out.push_back({"v_p" + tag(q), std::pow(av, 1.0 / q), ok});
  }
  const double alpha = alpha_weight(p.delta);
  for (int l = 2; l <= 5; ++l) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      acc += w0[i] * std::pow(s.rho[i], 1.0 - alpha) * std::pow(std::abs(s.u[i]), l);
    out.push_back({"ua_l" + std::to_string(l), std::pow(acc, 1.0 / l), true});
  }
  const Field ur = grid.d1(s.u, Parity::odd);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = s.u[i] / grid.r(i);
    acc += wm[i] * std::pow(s.rho[i], p.delta - 1.0) * (ur[i] * ur[i] + y * y);
  }
  out.push_back({"du_w", std::sqrt(acc), true});
  return out;
}

std::vector<DiagnosticsRecord> build_records(const Trajectory& traj, const Params& p,
                                             const RadialGrid& grid,
                                             const DiagnosticsOptions& opt) {
  std::vector<DiagnosticsRecord> out;
  if (traj.states.empty()) return out;
  const double R = ball_radius_or_default(opt.ball_radius, grid);
  const double T = traj.states.back().t;
  std::size_t nb = 0;
  while (nb < grid.size() && grid.r(nb) <= R) ++nb;

  ResidualSeries vres;
  if (traj.states.size() >= 3) vres = v_residual(traj, p, grid, R);

  const bool positive = traj.states.front().far_field_density > 0.0;
  const Field& rho0 = traj.states.front().rho;
  const Field lb = lower_bound_profile(rho0, p, grid);
  double c_fit;
  if (positive)
    c_fit = positive_density_bounds(traj, grid, R, T, opt.slack).C;
  else
    c_fit = density_bounds(traj, rho0, p, grid, R, T, opt.slack).C_low;

  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const auto& s = traj.states[k];
    DiagnosticsRecord rec;
    rec.t = s.t;
    rec.mass = mass(s, grid, p.n);
    rec.momentum_radial = momentum(s, grid, p.m).radial_integral;
    rec.energy = energy(s, p, grid).E;
    rec.dissipation_cum = k < traj.dissipation_cum.size() ? traj.dissipation_cum[k] : kNaN;
    rec.bd_entropy = bd_entropy(s, p, grid);
    const Field v = effective_velocity(s, p, grid);
    for (double x : v) rec.v_inf = std::max(rec.v_inf, std::abs(x));
    rec.v_resid = vres.norm.empty() ? kNaN : vres.norm[k];
    rec.rho_min = std::numeric_limits<double>::infinity();
    rec.lb_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nb; ++i) {
      rec.rho_min = std::min(rec.rho_min, s.rho[i]);
      rec.ub_tail = std::max(rec.ub_tail, s.rho[i] * std::pow(grid.r(i), p.m));
      const double m = positive ? s.rho[i] * opt.slack * c_fit - 1.0
                                : s.rho[i] * opt.slack * c_fit / lb[i] - 1.0;
      rec.lb_margin = std::min(rec.lb_margin, m);
    }
    for (double x : s.rho) rec.rho_max = std::max(rec.rho_max, x);
    rec.clamps = k < traj.clamp_cum.size() ? traj.clamp_cum[k] : traj.clamp_events;
    rec.ledger = lp_ledger(s, p, grid, opt.p_list);
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<std::string> csv_columns(const std::vector<LedgerEntry>& ledger_template) {
  std::vector<std::string> cols{"t",          "mass",      "momentum_radial", "energy",
                                "dissipation_cum", "bd_entropy", "v_inf", "v_resid",   "rho_min",
                                "rho_max",    "lb_margin", "ub_tail",         "clamps"};
  for (const auto& e : ledger_template) cols.push_back(e.name);
  return cols;
}

}  // namespace rdns
