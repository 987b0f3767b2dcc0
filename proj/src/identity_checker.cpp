#include "rdns/identity_checker.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "rdns/diagnostics.hpp"
#include "rdns/initial_data.hpp"
#include "rdns/solver_enlarged.hpp"
#include "rdns/solver_primitive.hpp"

namespace rdns {

namespace {

using J = Jet<3>;

double wnorm(const RadialGrid& g, int m, const Field& f) {
  const auto w = g.shell_weights(m);
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += w[i] * f[i] * f[i];
  return std::sqrt(acc);
}

IdentityResult finish(std::string name, const RadialGrid& g, int m, const Field& residual,
                      const std::vector<const Field*>& terms, double threshold) {
  IdentityResult r;
  r.name = std::move(name);
  r.residual_norm = wnorm(g, m, residual);
  for (const Field* t : terms) r.scale = std::max(r.scale, wnorm(g, m, *t));
  r.max_relative_residual = r.scale > 0.0 ? r.residual_norm / r.scale : r.residual_norm;
  r.threshold = threshold;
  r.pass = std::isfinite(r.max_relative_residual) && r.max_relative_residual <= threshold;
  return r;
}

struct DCoeffs {
  double t2_mixed, t2_square, b_square, b_power, t4_y, t5;
};

DCoeffs d_coeffs(const Params& p, double alpha, int ell) {
  const double d = p.delta, m = p.m, l = ell, a = alpha;
  DCoeffs c;
  c.t2_mixed = m * (1.0 - d) / (d - a);
  c.t2_square = (m / l) * (1.0 - a) / (d - a);
  c.b_square = 2.0 * m * (l * d - a - (l - 1.0)) / (l * (d - a));
  c.b_power = ((l - 1.0) * a + l + 1.0) / (l * (l + 1.0));
  c.t4_y = m * (1.0 - a) / l;
  c.t5 = (l - 1.0) * a * (1.0 - a) / (2.0 * l * (l + 1.0) * p.a1 * d);
  return c;
}

void check_ell_alpha(int ell, double alpha) {
  if (ell < 2 || ell > 5) throw std::invalid_argument("ell must be in {2, 3, 4, 5}");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in [0, 1)");
}

}  // namespace

SyntheticFields SyntheticFields::sample(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * U(rng); };
  SyntheticFields f;
  f.b = in(0.2, 1.0);
  f.w = in(0.8, 1.6);
  f.c1 = in(0.0, 1.0);
  f.c2 = in(0.0, 0.5);
  f.e0 = in(0.1, 1.0);
  f.e1 = in(0.1, 0.5);
  f.e2 = in(0.01, 0.1);
  f.f0 = in(-1.0, 1.0);
  f.f1 = in(-0.5, 0.5);
  return f;
}

void SyntheticFields::sample_on(const RadialGrid& g, int m, Field& rho_out, Field& u_out,
                                Field& rho_t, Field& u_t_out) const {
  const std::size_t n = g.size();
  rho_out.resize(n);
  u_out.resize(n);
  rho_t.resize(n);
  u_t_out.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const J r = J::variable(g.r(i));
    const J rr = rho(r), uu = u(r);
    rho_out[i] = rr.value();
    u_out[i] = uu.value();
    u_t_out[i] = u_t(r).value();
    rho_t[i] = (-(rr * uu).derivative() - m * rr * uu / r).value();
  }
}

IdentityResult multiplier_identity_jet(const SyntheticFields& f, const Params& p, double alpha,
                                       int ell, const RadialGrid& grid, FluxDerivative flux) {
  check_ell_alpha(ell, alpha);
  const std::size_t n = grid.size();
  const double d = p.delta, m = p.m, a1 = p.a1, a = alpha, l = ell;
  const DCoeffs c = d_coeffs(p, alpha, ell);
  Field lhs(n), t1(n), t2(n), t3(n), t4(n), t5(n), bflux(n);
  for (std::size_t i = 0; i < n; ++i) {
    const J r = J::variable(grid.r(i));
    const J rho = f.rho(r), u = f.u(r), ut = f.u_t(r);
    const J rho_r = rho.derivative(), u_r = u.derivative();
    const J rho_t = -(rho * u).derivative() - m * rho * u / r;
    const J pd = pow(rho, d);
    const J q = u_r + m * u / r;
    const J mom = rho * ut + rho * u * u_r - 2.0 * a1 * d * (pd * q).derivative() +
                  2.0 * a1 * m * pd.derivative() * u / r;
    const J au = abs(u);
    const J w = ipow(au, ell - 2);
    const J ul = ipow(au, ell);
    const J y = u / r;
    lhs[i] = (mom * pow(rho, -a) * w * u).value();
    t1[i] = ((1.0 - a) / l * pow(rho, -a) * rho_t * ul + pow(rho, 1.0 - a) * w * u * ut).value();
    t2[i] = (2.0 * (l - 1.0) * a1 * d * pow(rho, d - a) * w *
             (u_r * u_r - c.t2_mixed * u_r * y + c.t2_square * y * y))
                .value();
    const J B = a1 * d * pow(rho, d - a) * w * (2.0 * u * u_r + c.b_square * u * y) -
                c.b_power * pow(rho, 1.0 - a) * u * ul;
    bflux[i] = B.value();
    t3[i] = -B.derivative().value();
    const J v = u + 2.0 * a1 * d * pow(rho, d - 2.0) * rho_r;
    t4[i] = (-pow(rho, 1.0 - a) * v * u * w * (a * u_r - c.t4_y * y)).value();
    t5[i] = (-c.t5 * pow(rho, 2.0 - d - a) * (v - u) * u * ul).value();
  }
  if (flux == FluxDerivative::discrete) {
    const Field br = grid.d1(bflux, Parity::odd);
    for (std::size_t i = 0; i < n; ++i) t3[i] = -br[i];
  }
  Field res(n);
  for (std::size_t i = 0; i < n; ++i) res[i] = lhs[i] - (t1[i] + t2[i] + t3[i] + t4[i] + t5[i]);
  const bool exact = flux == FluxDerivative::exact;
  return finish(exact ? "multiplier_exact" : "multiplier_discrete_flux", grid, p.m, res,
                {&lhs, &t1, &t2, &t3, &t4, &t5}, exact ? 1e-12 : 1e-2);
}

IdentityResult multiplier_identity(const Field& rho, const Field& u, const Field& rho_t,
                                   const Field& u_t, const Params& p, double alpha, int ell,
                                   const RadialGrid& grid, double consistency_tol) {
  check_ell_alpha(ell, alpha);
  const std::size_t n = grid.size();
  if (rho.size() != n || u.size() != n || rho_t.size() != n || u_t.size() != n)
    throw std::invalid_argument("multiplier_identity: field/grid size mismatch");
  const double d = p.delta, m = p.m, a1 = p.a1, a = alpha, l = ell;
  const DCoeffs c = d_coeffs(p, alpha, ell);

  const Field rho_r = grid.d1(rho, Parity::even);
  const Field u_r = grid.d1(u, Parity::odd);
  Field cont(n);
  for (std::size_t i = 0; i < n; ++i)
    cont[i] = -u[i] * rho_r[i] - rho[i] * (u_r[i] + m * u[i] / grid.r(i));
  {
    Field diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = rho_t[i] - cont[i];
    const double sc = std::max(wnorm(grid, p.m, cont), wnorm(grid, p.m, rho_t));
    if (wnorm(grid, p.m, diff) > consistency_tol * sc)
      throw std::invalid_argument("multiplier_identity: rho_t does not satisfy the continuity equation");
  }

  Field pd(n), flux_in(n);
  for (std::size_t i = 0; i < n; ++i) {
    pd[i] = std::pow(rho[i], d);
    flux_in[i] = pd[i] * (u_r[i] + m * u[i] / grid.r(i));
  }
  const Field pdr = grid.d1(pd, Parity::even);
  const Field fr = grid.d1(flux_in, Parity::odd);
  PrimitiveState st;
  st.rho = rho;
  st.u = u;
  const Field v = effective_velocity(st, p, grid);

  Field lhs(n), t1(n), t2(n), t3(n), t4(n), t5(n), B(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid.r(i), y = u[i] / r;
    const double au = std::abs(u[i]);
    const double w = std::pow(au, ell - 2), ul = std::pow(au, ell);
    const double mom = rho[i] * u_t[i] + rho[i] * u[i] * u_r[i] - 2.0 * a1 * d * fr[i] +
                       2.0 * a1 * m * pdr[i] * y;
    lhs[i] = mom * std::pow(rho[i], -a) * w * u[i];
    t1[i] = (1.0 - a) / l * std::pow(rho[i], -a) * rho_t[i] * ul +
            std::pow(rho[i], 1.0 - a) * w * u[i] * u_t[i];
    t2[i] = 2.0 * (l - 1.0) * a1 * d * std::pow(rho[i], d - a) * w *
            (u_r[i] * u_r[i] - c.t2_mixed * u_r[i] * y + c.t2_square * y * y);
    B[i] = a1 * d * std::pow(rho[i], d - a) * w * (2.0 * u[i] * u_r[i] + c.b_square * u[i] * y) -
           c.b_power * std::pow(rho[i], 1.0 - a) * u[i] * ul;
    t4[i] = -std::pow(rho[i], 1.0 - a) * v[i] * u[i] * w * (a * u_r[i] - c.t4_y * y);
    t5[i] = -c.t5 * std::pow(rho[i], 2.0 - d - a) * (v[i] - u[i]) * u[i] * ul;
  }
  const Field br = grid.d1(B, Parity::odd);
  Field res(n);
  for (std::size_t i = 0; i < n; ++i) {
    t3[i] = -br[i];
    res[i] = lhs[i] - (t1[i] + t2[i] + t3[i] + t4[i] + t5[i]);
  }
  return finish("multiplier_fd", grid, p.m, res, {&lhs, &t1, &t2, &t3, &t4, &t5}, 1e-2);
}

IdentityResult multiplier_flux_integral(const SyntheticFields& f, const Params& p, double alpha,
                                        int ell, const RadialGrid& grid) {
  check_ell_alpha(ell, alpha);
  const std::size_t n = grid.size();
  const double d = p.delta, a1 = p.a1, a = alpha;
  const DCoeffs c = d_coeffs(p, alpha, ell);
  Field br(n);
  for (std::size_t i = 0; i < n; ++i) {
    const J r = J::variable(grid.r(i));
    const J rho = f.rho(r), u = f.u(r);
    const J u_r = u.derivative();
    const J au = abs(u);
    const J B = a1 * d * pow(rho, d - a) * ipow(au, ell - 2) * (2.0 * u * u_r + c.b_square * u * u / r) -
                c.b_power * pow(rho, 1.0 - a) * u * ipow(au, ell);
    br[i] = B.derivative().value();
  }
  const auto w = grid.quad_weights();
  double integral = 0.0, absint = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    integral += w[i] * br[i];
    absint += w[i] * std::abs(br[i]);
  }
  IdentityResult r;
  r.name = "multiplier_flux_integral";
  r.residual_norm = std::abs(integral);
  r.scale = absint;
  r.max_relative_residual = absint > 0.0 ? std::abs(integral) / absint : std::abs(integral);
  r.threshold = 1e-2;
  r.pass = r.max_relative_residual <= r.threshold;
  return r;
}

IdentityResult reformulation_identity(const Field& rho, const Field& u, const Params& p,
                                      const RadialGrid& grid) {
  const std::size_t n = grid.size();
  PrimitiveState st;
  st.rho = rho;
  st.u = u;
  const Tendency tp = rhs_primitive(st, p, grid);
  const EnlargedState e = to_enlarged(st, p, grid);
  const EnlargedTendency te = rhs_enlarged(e, p, grid);

  Field phi_chain(n), g(n);
  for (std::size_t i = 0; i < n; ++i) {
    phi_chain[i] = p.A * p.gamma * std::pow(rho[i], p.gamma - 2.0) * tp.drho_dt[i];
    g[i] = std::pow(rho[i], p.delta - 2.0) * tp.drho_dt[i];
  }
  Field psi_chain = grid.d1(g, Parity::even);
  for (auto& x : psi_chain) x *= p.delta;

  auto rel = [&](const Field& a, const Field& b) {
    Field diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = a[i] - b[i];
    const double sc = std::max(wnorm(grid, p.m, a), wnorm(grid, p.m, b));
    return std::array<double, 3>{sc > 0.0 ? wnorm(grid, p.m, diff) / sc : wnorm(grid, p.m, diff),
                                 wnorm(grid, p.m, diff), sc};
  };
  const auto r1 = rel(te.dphi_dt, phi_chain);
  const auto r2 = rel(te.du_dt, tp.du_dt);
  const auto r3 = rel(te.dpsi_dt, psi_chain);
  IdentityResult r;
  r.name = "reformulation";
  r.max_relative_residual = std::max({r1[0], r2[0], r3[0]});
  r.residual_norm = std::max({r1[1], r2[1], r3[1]});
  r.scale = std::max({r1[2], r2[2], r3[2]});
  r.threshold = 1e-2;
  r.pass = std::isfinite(r.max_relative_residual) && r.max_relative_residual <= r.threshold;
  return r;
}

IdentityResult effective_velocity_equation_identity(const Field& rho, const Field& u,
                                                    const Params& p, const RadialGrid& grid) {
  const std::size_t n = grid.size();
  PrimitiveState st;
  st.rho = rho;
  st.u = u;
  const Tendency tp = rhs_primitive(st, p, grid);
  const Field v = effective_velocity(st, p, grid);
  const Field vr = grid.d1(v, Parity::odd);
  Field g(n), pg(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = std::pow(rho[i], p.delta - 2.0) * tp.drho_dt[i];
    pg[i] = std::pow(rho[i], p.gamma);
  }
  const Field gr = grid.d1(g, Parity::even);
  const Field pgr = grid.d1(pg, Parity::even);
  Field a(n), b(n), c(n), res(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double vt = tp.du_dt[i] + 2.0 * p.a1 * p.delta * gr[i];
    a[i] = rho[i] * vt;
    b[i] = rho[i] * u[i] * vr[i];
    c[i] = p.A * pgr[i];
    res[i] = a[i] + b[i] + c[i];
  }
  return finish("effective_velocity_equation_fd", grid, p.m, res, {&a, &b, &c}, 1e-2);
}

IdentityResult effective_velocity_equation_jet(const SyntheticFields& f, const Params& p,
                                               const RadialGrid& grid) {
  const std::size_t n = grid.size();
  const double d = p.delta, m = p.m, a1 = p.a1;
  Field a(n), b(n), c(n), res(n);
  for (std::size_t i = 0; i < n; ++i) {
    const J r = J::variable(grid.r(i));
    const J rho = f.rho(r), u = f.u(r);
    const J rho_r = rho.derivative(), u_r = u.derivative();
    const J rho_t = -(rho * u).derivative() - m * rho * u / r;
    const J pd = pow(rho, d);
    const J pg = pow(rho, p.gamma);
    const J q = u_r + m * u / r;
    const J ut = (-rho * u * u_r - p.A * pg.derivative() + 2.0 * a1 * d * (pd * q).derivative() -
                  2.0 * a1 * m * pd.derivative() * u / r) /
                 rho;
    const J vt = ut + 2.0 * a1 * d * (pow(rho, d - 2.0) * rho_t).derivative();
    const J v = u + 2.0 * a1 * d * pow(rho, d - 2.0) * rho_r;
    a[i] = (rho * vt).value();
    b[i] = (rho * u * v.derivative()).value();
    c[i] = (p.A * pg.derivative()).value();
    res[i] = a[i] + b[i] + c[i];
  }
  return finish("effective_velocity_equation_exact", grid, p.m, res, {&a, &b, &c}, 1e-12);
}

double form_value(int m, double delta, double p, double X, double Y) {
  return delta * (p - 1.0) * X * X - m * p * (1.0 - delta) * X * Y +
         (delta * m * m - m * m + m) * Y * Y;
}

double form_min_eigenvalue(int m, double delta, double p) {
  const double a = delta * (p - 1.0);
  const double b = -0.5 * m * p * (1.0 - delta);
  const double c = delta * m * m - m * m + m;
  const double mean = 0.5 * (a + c), half = 0.5 * (a - c);
  return mean - std::sqrt(half * half + b * b);
}

CoercivityResult quadratic_form_positivity(int m, double delta, double p, std::size_t samples,
                                           std::uint64_t seed) {
  const double pt = p_tilde(m, delta);
  if (p < 2.0 || p >= pt)
    throw std::domain_error("quadratic_form_positivity: p must lie in [2, p_tilde)");
  CoercivityResult out;
  out.c_p = form_min_eigenvalue(m, delta, p);
  out.samples = samples;
  out.discriminant_negative = discriminant(m, delta, p) < 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double coef_scale = std::abs(delta * (p - 1.0)) + std::abs(m * p * (1.0 - delta)) +
                            std::abs(delta * m * m - m * m + m);
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double X = U(rng), Y = U(rng);
    const double n2 = X * X + Y * Y;
    if (n2 == 0.0) continue;
    const double gap = (out.c_p * n2 - form_value(m, delta, p, X, Y)) / n2;
    worst = std::max(worst, gap);
    if (gap > 1e-13 * coef_scale) ++out.violations;
  }
  out.result.name = "quadratic_form_positivity";
  out.result.max_relative_residual = worst / coef_scale;
  out.result.residual_norm = worst;
  out.result.scale = coef_scale;
  out.result.threshold = 1e-13;
  out.result.pass = out.violations == 0 && out.discriminant_negative == (out.c_p > 0.0);
  return out;
}

}  // namespace rdns
