#include "rdns/initial_data.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rdns {

Field power_law_density(double rho_c, double sigma, const RadialGrid& grid) {
  if (!(rho_c > 0.0) || !(sigma > 0.0))
    throw std::invalid_argument("power_law_density: rho_c and sigma must be positive");
  Field rho(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.r(i);
    rho[i] = rho_c * std::pow(1.0 + r * r, -0.5 * sigma);
  }
  return rho;
}

Field bump_velocity(double amplitude, double r_center, double width, const RadialGrid& grid) {
  if (!(width > 0.0)) throw std::invalid_argument("bump_velocity: width must be positive");
  Field u(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.r(i);
    const double x = (r - r_center) / width;
    const double val = amplitude * std::exp(-x * x) * r / std::sqrt(r * r + width * width);
    u[i] = std::abs(val) < 1e-14 ? 0.0 : val;
  }
  return u;
}

PrimitiveState make_initial_state(const InitialDataSpec& spec, const RadialGrid& grid) {
  if (spec.far_field_density < 0.0)
    throw std::invalid_argument("far_field_density must be non-negative");
  PrimitiveState s;
  s.rho = power_law_density(spec.rho_c, spec.sigma, grid);
  for (auto& x : s.rho) x += spec.far_field_density;
  s.u = bump_velocity(spec.amplitude, spec.r_center, spec.width, grid);
  s.t = 0.0;
  s.far_field_density = spec.far_field_density;
  return s;
}

namespace {

double weighted_l2(const RadialGrid& grid, int m, std::initializer_list<const Field*> comps) {
  const auto w = grid.shell_weights(m);
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double s = 0.0;
    for (const Field* c : comps) s += (*c)[i] * (*c)[i];
    acc += w[i] * s;
  }
  return std::sqrt(acc);
}

bool finite_below(double x, double overflow) { return std::isfinite(x) && x < overflow; }

}  // namespace

CompatibilityReport check_compatibility(const Field& rho0, const Field& u0, const Params& params,
                                        const RadialGrid& grid, double overflow) {
  const std::size_t n = grid.size();
  if (rho0.size() != n || u0.size() != n)
    throw std::invalid_argument("check_compatibility: field/grid size mismatch");
  const int m = params.m;
  const double d = params.delta;

  Field half(n), full(n);
  for (std::size_t i = 0; i < n; ++i) {
    half[i] = std::pow(rho0[i], 0.5 * (d - 1.0));
    full[i] = std::pow(rho0[i], d - 1.0);
  }

  const Field ur = grid.d1(u0, Parity::odd);
  Field q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = ur[i] + m * u0[i] / grid.r(i);
  const Field lu = grid.d1(q, Parity::even);

  Field g1a(n), g1b(n), gs(n), inner(n);
  for (std::size_t i = 0; i < n; ++i) {
    g1a[i] = half[i] * ur[i];
    g1b[i] = half[i] * u0[i] / grid.r(i);
    gs[i] = full[i] * lu[i];
    inner[i] = gs[i];
  }
  const Field ir = grid.d1(inner, Parity::odd);
  Field g2a(n), g2b(n);
  for (std::size_t i = 0; i < n; ++i) {
    g2a[i] = half[i] * ir[i];
    g2b[i] = half[i] * inner[i] / grid.r(i);
  }

  CompatibilityReport rep;
  rep.g1_norm = weighted_l2(grid, m, {&g1a, &g1b});
  rep.gstar_norm = weighted_l2(grid, m, {&gs});
  rep.g2_norm = weighted_l2(grid, m, {&g2a, &g2b});
  rep.g1_finite = finite_below(rep.g1_norm, overflow);
  rep.gstar_finite = finite_below(rep.gstar_norm, overflow);
  rep.g2_finite = finite_below(rep.g2_norm, overflow);

  // log rho = c - sigma log r on the outer quarter.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid.r(i);
    if (r < 0.75 * grid.r_max() || !(rho0[i] > 0.0)) continue;
    const double x = std::log(r), y = std::log(rho0[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  const double den = cnt * sxx - sx * sx;
  rep.tail_exponent_fit =
      cnt >= 2 && den != 0.0 ? -(cnt * sxy - sx * sy) / den : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

Field effective_velocity(const PrimitiveState& state, const Params& params,
                         const RadialGrid& grid) {
  const std::size_t n = grid.size();
  Field g(n);
  double coef;
  if (params.delta == 1.0) {
    for (std::size_t i = 0; i < n; ++i) g[i] = std::log(state.rho[i]);
    coef = 2.0 * params.a1;
  } else {
    for (std::size_t i = 0; i < n; ++i) g[i] = std::pow(state.rho[i], params.delta - 1.0);
    coef = 2.0 * params.a1 * params.delta / (params.delta - 1.0);
  }
  const Field gr = grid.d1(g, Parity::even);
  Field v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = state.u[i] + coef * gr[i];
  return v;
}

}  // namespace rdns
