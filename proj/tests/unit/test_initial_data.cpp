#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "rdns/diagnostics.hpp"
#include "rdns/initial_data.hpp"

using namespace rdns;

namespace {
const Params kRef = derive_constants(1.0, 1.5, 0.8, 1.0, 3);
}

TEST_CASE("power-law density") {
  // build_grid(8 r, 4) puts its first node at r
  const RadialGrid ten = build_grid(80.0, 4);
  CHECK(std::abs(power_law_density(1.0, 4.0, ten)[0] - 9.802960494069208901e-5) < 1e-18);
  const RadialGrid odd = build_grid(20.0, 4);  // nodes 2.5, 7.5, 12.5, 17.5
  CHECK(power_law_density(2.0, 4.0, odd)[1] == doctest::Approx(2.0 * std::pow(1.0 + 56.25, -2.0)));

  const RadialGrid g = build_grid(30.0, 3000);
  const Field rho = power_law_density(1.0, 4.0, g);
  CHECK(rho[0] == doctest::Approx(std::pow(1.0 + g.r(0) * g.r(0), -2.0)));
  for (std::size_t i = 1; i < rho.size(); ++i) CHECK(rho[i] < rho[i - 1]);
  // r^sigma rho tends to rho_c
  const double r = g.r(g.size() - 1);
  CHECK(std::abs(std::pow(r, 4.0) * rho.back() - 1.0) < 0.01);
}

TEST_CASE("bump velocity") {
  const RadialGrid g = build_grid(20.0, 1024);
  const Field zero = bump_velocity(0.0, 2.0, 0.5, g);
  for (double v : zero) CHECK(v == 0.0);
  const Field u = bump_velocity(0.5, 2.0, 0.5, g);
  CHECK(std::abs(u[0]) < 1e-6);
  CHECK(u.back() == 0.0);  // truncated below 1e-14
  std::size_t imax = 0;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] > u[imax]) imax = i;
  CHECK(g.r(imax) == doctest::Approx(2.0).epsilon(0.05));
  const PrimitiveState s = make_initial_state({}, g);
  const double mom = momentum(s, g, 2).radial_integral;
  CHECK(std::isfinite(mom));
  CHECK(mom > 0.0);
}

TEST_CASE("make_initial_state adds the background density") {
  const RadialGrid g = build_grid(20.0, 128);
  InitialDataSpec spec;
  spec.far_field_density = 0.1;
  const PrimitiveState s = make_initial_state(spec, g);
  const Field base = power_law_density(1.0, 4.0, g);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(s.rho[i] == doctest::Approx(base[i] + 0.1));
  CHECK(s.far_field_density == 0.1);
  CHECK(s.t == 0.0);
}

TEST_CASE("compatibility norms") {
  const RadialGrid g = build_grid(20.0, 1024);
  const Field rho = power_law_density(1.0, 4.0, g);
  const Field zero(g.size(), 0.0);
  const CompatibilityReport z = check_compatibility(rho, zero, kRef, g);
  CHECK(z.g1_norm == 0.0);
  CHECK(z.g2_norm == 0.0);
  CHECK(z.gstar_norm == 0.0);
  CHECK(z.g1_finite);

  const Field u = bump_velocity(0.5, 2.0, 0.5, g);
  const CompatibilityReport a = check_compatibility(rho, u, kRef, g);
  CHECK(a.g1_finite);
  CHECK(a.g2_finite);
  CHECK(a.gstar_finite);
  CHECK(a.g1_norm > 0.0);
  CHECK(a.tail_exponent_fit == doctest::Approx(4.0).epsilon(0.02));

  Field u3 = u;
  for (auto& x : u3) x *= 3.0;
  const CompatibilityReport b = check_compatibility(rho, u3, kRef, g);
  CHECK(b.g1_norm == doctest::Approx(3.0 * a.g1_norm).epsilon(1e-12));
  CHECK(b.gstar_norm == doctest::Approx(3.0 * a.gstar_norm).epsilon(1e-12));

  // refinement stability of the bump norms
  const RadialGrid g2 = build_grid(20.0, 2048);
  const CompatibilityReport c =
      check_compatibility(power_law_density(1.0, 4.0, g2), bump_velocity(0.5, 2.0, 0.5, g2), kRef, g2);
  CHECK(c.g1_norm == doctest::Approx(a.g1_norm).epsilon(1e-3));
}

TEST_CASE("compatibility overflow for a slowly decaying velocity in a thin tail") {
  auto norm_on = [](double R) {
    const RadialGrid g = build_grid(R, static_cast<std::size_t>(4 * R));
    const Field rho = power_law_density(1.0, 4.9, g);
    Field u(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) u[i] = g.r(i) / std::pow(1.0 + g.r(i) * g.r(i), 0.25);
    return check_compatibility(rho, u, kRef, g, 1e4);
  };
  // the norm grows like R^1.5 and crosses the overflow level
  const CompatibilityReport small = norm_on(500.0), big = norm_on(1000.0);
  CHECK(big.g1_norm > 2.5 * small.g1_norm);
  CHECK(small.g1_finite);
  CHECK_FALSE(big.g1_finite);
}

TEST_CASE("effective velocity") {
  const RadialGrid g = build_grid(10.0, 2000);
  PrimitiveState s;
  s.rho.assign(g.size(), 0.7);
  s.u = bump_velocity(0.5, 2.0, 0.5, g);
  const Field v = effective_velocity(s, kRef, g);
  double dv = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) dv = std::max(dv, std::abs(v[i] - s.u[i]));
  CHECK(dv < 1e-12);

  const Params p = derive_constants(1.0, 1.5, 0.75, 1.0, 3);
  s.u.assign(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) s.rho[i] = std::exp(-g.r(i));
  const Field ve = effective_velocity(s, p, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.r(i) < 0.5) continue;
    CHECK(ve[i] == doctest::Approx(-1.5 * std::exp(g.r(i) / 4.0)).epsilon(1e-5));
  }

  s.rho = power_law_density(1.0, 4.0, g);
  const Field vp = effective_velocity(s, kRef, g);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.r(i), rho = s.rho[i];
    const double rho_r = -4.0 * r * std::pow(1.0 + r * r, -3.0);
    const double exact = 2.0 * kRef.a1 * kRef.delta * std::pow(rho, kRef.delta - 2.0) * rho_r;
    err = std::max(err, std::abs(vp[i] - exact) / (1.0 + std::abs(exact)));
  }
  CHECK(err < 1e-4);
}
