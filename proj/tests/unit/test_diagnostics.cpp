#include <cmath>
#include <stdexcept>
#include <numbers>

#include "doctest.h"
#include "rdns/diagnostics.hpp"
#include "rdns/initial_data.hpp"
#include "rdns/solver_primitive.hpp"

using namespace rdns;

namespace {

const Params kRef = derive_constants(1.0, 1.5, 0.8, 1.0, 3);

PrimitiveState uniform(const RadialGrid& g, double rho, double u, double t = 0.0) {
  PrimitiveState s;
  s.rho.assign(g.size(), rho);
  s.u.assign(g.size(), u);
  s.t = t;
  return s;
}

Trajectory constant_trajectory(const RadialGrid& g, double rho, std::size_t count, double dt) {
  Trajectory tr;
  for (std::size_t k = 0; k < count; ++k) {
    tr.states.push_back(uniform(g, rho, 0.0, dt * static_cast<double>(k)));
    tr.dissipation_cum.push_back(0.0);
    tr.clamp_cum.push_back(0);
  }
  return tr;
}

}  // namespace

TEST_CASE("sphere areas") {
  CHECK(omega(2) == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(omega(3) == doctest::Approx(4.0 * std::numbers::pi));
  CHECK_THROWS_AS(omega(4), std::invalid_argument);
}

TEST_CASE("mass, momentum and energy of a uniform state") {
  const RadialGrid g = build_grid(2.0, 64);
  const PrimitiveState s = uniform(g, 1.0, 0.0);
  CHECK(mass(s, g, 3) == doctest::Approx(4.0 * std::numbers::pi * 8.0 / 3.0).epsilon(1e-14));
  CHECK(mass(s, g, 2) == doctest::Approx(2.0 * std::numbers::pi * 2.0).epsilon(1e-14));
  const Momentum mo = momentum(s, g, 2);
  CHECK(mo.vector == std::array<double, 3>{0.0, 0.0, 0.0});
  CHECK(mo.radial_integral == 0.0);
  const Energy e = energy(s, kRef, g);
  CHECK(e.E == doctest::Approx(2.0 * 8.0 / 3.0).epsilon(1e-14));
  CHECK(e.D_instant == 0.0);
  CHECK(dissipation_rate(s, kRef, g) == 0.0);
  CHECK(bd_entropy(s, kRef, g) == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
  CHECK(ball_l2(g, 2, Field(g.size(), 1.0), 2.0) == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-14));

  const PrimitiveState moving = uniform(g, 2.0, 0.5);
  CHECK(momentum(moving, g, 2).radial_integral == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("dissipation is positive for a moving admissible state") {
  const RadialGrid g = build_grid(20.0, 512);
  const PrimitiveState s = make_initial_state({}, g);
  const double d = dissipation_rate(s, kRef, g);
  CHECK(d > 0.0);
  CHECK(energy(s, kRef, g).D_instant == doctest::Approx(d));
}

TEST_CASE("Duhamel formula for a uniform state") {
  const double rho = 0.6, v0 = 1.7;
  std::vector<double> t, rp, up;
  for (int k = 0; k <= 200; ++k) {
    t.push_back(0.005 * k);
    rp.push_back(rho);
    up.push_back(0.0);
  }
  const std::vector<double> v = duhamel_v(t, rp, up, v0, kRef);
  const double K = kRef.A * kRef.gamma / (2.0 * kRef.a1 * kRef.delta);
  for (std::size_t k = 0; k < t.size(); ++k)
    CHECK(std::abs(v[k] - v0 * std::exp(-K * std::pow(rho, kRef.gamma - kRef.delta) * t[k])) < 1e-10);

  std::fill(up.begin(), up.end(), 0.4);
  const std::vector<double> w = duhamel_v(t, rp, up, 0.4, kRef);
  double dw = 0.0;
  for (double x : w) dw = std::max(dw, std::abs(x - 0.4));
  CHECK(dw < 1e-5);  // trapezoid error in the forcing integral
}

TEST_CASE("running minimum and lower profile") {
  const Field r0{3.0, 2.0, 2.5, 1.0, 1.5};
  const Field rm = running_min(r0);
  CHECK(rm == Field{3.0, 2.0, 2.0, 1.0, 1.0});

  const RadialGrid g = build_grid(20.0, 256);
  const Field rho = power_law_density(1.0, 4.0, g);
  const Field lb = lower_bound_profile(rho, kRef, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(lb[i] > 0.0);
    CHECK(lb[i] <= rho[i]);
  }
}

TEST_CASE("density bounds hold for a stationary state") {
  const RadialGrid g = build_grid(10.0, 64);
  const Trajectory tr = constant_trajectory(g, 0.8, 11, 0.1);
  const BoundReport b = density_bounds(tr, tr.states[0].rho, kRef, g, 5.0, 1.0);
  CHECK(b.lower_violations == 0);
  CHECK(b.upper_violations == 0);
  CHECK(b.worst_lower_ratio <= 1.0);
  CHECK(b.min_rho_ball == doctest::Approx(0.8));
  CHECK(b.samples_fit > 0);
  CHECK(b.samples_test > 0);

  const PositiveBoundReport pb = positive_density_bounds(tr, g, 5.0, 1.0);
  CHECK(pb.violations == 0);
  CHECK(pb.C >= 1.0 / 0.8);
  CHECK(pb.min_rho == doctest::Approx(0.8));
}

TEST_CASE("effective-velocity residual needs three snapshots") {
  const RadialGrid g = build_grid(10.0, 64);
  Trajectory tr = constant_trajectory(g, 0.8, 2, 0.1);
  CHECK_THROWS_AS(v_residual(tr, kRef, g, 5.0), std::invalid_argument);
  const auto recs = build_records(tr, kRef, g, {});
  REQUIRE(recs.size() == 2);
  CHECK(std::isnan(recs[0].v_resid));

  // a uniform state at rest satisfies the v equation exactly
  tr = constant_trajectory(g, 0.8, 5, 0.1);
  const ResidualSeries rs = v_residual(tr, kRef, g, 5.0);
  CHECK(rs.max() < 1e-12);
}

TEST_CASE("characteristic of a fluid at rest") {
  const RadialGrid g = build_grid(10.0, 64);
  const Trajectory tr = constant_trajectory(g, 0.8, 11, 0.1);
  const CharacteristicResult c = characteristic_v(tr, 1.0, kRef, g);
  CHECK(c.path.front() == 1.0);
  CHECK(c.path.back() == doctest::Approx(1.0));
  CHECK(c.max_mismatch < 1e-12);
  CHECK_THROWS_AS(characteristic_v(tr, 1.0, kRef, g, 0), std::invalid_argument);
}

TEST_CASE("ledger entries and range flags") {
  const RadialGrid g = build_grid(20.0, 256);
  const PrimitiveState s = make_initial_state({}, g);
  const auto led = lp_ledger(s, kRef, g, {2.0, 3.0, 30.0});
  REQUIRE(led.size() == 6 + 4 + 1);
  CHECK(led[0].name == "u_p2");
  CHECK(led[1].name == "v_p2");
  CHECK(led[4].name == "u_p30");
  CHECK(led[0].in_range);
  CHECK(led[2].in_range);
  CHECK_FALSE(led[4].in_range);
  CHECK(led[6].name == "ua_l2");
  CHECK(led[9].name == "ua_l5");
  CHECK(led[10].name == "du_w");
  for (const auto& e : led) CHECK(std::isfinite(e.value));
}

TEST_CASE("records carry the fixed column set") {
  const RadialGrid g = build_grid(20.0, 128);
  SolverConfig c;
  c.t_end = 0.03;
  const Trajectory tr = simulate(make_initial_state({}, g), kRef, g, c);
  const auto recs = build_records(tr, kRef, g, {});
  REQUIRE(recs.size() == tr.states.size());
  CHECK(std::isfinite(recs.back().v_resid));
  CHECK(recs.back().rho_min > 0.0);
  const auto cols = csv_columns(recs.front().ledger);
  const std::vector<std::string> head{"t",          "mass",    "momentum_radial", "energy",
                                      "dissipation_cum", "bd_entropy", "v_inf", "v_resid",
                                      "rho_min",    "rho_max", "lb_margin",       "ub_tail",
                                      "clamps"};
  REQUIRE(cols.size() == head.size() + recs.front().ledger.size());
  for (std::size_t i = 0; i < head.size(); ++i) CHECK(cols[i] == head[i]);
  CHECK(cols.back() == "du_w");
}
