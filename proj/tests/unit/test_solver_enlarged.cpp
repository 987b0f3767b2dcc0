#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "rdns/initial_data.hpp"
#include "rdns/solver_enlarged.hpp"

using namespace rdns;

namespace {

const Params kRef = derive_constants(1.0, 1.5, 0.8, 1.0, 3);

double sup_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("primitive and enlarged variables round trip") {
  const RadialGrid g = build_grid(20.0, 256);
  const PrimitiveState s = make_initial_state({}, g);
  const EnlargedState e = to_enlarged(s, kRef, g);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(e.phi[i] == doctest::Approx(3.0 * std::pow(s.rho[i], 0.5)).epsilon(1e-14));
  const PrimitiveState back = from_enlarged(e, kRef);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(back.rho[i] == doctest::Approx(s.rho[i]).epsilon(1e-13));
  CHECK(back.u == s.u);

  const Field h = enthalpy_power(e, kRef);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(h[i] == doctest::Approx(std::pow(s.rho[i], kRef.delta - 1.0)).epsilon(1e-13));
}

TEST_CASE("enlarged conversions reject vacuum") {
  const RadialGrid g = build_grid(20.0, 64);
  PrimitiveState s = make_initial_state({}, g);
  s.rho[5] = 0.0;
  CHECK_THROWS_AS(to_enlarged(s, kRef, g), std::domain_error);
  EnlargedState e = to_enlarged(make_initial_state({}, g), kRef, g);
  e.phi[2] = -1.0;
  CHECK_THROWS_AS(from_enlarged(e, kRef), std::domain_error);
}

TEST_CASE("psi constraint holds initially and stays small") {
  const RadialGrid g = build_grid(20.0, 256);
  const EnlargedState e = to_enlarged(make_initial_state({}, g), kRef, g);
  CHECK(psi_constraint_residual(e, kRef, g, 10.0) < 1e-12);

  SolverConfig c;
  c.t_end = 0.05;
  c.output_cadence = 0.01;
  const Trajectory tr = simulate_enlarged(e, kRef, g, c);
  REQUIRE(tr.completed);
  CHECK(tr.formulation == Formulation::enlarged);
  REQUIRE(tr.states.size() == 6);
  CHECK(tr.psi.size() == 6);
  CHECK(tr.constraint_residual.size() == 6);
  for (double r : tr.constraint_residual) CHECK(r < 1e-2);
}

TEST_CASE("enlarged and primitive runs agree") {
  const RadialGrid g = build_grid(20.0, 256);
  const PrimitiveState s = make_initial_state({}, g);
  SolverConfig c;
  c.t_end = 0.05;
  c.output_cadence = 0.05;
  const Trajectory a = simulate(s, kRef, g, c);
  const Trajectory b = simulate_enlarged(to_enlarged(s, kRef, g), kRef, g, c);
  REQUIRE(a.completed);
  REQUIRE(b.completed);
  CHECK(sup_diff(a.states.back().rho, b.states.back().rho) < 5e-3);
  CHECK(sup_diff(a.states.back().u, b.states.back().u) < 5e-3);
}

TEST_CASE("enlarged step and rhs basics") {
  const RadialGrid g = build_grid(20.0, 64);
  const EnlargedState e = to_enlarged(make_initial_state({}, g), kRef, g);
  const EnlargedTendency t = rhs_enlarged(e, kRef, g);
  CHECK(t.dphi_dt.size() == g.size());
  CHECK(t.dpsi_dt.size() == g.size());
  const EnlargedState n = step_enlarged(e, kRef, g, SolverConfig{}, 1e-5);
  CHECK(n.t == doctest::Approx(1e-5));
  EnlargedState bad = e;
  bad.psi.pop_back();
  CHECK_THROWS_AS(rhs_enlarged(bad, kRef, g), std::invalid_argument);

  // uniform state at rest
  PrimitiveState s;
  s.rho.assign(g.size(), 0.3);
  s.u.assign(g.size(), 0.0);
  const EnlargedTendency z = rhs_enlarged(to_enlarged(s, kRef, g), kRef, g);
  CHECK(sup_diff(z.dphi_dt, Field(g.size(), 0.0)) < 1e-13);
  CHECK(sup_diff(z.du_dt, Field(g.size(), 0.0)) < 1e-13);
  CHECK(sup_diff(z.dpsi_dt, Field(g.size(), 0.0)) < 1e-13);
}
