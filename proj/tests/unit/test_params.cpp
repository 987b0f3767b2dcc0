#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "rdns/params.hpp"

using namespace rdns;

TEST_CASE("derived constants match closed forms") {
  const Params p = derive_constants(0.5, 2.0, 0.5, 1.0, 3);
  CHECK(p.a == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.iota == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(p.m == 2);
  CHECK(p.a2 == doctest::Approx(-1.0));

  const Params q = derive_constants(1.0, 3.0, 0.75, 1.0, 3);
  CHECK(std::abs(q.a - 1.051989505508644127) <= 1e-15);
  CHECK(q.iota == doctest::Approx(-0.0625));
}

TEST_CASE("BD relation and override") {
  const Params p = derive_constants(1.0, 1.5, 0.8, 2.0, 3);
  CHECK(p.a2 == doctest::Approx(2.0 * 2.0 * (0.8 - 1.0)));
  CHECK_FALSE(p.a2_override);
  const Params o = derive_constants_with_a2(1.0, 1.5, 0.8, 2.0, 3, 0.3);
  CHECK(o.a2 == 0.3);
  CHECK(o.a2_override);
}

TEST_CASE("derive_constants is deterministic") {
  const Params a = derive_constants(1.3, 1.7, 0.81, 0.9, 3);
  const Params b = derive_constants(1.3, 1.7, 0.81, 0.9, 3);
  CHECK(a.a == b.a);
  CHECK(a.iota == b.iota);
  CHECK(a.a2 == b.a2);
}

TEST_CASE("derive_constants rejects bad input") {
  CHECK_THROWS_AS(derive_constants(1.0, 1.0, 0.8, 1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(derive_constants(-1.0, 1.5, 0.8, 1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(derive_constants(1.0, 1.5, 1.2, 1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(derive_constants(1.0, 1.5, 0.8, 0.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(derive_constants(1.0, 1.5, 0.8, 1.0, 4), std::invalid_argument);
}

TEST_CASE("p_tilde oracle values") {
  const double dl = 7.0 - 2.0 * std::sqrt(10.0);
  CHECK(std::abs(dl - 0.67544467966324133600) < 1e-15);
  CHECK(std::abs(p_tilde(2, dl) - 3.0) < 1e-9);
  CHECK(std::abs(p_tilde(1, 0.5) - 2.0) < 1e-9);
  CHECK(std::abs(p_tilde(1, 0.75) - 34.97056274847714058562) < 1e-11);
  CHECK(std::abs(p_tilde(2, 0.8) - 22.95445115010332226914) < 1e-11);
  CHECK_THROWS_AS(p_tilde(2, 0.6), std::domain_error);
  CHECK_THROWS_AS(p_tilde(3, 0.8), std::domain_error);
}

TEST_CASE("discriminant oracle values") {
  CHECK(discriminant(1, 0.75, 2.0) == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(std::abs(discriminant(2, 2.0 / 3.0, 2.0)) < 1e-12);
}

TEST_CASE("discriminant vanishes at p_tilde over a delta sweep") {
  for (int m = 1; m <= 2; ++m) {
    for (int k = 0; k < 1000; ++k) {
      const double d = 0.5 + 0.5 * (k + 0.5) / 1000.0;
      double pt = 0.0;
      try {
        pt = p_tilde(m, d);
      } catch (const std::domain_error&) {
        continue;
      }
      CHECK(discriminant_relative(m, d, pt) < 1e-9);
    }
  }
}

TEST_CASE("discriminant at p = 2 is negative exactly above m/(m+1)") {
  for (int m = 1; m <= 2; ++m) {
    const double crit = static_cast<double>(m) / (m + 1);
    for (int k = 1; k < 1000; ++k) {
      const double d = k / 1000.0;
      if (std::abs(d - crit) < 1e-12) continue;
      CHECK((discriminant(m, d, 2.0) < 0.0) == (d > crit));
    }
  }
}

TEST_CASE("discriminant is negative strictly between 2 and p_tilde") {
  for (int m = 1; m <= 2; ++m)
    for (double d : {0.7, 0.8, 0.9, 0.95}) {
      const double pt = p_tilde(m, d);
      for (int k = 1; k < 50; ++k) CHECK(discriminant(m, d, 2.0 + (pt - 2.0) * k / 50.0) < 0.0);
    }
}

TEST_CASE("delta_star branches") {
  CHECK(std::abs(delta_star(5.0 / 3.0) - 0.0893163974770409021575) < 1e-15);
  CHECK(std::abs(delta_star(1.5) - 0.125) < 1e-15);
  CHECK(std::abs(delta_star_low_branch(5.0 / 3.0) - delta_star_high_branch(5.0 / 3.0)) < 1e-12);
  const double gu = 1.0 + 2.0 / std::sqrt(3.0);
  for (int k = 1; k < 1000; ++k) CHECK(delta_star(1.0 + (gu - 1.0) * k / 1000.0) < 0.5);
  CHECK_THROWS_AS(delta_star(1.0), std::domain_error);
  CHECK_THROWS_AS(delta_star(gu), std::domain_error);
}

TEST_CASE("alpha weight") {
  CHECK(alpha_weight(0.8) == doctest::Approx(0.5));
  CHECK(alpha_weight(0.6) == 0.0);
}

TEST_CASE("tail exponent range for the reference parameters") {
  const SigmaRange r = tail_exponent_range(derive_constants(1.0, 1.5, 0.8, 1.0, 3));
  CHECK(r.lower == doctest::Approx(3.0));
  CHECK(r.upper == doctest::Approx(5.0));
  CHECK(r.contains(4.0));
  CHECK_FALSE(r.contains(5.0 + 1e-9));
  CHECK_FALSE(r.contains(3.0));
}

TEST_CASE("admissibility") {
  const AdmissibilityReport ok = check_admissible(derive_constants(1.0, 1.5, 0.8, 1.0, 3));
  CHECK(ok.admissible);
  CHECK(ok.reduced_initial_conditions);
  CHECK(ok.thresholds.gamma_upper_3d == doctest::Approx(1.8));
  CHECK(ok.thresholds.p_tilde == doctest::Approx(22.95445115010332));

  CHECK_FALSE(check_admissible(derive_constants(1.0, 1.5, 0.6, 1.0, 3)).admissible);
  CHECK_FALSE(check_admissible(derive_constants(1.0, 1.9, 0.8, 1.0, 3)).admissible);
  // boundary value is excluded within the tolerance
  const double dl = 7.0 - 2.0 * std::sqrt(10.0);
  CHECK_FALSE(check_admissible(derive_constants(1.0, 1.01, dl, 1.0, 3)).admissible);
  CHECK(check_admissible(derive_constants(1.0, 1.01, dl + 1e-6, 1.0, 3)).admissible);

  CHECK(check_admissible(derive_constants(1.0, 1.5, 0.6, 1.0, 2)).admissible);
  CHECK_FALSE(check_admissible(derive_constants(1.0, 1.5, 0.5, 1.0, 2)).admissible);

  const AdmissibilityReport low = check_admissible(derive_constants(1.0, 1.2, 0.8, 1.0, 3));
  CHECK(low.admissible);
  CHECK_FALSE(low.reduced_initial_conditions);
}
