// Pointwise checks of the multiplier identity for rho^-alpha |u|^(l-2) u,
// the primitive/enlarged equivalence, the effective-velocity equation and
// the coercivity of the velocity quadratic form, on synthetic smooth fields.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rdns/grid.hpp"
#include "rdns/jet.hpp"
#include "rdns/params.hpp"

namespace rdns {

struct IdentityResult {
  std::string name;
  double max_relative_residual = 0.0;  ///< residual norm / scale
  double residual_norm = 0.0;          ///< r^(m/2)-weighted L2 norm of LHS - RHS
  double scale = 0.0;                  ///< same norm of the largest single term
  double threshold = 0.0;
  bool pass = false;
};

/// rho = b + (1 + c1 r^2 + c2 r^4) exp(-r^2/w^2),
/// u   = r (e0 + e1 r^2 + e2 r^4) exp(-r^2/w^2) with e_i > 0 (so u > 0 for r > 0),
/// u_t = r (f0 + f1 r^2) exp(-r^2/w^2) as a free smooth closure.
struct SyntheticFields {
  double b = 0.5, w = 1.2;
  double c1 = 0.5, c2 = 0.1;
  double e0 = 0.5, e1 = 0.2, e2 = 0.05;
  double f0 = 0.3, f1 = -0.1;

  static SyntheticFields sample(std::mt19937_64& rng);

  template <int K>
  Jet<K> gauss(const Jet<K>& r) const {
    return exp(-(r * r) / (w * w));
  }
  template <int K>
  Jet<K> rho(const Jet<K>& r) const {
    const Jet<K> r2 = r * r;
    return Jet<K>(b) + (Jet<K>(1.0) + c1 * r2 + c2 * r2 * r2) * gauss(r);
  }
  template <int K>
  Jet<K> u(const Jet<K>& r) const {
    const Jet<K> r2 = r * r;
    return r * (Jet<K>(e0) + e1 * r2 + e2 * r2 * r2) * gauss(r);
  }
  template <int K>
  Jet<K> u_t(const Jet<K>& r) const {
    return r * (Jet<K>(f0) + f1 * r * r) * gauss(r);
  }

  /// Nodal samples of rho, u, u_t and rho_t = -(rho u)_r - m rho u / r.
  void sample_on(const RadialGrid& g, int m, Field& rho, Field& u, Field& rho_t,
                 Field& u_t) const;
};

enum class FluxDerivative { exact, discrete };

/// Exact-derivative route: every field and derivative from Taylor jets; with
/// FluxDerivative::discrete the flux term (B)_r alone uses the grid stencil.
IdentityResult multiplier_identity_jet(const SyntheticFields& f, const Params& p, double alpha,
                                       int ell, const RadialGrid& grid,
                                       FluxDerivative flux = FluxDerivative::exact);

/// Nodal-field route: all spatial derivatives by finite differences.
/// rho_t must match -u rho_r - rho (u_r + m u/r) to relative tolerance
/// `consistency_tol`, otherwise std::invalid_argument is thrown.
IdentityResult multiplier_identity(const Field& rho, const Field& u, const Field& rho_t,
                                   const Field& u_t, const Params& p, double alpha, int ell,
                                   const RadialGrid& grid, double consistency_tol = 0.1);

/// int_0^R (B)_r dr relative to int |(B)_r| dr, with the flux B of the
/// multiplier identity; vanishes for decaying fields with u(0) = 0.
IdentityResult multiplier_flux_integral(const SyntheticFields& f, const Params& p, double alpha,
                                        int ell, const RadialGrid& grid);

/// rhs_enlarged(to_enlarged(rho, u)) against the chain-rule image of
/// rhs_primitive(rho, u); reported as the largest componentwise relative norm.
IdentityResult reformulation_identity(const Field& rho, const Field& u, const Params& p,
                                      const RadialGrid& grid);

/// rho (v_t + u v_r) + A (rho^gamma)_r with rho_t, u_t from the evolution
/// equations, by finite differences.
IdentityResult effective_velocity_equation_identity(const Field& rho, const Field& u,
                                                    const Params& p, const RadialGrid& grid);

/// Same with exact derivatives (algebraic check).
IdentityResult effective_velocity_equation_jet(const SyntheticFields& f, const Params& p,
                                               const RadialGrid& grid);

/// Smallest eigenvalue of [[delta(p-1), -m p (1-delta)/2], [., delta m^2 - m^2 + m]].
double form_min_eigenvalue(int m, double delta, double p);

/// delta(p-1) X^2 - m p (1-delta) X Y + (delta m^2 - m^2 + m) Y^2.
double form_value(int m, double delta, double p, double X, double Y);

struct CoercivityResult {
  IdentityResult result;
  double c_p = 0.0;
  std::size_t violations = 0;
  std::size_t samples = 0;
  bool discriminant_negative = false;
};

/// Monte-Carlo check of form >= c_p (X^2 + Y^2). Throws std::domain_error
/// for p >= p~_m(delta) or p < 2.
CoercivityResult quadratic_form_positivity(int m, double delta, double p, std::size_t samples,
                                           std::uint64_t seed);

}  // namespace rdns
