// Physical constants, derived exponents and closed-form parameter thresholds
// for the barotropic Navier-Stokes system with viscosities mu = a1 rho^delta,
// lambda = a2 rho^delta.

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace rdns {

/// Model constants. Construct through derive_constants() so that the derived
/// fields (m, a, iota, a2) are always consistent with the inputs.
struct Params {
  double A = 1.0;      ///< pressure constant, P = A rho^gamma
  double gamma = 1.5;  ///< adiabatic exponent
  double delta = 0.8;  ///< viscosity exponent
  double a1 = 1.0;     ///< shear viscosity constant
  double a2 = -0.4;    ///< second viscosity constant
  int n = 3;           ///< spatial dimension
  int m = 2;           ///< n - 1
  double a = 1.0;      ///< (A gamma / (gamma - 1))^((1 - delta) / (gamma - 1))
  double iota = -0.2;  ///< (delta - 1) / (2 (gamma - 1))
  bool a2_override = false;  ///< a2 supplied explicitly instead of from the BD relation

  /// A gamma / (gamma - 1), the prefactor of phi.
  double enthalpy_coefficient() const { return A * gamma / (gamma - 1.0); }
};

/// Builds Params with a2 = 2 a1 (delta - 1).
/// Throws std::invalid_argument for A <= 0, gamma <= 1, delta outside (0, 1],
/// a1 <= 0 or n not in {2, 3}.
Params derive_constants(double A, double gamma, double delta, double a1, int n);

/// Same as derive_constants but with a user-chosen a2 (non-BD experiments).
Params derive_constants_with_a2(double A, double gamma, double delta, double a1,
                                int n, double a2);

struct Thresholds {
  double delta_lower_3d;  ///< 7 - 2 sqrt(10)
  double gamma_upper_3d;  ///< 6 delta - 3
  double delta_star;      ///< delta*(gamma), NaN outside its domain
  double p_tilde;         ///< p~_m(delta), NaN when the radicand is negative
};

struct AdmissibilityReport {
  bool admissible = false;
  std::vector<std::string> reasons;
  Thresholds thresholds{};
  /// gamma >= delta + 1/2: the reduced initial-condition set applies.
  bool reduced_initial_conditions = false;
};

AdmissibilityReport check_admissible(const Params& params, double tol = 1e-12);

/// Larger root of discriminant(m, delta, .) = 0.
/// Throws std::domain_error when the radicand is negative or m not in {1, 2}.
double p_tilde(int m, double delta);

/// m^2 (1-delta)^2 p^2 - 4 delta (delta m^2 - m^2 + m) p + 4 delta (delta m^2 - m^2 + m)
double discriminant(int m, double delta, double p);

/// |discriminant| divided by the sum of the magnitudes of its three terms;
/// the meaningful zero test at large p, where the terms grow like p^2.
double discriminant_relative(int m, double delta, double p);

/// Piecewise threshold delta*(gamma), switching branch at gamma = 5/3.
/// Throws std::domain_error for gamma outside (1, 1 + 2/sqrt(3)).
double delta_star(double gamma);

/// (gamma + 1)/4 - sqrt(2 (gamma - 1))/2, used for gamma < 5/3.
double delta_star_low_branch(double gamma);
/// (1 - (2 sqrt3 - 3) gamma) / (2 (3 - sqrt3)), used for gamma >= 5/3.
double delta_star_high_branch(double gamma);

/// max{0, (5 delta - 3) / 2}
double alpha_weight(double delta);

/// Open interval of admissible far-field decay exponents sigma for
/// rho0 ~ r^-sigma: (max{n, (n-2)/(2 gamma - 2)}, 1/(1 - delta)).
struct SigmaRange {
  double lower;
  double upper;
  bool contains(double sigma) const { return sigma > lower && sigma < upper; }
};
SigmaRange tail_exponent_range(const Params& params);

}  // namespace rdns
