#include "rdns/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rdns {

namespace {

void validate_inputs(double A, double gamma, double delta, double a1, int n) {
  if (!(A > 0.0)) throw std::invalid_argument("A must be positive");
  if (!(gamma > 1.0)) throw std::invalid_argument("gamma must exceed 1 (iota undefined)");
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
  if (!(a1 > 0.0)) throw std::invalid_argument("a1 must be positive");
  if (n != 2 && n != 3) throw std::invalid_argument("n must be 2 or 3");
}

Params fill(double A, double gamma, double delta, double a1, int n, double a2, bool override_a2) {
  Params p;
  p.A = A;
  p.gamma = gamma;
  p.delta = delta;
  p.a1 = a1;
  p.n = n;
  p.m = n - 1;
  p.a2 = a2;
  p.a2_override = override_a2;
  p.a = std::pow(A * gamma / (gamma - 1.0), (1.0 - delta) / (gamma - 1.0));
  p.iota = (delta - 1.0) / (2.0 * (gamma - 1.0));
  return p;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

Params derive_constants(double A, double gamma, double delta, double a1, int n) {
  validate_inputs(A, gamma, delta, a1, n);
  return fill(A, gamma, delta, a1, n, 2.0 * a1 * (delta - 1.0), false);
}

Params derive_constants_with_a2(double A, double gamma, double delta, double a1, int n,
                                double a2) {
  validate_inputs(A, gamma, delta, a1, n);
  return fill(A, gamma, delta, a1, n, a2, true);
}

double p_tilde(int m, double delta) {
  if (m != 1 && m != 2) throw std::domain_error("p_tilde: m must be 1 or 2");
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("p_tilde: delta must lie in (0, 1)");
  const double md = m * delta - (m - 1);
  const double radicand = delta * md * ((m + 1) * delta - m);
  // The radicand vanishes exactly at delta = m/(m+1); allow rounding there.
  if (radicand < -1e-15) throw std::domain_error("p_tilde: negative radicand, delta too small for m");
  const double root = std::sqrt(std::max(radicand, 0.0));
  return (2.0 * delta * md + 2.0 * root) / (m * (1.0 - delta) * (1.0 - delta));
}

double discriminant(int m, double delta, double p) {
  const double c = delta * m * m - m * m + m;
  const double om = 1.0 - delta;
  return m * m * om * om * p * p - 4.0 * delta * c * p + 4.0 * delta * c;
}

double discriminant_relative(int m, double delta, double p) {
  const double c = delta * m * m - m * m + m;
  const double om = 1.0 - delta;
  const double scale = m * m * om * om * p * p + 4.0 * std::abs(delta * c) * (std::abs(p) + 1.0);
  return std::abs(discriminant(m, delta, p)) / scale;
}

double delta_star(double gamma) {
  const double upper = 1.0 + 2.0 / std::sqrt(3.0);
  if (!(gamma > 1.0 && gamma < upper))
    throw std::domain_error("delta_star: gamma outside (1, 1 + 2/sqrt(3))");
  return gamma < 5.0 / 3.0 ? delta_star_low_branch(gamma) : delta_star_high_branch(gamma);
}

double delta_star_low_branch(double gamma) {
  return (gamma + 1.0) / 4.0 - std::sqrt(2.0 * (gamma - 1.0)) / 2.0;
}

double delta_star_high_branch(double gamma) {
  const double s3 = std::sqrt(3.0);
  return (1.0 - (2.0 * s3 - 3.0) * gamma) / (2.0 * (3.0 - s3));
}

double alpha_weight(double delta) { return std::max(0.0, (5.0 * delta - 3.0) / 2.0); }

SigmaRange tail_exponent_range(const Params& params) {
  const double n = params.n;
  const double lower = std::max(n, (n - 2.0) / (2.0 * params.gamma - 2.0));
  const double upper = params.delta < 1.0 ? 1.0 / (1.0 - params.delta)
                                          : std::numeric_limits<double>::infinity();
  return {lower, upper};
}

AdmissibilityReport check_admissible(const Params& params, double tol) {
  AdmissibilityReport rep;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double d = params.delta;
  const double g = params.gamma;
  const double d3 = 7.0 - 2.0 * std::sqrt(10.0);

  rep.thresholds.delta_lower_3d = d3;
  rep.thresholds.gamma_upper_3d = 6.0 * d - 3.0;
  try {
    rep.thresholds.delta_star = delta_star(g);
  } catch (const std::domain_error&) {
    rep.thresholds.delta_star = nan;
  }
  try {
    rep.thresholds.p_tilde = p_tilde(params.m, d);
  } catch (const std::domain_error&) {
    rep.thresholds.p_tilde = nan;
  }

  if (!(params.a1 > 0.0)) rep.reasons.push_back("a1 <= 0");
  if (2.0 * params.a1 + params.n * params.a2 < -tol) rep.reasons.push_back("2 a1 + n a2 < 0");

  if (!params.a2_override) {
    if (params.n == 2) {
      if (d <= 0.5 + tol) rep.reasons.push_back("delta <= 1/2");
      if (d >= 1.0 - tol) rep.reasons.push_back("delta >= 1");
      if (g <= 1.0 + tol) rep.reasons.push_back("gamma <= 1");
    } else {
      if (d <= d3 + tol) rep.reasons.push_back("delta <= 7-2sqrt(10) (" + fmt(d3) + ")");
      if (d >= 1.0 - tol) rep.reasons.push_back("delta >= 1");
      if (g <= 1.0 + tol) rep.reasons.push_back("gamma <= 1");
      if (g >= 6.0 * d - 3.0 - tol)
        rep.reasons.push_back("gamma >= 6 delta - 3 (" + fmt(6.0 * d - 3.0) + ")");
    }
  }

  rep.admissible = rep.reasons.empty();
  rep.reduced_initial_conditions = rep.admissible && g >= d + 0.5 - tol;
  return rep;
}

}  // namespace rdns
