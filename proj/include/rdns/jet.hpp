// Truncated Taylor arithmetic in one variable.
//
// A Jet<K> carries f, f', ..., f^(K) at a point; arithmetic propagates them
// exactly (up to rounding). It is the exact-derivative route used by the
// identity checks and by the manufactured-solution sources.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace rdns {

template <int K>
class Jet {
 public:
  static_assert(K >= 0);

  constexpr Jet() { c_.fill(0.0); }
  constexpr Jet(double value) {  // NOLINT: implicit constants are the point
    c_.fill(0.0);
    c_[0] = value;
  }

  /// Independent variable x evaluated at `at`.
  static Jet variable(double at) {
    Jet j(at);
    if constexpr (K >= 1) j.c_[1] = 1.0;
    return j;
  }

  /// Builds a jet from derivative values f, f', f'', ...
  static Jet from_derivatives(const std::array<double, K + 1>& d) {
    Jet j;
    double fact = 1.0;
    for (int k = 0; k <= K; ++k) {
      if (k > 0) fact *= k;
      j.c_[k] = d[k] / fact;
    }
    return j;
  }

  double value() const { return c_[0]; }

  /// k-th derivative.
  double d(int k) const {
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return c_[k] * fact;
  }

  /// Taylor coefficient f^(k)/k!.
  double coeff(int k) const { return c_[k]; }
  double& coeff(int k) { return c_[k]; }

  /// Jet of f'. The top entry is unknown and set to NaN.
  Jet derivative() const {
    Jet out;
    for (int k = 0; k < K; ++k) out.c_[k] = (k + 1) * c_[k + 1];
    out.c_[K] = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  Jet& operator+=(const Jet& o) {
    for (int k = 0; k <= K; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k <= K; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet out;
    for (int k = 0; k <= K; ++k) {
      double s = 0.0;
      for (int j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
      out.c_[k] = s;
    }
    return out;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet q;
    for (int k = 0; k <= K; ++k) {
      double s = a.c_[k];
      for (int j = 1; j <= k; ++j) s -= b.c_[j] * q.c_[k - j];
      q.c_[k] = s / b.c_[0];
    }
    return q;
  }

  friend Jet exp(const Jet& a) {
    Jet e;
    e.c_[0] = std::exp(a.c_[0]);
    for (int k = 1; k <= K; ++k) {
      double s = 0.0;
      for (int j = 1; j <= k; ++j) s += j * a.c_[j] * e.c_[k - j];
      e.c_[k] = s / k;
    }
    return e;
  }

  friend Jet log(const Jet& a) {
    Jet l;
    l.c_[0] = std::log(a.c_[0]);
    for (int k = 1; k <= K; ++k) {
      double s = 0.0;
      for (int j = 1; j < k; ++j) s += j * l.c_[j] * a.c_[k - j];
      l.c_[k] = (a.c_[k] - s / k) / a.c_[0];
    }
    return l;
  }

  /// Real power of a jet with positive value.
  friend Jet pow(const Jet& a, double p) { return exp(p * log(a)); }

  /// Integer power by repeated multiplication; valid for any sign.
  friend Jet ipow(const Jet& a, int p) {
    Jet out(1.0);
    for (int i = 0; i < p; ++i) out = out * a;
    return out;
  }

  friend Jet sqrt(const Jet& a) { return pow(a, 0.5); }

  /// |a| away from a = 0.
  friend Jet abs(const Jet& a) { return a.c_[0] < 0.0 ? -a : a; }

  friend Jet sin(const Jet& a) { return sincos(a, true); }
  friend Jet cos(const Jet& a) { return sincos(a, false); }

 private:
  static Jet sincos(const Jet& a, bool want_sin) {
    Jet s, c;
    s.c_[0] = std::sin(a.c_[0]);
    c.c_[0] = std::cos(a.c_[0]);
    for (int k = 1; k <= K; ++k) {
      double ss = 0.0, cc = 0.0;
      for (int j = 1; j <= k; ++j) {
        ss += j * a.c_[j] * c.c_[k - j];
        cc -= j * a.c_[j] * s.c_[k - j];
      }
      s.c_[k] = ss / k;
      c.c_[k] = cc / k;
    }
    return want_sin ? s : c;
  }

  std::array<double, K + 1> c_;
};

}  // namespace rdns
