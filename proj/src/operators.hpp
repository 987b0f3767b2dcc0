// Face-centred viscous operator and tridiagonal helpers shared by both
// solvers. Internal header.

#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "rdns/grid.hpp"

namespace rdns::detail {

/// Weights of the linear interpolation from nodes k-1 and k to face k
/// (1 <= k <= N-1).
inline void face_weights(const RadialGrid& g, std::size_t k, double& wl, double& wr) {
  const double f = g.faces()[k];
  const double rl = g.r(k - 1), rr = g.r(k);
  wr = (f - rl) / (rr - rl);
  wl = 1.0 - wr;
}

/// q = u_r + m u / r on faces as q_k = A_k u_{k-1} + B_k u_k. At the origin
/// face q_0 = (1 + m) u_0 / r_0 (A_0 unused); at the wall u = 0 gives
/// q_N = A_N u_{N-1} with A_N = -2 / h_{N-1}.
struct FaceStencil {
  std::vector<double> a;  ///< coefficient of u_{k-1}
  std::vector<double> b;  ///< coefficient of u_k
  std::vector<double> wl, wr;
  std::vector<double> face_pow_m;  ///< f_k^m

  FaceStencil(const RadialGrid& g, int m) {
    const std::size_t n = g.size();
    a.assign(n + 1, 0.0);
    b.assign(n + 1, 0.0);
    wl.assign(n + 1, 0.0);
    wr.assign(n + 1, 0.0);
    face_pow_m.assign(n + 1, 0.0);
    for (std::size_t k = 0; k <= n; ++k) face_pow_m[k] = std::pow(g.faces()[k], m);
    b[0] = (1.0 + m) / g.r(0);
    wr[0] = 1.0;
    for (std::size_t k = 1; k < n; ++k) {
      face_weights(g, k, wl[k], wr[k]);
      const double dr = g.r(k) - g.r(k - 1);
      const double f = g.faces()[k];
      a[k] = -1.0 / dr + m * wl[k] / f;
      b[k] = 1.0 / dr + m * wr[k] / f;
    }
    a[n] = -2.0 / g.quad_weights()[n - 1];
    wl[n] = 1.0;
  }

  /// Nodal coefficient interpolated to face k (extrapolated as the nearest
  /// node value at the origin and the wall).
  double face_value(std::span<const double> c, std::size_t k) const {
    const std::size_t n = c.size();
    if (k == 0) return c[0];
    if (k == n) return c[n - 1];
    return wl[k] * c[k - 1] + wr[k] * c[k];
  }

  double q(std::span<const double> u, std::size_t k) const {
    const std::size_t n = u.size();
    if (k == 0) return b[0] * u[0];
    if (k == n) return a[n] * u[n - 1];
    return a[k] * u[k - 1] + b[k] * u[k];
  }
};

/// div_i = (c_{i+1} q_{i+1} - c_i q_i) / h_i with c the face-interpolated
/// coefficient (c = empty means 1).
inline void strain_divergence(const RadialGrid& g, const FaceStencil& fs,
                              std::span<const double> coef, std::span<const double> u,
                              std::span<double> out) {
  const std::size_t n = u.size();
  const auto h = g.quad_weights();
  double s_prev = (coef.empty() ? 1.0 : fs.face_value(coef, 0)) * fs.q(u, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double s_next = (coef.empty() ? 1.0 : fs.face_value(coef, i + 1)) * fs.q(u, i + 1);
    out[i] = (s_next - s_prev) / h[i];
    s_prev = s_next;
  }
}

/// Tridiagonal representation of u -> strain_divergence(coef, u):
/// out_i = lo_i u_{i-1} + di_i u_i + up_i u_{i+1}.
inline void strain_matrix(const RadialGrid& g, const FaceStencil& fs,
                          std::span<const double> coef, std::vector<double>& lo,
                          std::vector<double>& di, std::vector<double>& up) {
  const std::size_t n = g.size();
  const auto h = g.quad_weights();
  lo.assign(n, 0.0);
  di.assign(n, 0.0);
  up.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double cr = coef.empty() ? 1.0 : fs.face_value(coef, i + 1);
    const double cl = coef.empty() ? 1.0 : fs.face_value(coef, i);
    // face i+1 contributes +cr (a u_i + b u_{i+1}); face i contributes -cl (a u_{i-1} + b u_i)
    if (i + 1 < n) {
      di[i] += cr * fs.a[i + 1];
      up[i] += cr * fs.b[i + 1];
    } else {
      di[i] += cr * fs.a[n];
    }
    if (i == 0) {
      di[i] -= cl * fs.b[0];
    } else {
      lo[i] -= cl * fs.a[i];
      di[i] -= cl * fs.b[i];
    }
    lo[i] /= h[i];
    di[i] /= h[i];
    up[i] /= h[i];
  }
}

/// Solves the tridiagonal system in place (rhs becomes the solution).
inline void thomas(const std::vector<double>& lo, std::vector<double> di, std::vector<double> up,
                   std::vector<double>& rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = lo[i] / di[i - 1];
    di[i] -= w * up[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= di[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - up[i] * rhs[i + 1]) / di[i];
}

}  // namespace rdns::detail
