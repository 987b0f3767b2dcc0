#include "rdns/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rdns {

std::vector<double> fd_weights(double x0, std::span<const double> xs, int deriv) {
  // Fornberg, "Generation of finite difference formulas on arbitrarily spaced grids".
  const int n = static_cast<int>(xs.size()) - 1;
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n + 1),
                                     std::vector<double>(static_cast<std::size_t>(deriv + 1), 0.0));
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, deriv);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) w[i] = c[i][deriv];
  return w;
}

RadialGrid::RadialGrid(double r_max, std::size_t n, Stretch stretch)
    : r_max_(r_max), stretch_(stretch) {
  widths_.resize(n);
  if (stretch.kind == StretchKind::uniform || stretch.ratio == 1.0) {
    std::fill(widths_.begin(), widths_.end(), r_max / static_cast<double>(n));
  } else {
    const double q = stretch.ratio;
    const double h0 = r_max * (q - 1.0) / (std::pow(q, static_cast<double>(n)) - 1.0);
    for (std::size_t i = 0; i < n; ++i) widths_[i] = h0 * std::pow(q, static_cast<double>(i));
  }
  faces_.resize(n + 1);
  faces_[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) faces_[i + 1] = faces_[i] + widths_[i];
  // Pin the last face so the truncation radius is exact.
  const double scale = r_max / faces_[n];
  for (auto& f : faces_) f *= scale;
  for (std::size_t i = 0; i < n; ++i) widths_[i] = faces_[i + 1] - faces_[i];
  if (stretch.kind == StretchKind::uniform) {
    const double h = r_max / static_cast<double>(n);
    std::fill(widths_.begin(), widths_.end(), h);
  }

  nodes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) nodes_[i] = faces_[i] + 0.5 * widths_[i];

  for (int m = 0; m < 3; ++m) {
    auto& s = shells_[static_cast<std::size_t>(m)];
    s.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = faces_[i], b = faces_[i + 1];
      s[i] = (std::pow(b, m + 1) - std::pow(a, m + 1)) / (m + 1);
    }
  }
  min_width_ = *std::min_element(widths_.begin(), widths_.end());
  build_stencils();
}

void RadialGrid::build_stencils() {
  const std::size_t n = nodes_.size();
  first_.assign(n, {});
  second_.assign(n, {});

  auto make = [&](double x0, std::span<const std::size_t> idx, bool ghost_first, int deriv) {
    // When ghost_first is set, idx[0] refers to the mirror image of node idx[0].
    std::vector<double> xs(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) xs[k] = nodes_[idx[k]];
    if (ghost_first) xs[0] = -xs[0];
    const auto w = fd_weights(x0, xs, deriv);
    Stencil st;
    if (ghost_first) {
      // Merge the ghost weight into its source node.
      st.size = static_cast<int>(idx.size()) - 1;
      for (int k = 0; k < st.size; ++k) {
        st.idx[k] = idx[k + 1];
        st.w_even[k] = w[k + 1];
        st.w_odd[k] = w[k + 1];
      }
      for (int k = 0; k < st.size; ++k) {
        if (st.idx[k] == idx[0]) {
          st.w_even[k] += w[0];
          st.w_odd[k] -= w[0];
        }
      }
    } else {
      st.size = static_cast<int>(idx.size());
      for (int k = 0; k < st.size; ++k) {
        st.idx[k] = idx[k];
        st.w_even[k] = w[k];
        st.w_odd[k] = w[k];
      }
    }
    return st;
  };

  for (std::size_t i = 0; i < n; ++i) {
    const double x0 = nodes_[i];
    if (i == 0) {
      const std::array<std::size_t, 3> idx{0, 0, 1};
      first_[i] = make(x0, idx, true, 1);
      second_[i] = make(x0, idx, true, 2);
    } else if (i + 1 < n) {
      const std::array<std::size_t, 3> idx{i - 1, i, i + 1};
      first_[i] = make(x0, idx, false, 1);
      second_[i] = make(x0, idx, false, 2);
    } else {
      const std::array<std::size_t, 3> idx1{n - 3, n - 2, n - 1};
      first_[i] = make(x0, idx1, false, 1);
      const std::array<std::size_t, 4> idx2{n - 4, n - 3, n - 2, n - 1};
      second_[i] = make(x0, idx2, false, 2);
    }
  }
}

void RadialGrid::apply(const std::vector<Stencil>& st, std::span<const double> f, Parity parity,
                       std::span<double> out) {
  const bool odd = parity == Parity::odd;
  for (std::size_t i = 0; i < st.size(); ++i) {
    const Stencil& s = st[i];
    const auto& w = odd ? s.w_odd : s.w_even;
    double acc = 0.0;
    for (int k = 0; k < s.size; ++k) acc += w[k] * f[s.idx[k]];
    out[i] = acc;
  }
}

Field RadialGrid::d1(std::span<const double> f, Parity parity) const {
  Field out(f.size());
  apply(first_, f, parity, out);
  return out;
}

void RadialGrid::d1(std::span<const double> f, Parity parity, std::span<double> out) const {
  apply(first_, f, parity, out);
}

Field RadialGrid::d2(std::span<const double> f, Parity parity) const {
  Field out(f.size());
  apply(second_, f, parity, out);
  return out;
}

double RadialGrid::interpolate(std::span<const double> f, Parity parity, double r) const {
  const auto n = static_cast<long>(nodes_.size());
  if (r < 0.0 || r > r_max_) throw std::out_of_range("interpolate: radius outside [0, R_max]");
  // k: last node with r_k <= r (k = -1 below the first node).
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
  long k = static_cast<long>(it - nodes_.begin()) - 1;
  long start = std::clamp(k - 1, -2L, n - 4);
  const double sign = parity == Parity::odd ? -1.0 : 1.0;
  std::array<double, 4> xs{}, ys{};
  for (long j = 0; j < 4; ++j) {
    const long idx = start + j;
    if (idx < 0) {
      const auto src = static_cast<std::size_t>(-idx - 1);
      xs[j] = -nodes_[src];
      ys[j] = sign * f[src];
    } else {
      xs[j] = nodes_[static_cast<std::size_t>(idx)];
      ys[j] = f[static_cast<std::size_t>(idx)];
    }
  }
  double acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    double l = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) l *= (r - xs[b]) / (xs[a] - xs[b]);
    acc += l * ys[a];
  }
  return acc;
}

RadialGrid build_grid(double r_max, std::size_t n, Stretch stretch) {
  if (!(r_max > 0.0)) throw std::invalid_argument("build_grid: R_max must be positive");
  if (n < 4) throw std::invalid_argument("build_grid: need at least 4 cells");
  if (stretch.kind == StretchKind::geometric && !(stretch.ratio > 0.0 && stretch.ratio <= 2.0))
    throw std::invalid_argument("build_grid: geometric ratio must lie in (0, 2]");
  return RadialGrid(r_max, n, stretch);
}

Field DrStack::magnitude_squared() const {
  Field out(components.front().size(), 0.0);
  for (const auto& c : components)
    for (std::size_t i = 0; i < c.size(); ++i) out[i] += c[i] * c[i];
  return out;
}

namespace {

struct Tracked {
  Field values;
  Parity parity;
};

Tracked deriv(const RadialGrid& g, const Tracked& t) { return {g.d1(t.values, t.parity), flip(t.parity)}; }

Tracked deriv2(const RadialGrid& g, const Tracked& t) { return {g.d2(t.values, t.parity), t.parity}; }

Tracked over_r(const RadialGrid& g, const Tracked& t) {
  Tracked out{t.values, flip(t.parity)};
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] /= g.r(i);
  return out;
}

}  // namespace

DrStack dr_apply(const RadialGrid& grid, std::span<const double> f, int order, Parity parity) {
  if (order < 1 || order > 4) throw std::invalid_argument("dr_apply: order must be in 1..4");
  if (f.size() != grid.size()) throw std::invalid_argument("dr_apply: field/grid size mismatch");
  const Tracked base{Field(f.begin(), f.end()), parity};
  const Tracked fr = deriv(grid, base);
  const Tracked f_over_r = over_r(grid, base);
  DrStack st;
  st.order = order;
  switch (order) {
    case 1:
      st.components = {fr.values, f_over_r.values};
      break;
    case 2:
      st.components = {deriv2(grid, base).values, deriv(grid, f_over_r).values};
      break;
    case 3: {
      const Tracked frr = deriv2(grid, base);
      const Tracked q1 = deriv(grid, f_over_r);
      st.components = {deriv(grid, frr).values, over_r(grid, frr).values,
                       deriv2(grid, f_over_r).values, over_r(grid, q1).values};
      break;
    }
    default: {
      const Tracked frr = deriv2(grid, base);
      const Tracked q1 = deriv(grid, f_over_r);
      st.components = {deriv2(grid, frr).values, deriv(grid, over_r(grid, frr)).values,
                       deriv(grid, deriv2(grid, f_over_r)).values,
                       deriv(grid, over_r(grid, q1)).values};
      break;
    }
  }
  return st;
}

double weighted_norm(const RadialGrid& grid, std::span<const double> f, double k, double p) {
  const auto w = grid.quad_weights();
  if (std::isinf(p)) {
    double mx = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      mx = std::max(mx, std::abs(std::pow(grid.r(i), k) * f[i]));
    return mx;
  }
  if (p < 1.0) throw std::invalid_argument("weighted_norm: p must be >= 1");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double g = std::abs(std::pow(grid.r(i), k) * f[i]);
    if (g != 0.0) acc += w[i] * std::pow(g, p);
  }
  return std::pow(acc, 1.0 / p);
}

double radial_moment(const RadialGrid& grid, std::span<const double> f, int m) {
  const auto w = grid.shell_weights(m);
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += w[i] * f[i];
  return acc;
}

Field cutoff_mask(const RadialGrid& grid, double sigma, CutoffFlavor flavor) {
  Field out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool inside = grid.r(i) < sigma;
    out[i] = (flavor == CutoffFlavor::flat) == inside ? 1.0 : 0.0;
  }
  return out;
}

}  // namespace rdns
