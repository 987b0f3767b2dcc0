// Cell-centred radial mesh on [0, R_max], finite-difference D_r operators,
// quadrature and weighted norms.

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace rdns {

using Field = std::vector<double>;

/// Reflection behaviour of a field across r = 0. Radial velocities and their
/// odd derivatives are odd; densities and their even derivatives are even.
enum class Parity { even, odd };

constexpr Parity flip(Parity p) { return p == Parity::even ? Parity::odd : Parity::even; }

enum class StretchKind { uniform, geometric };

struct Stretch {
  StretchKind kind = StretchKind::uniform;
  double ratio = 1.0;  ///< width(i+1) / width(i) for geometric grids

  static Stretch uniform() { return {}; }
  static Stretch geometric(double ratio) { return {StretchKind::geometric, ratio}; }
};

/// Immutable mesh. Node i is the centre of cell [face(i), face(i+1)]; there
/// is no node at r = 0.
class RadialGrid {
 public:
  RadialGrid(double r_max, std::size_t n, Stretch stretch);

  std::size_t size() const { return nodes_.size(); }
  double r_max() const { return r_max_; }
  const Stretch& stretch() const { return stretch_; }

  std::span<const double> nodes() const { return nodes_; }
  double r(std::size_t i) const { return nodes_[i]; }

  /// size() + 1 cell faces, faces()[0] = 0, faces().back() = R_max.
  std::span<const double> faces() const { return faces_; }

  /// Cell widths; weights of the midpoint rule for int_0^R_max f dr.
  std::span<const double> quad_weights() const { return widths_; }

  /// Exact int of r^m over each cell, m in {0, 1, 2}; weights for the
  /// radial moments int r^m f dr.
  std::span<const double> shell_weights(int m) const { return shells_[static_cast<std::size_t>(m)]; }

  double min_spacing() const { return min_width_; }

  /// First and second derivative of nodal data. `f` must have size() entries.
  Field d1(std::span<const double> f, Parity parity) const;
  Field d2(std::span<const double> f, Parity parity) const;
  void d1(std::span<const double> f, Parity parity, std::span<double> out) const;

  /// Value at an arbitrary radius in [0, R_max] by 4-point Lagrange
  /// interpolation with parity reflection at the origin.
  double interpolate(std::span<const double> f, Parity parity, double r) const;

 private:
  struct Stencil {
    std::array<std::size_t, 4> idx{};
    std::array<double, 4> w_even{};
    std::array<double, 4> w_odd{};
    int size = 0;
  };

  void build_stencils();
  static void apply(const std::vector<Stencil>& st, std::span<const double> f, Parity parity,
                    std::span<double> out);

  double r_max_;
  Stretch stretch_;
  std::vector<double> nodes_;
  std::vector<double> faces_;
  std::vector<double> widths_;
  std::array<std::vector<double>, 3> shells_;
  double min_width_ = 0.0;
  std::vector<Stencil> first_;
  std::vector<Stencil> second_;
};

/// Validating factory. Requires R_max > 0 and N >= 4; geometric ratios must
/// lie in (0, 2] so every cell keeps a positive width.
RadialGrid build_grid(double r_max, std::size_t n, Stretch stretch = Stretch::uniform());

/// Radial surrogate of the gradient stack:
///   j = 1: (f_r, f/r)
///   j = 2: (f_rr, (f/r)_r)
///   j = 3: (f_rrr, f_rr/r, (f/r)_rr, (f/r)_r / r)
///   j = 4: (f_rrrr, (f_rr/r)_r, (f/r)_rrr, ((f/r)_r / r)_r)
struct DrStack {
  int order = 1;
  std::vector<Field> components;

  /// Pointwise |D_r^j f|^2.
  Field magnitude_squared() const;
};

DrStack dr_apply(const RadialGrid& grid, std::span<const double> f, int order,
                 Parity parity = Parity::odd);

/// (int |r^k f|^p dr)^(1/p) with the grid quadrature; p = infinity gives the
/// nodal maximum of |r^k f|.
double weighted_norm(const RadialGrid& grid, std::span<const double> f, double k, double p);

/// sum_i w_i f_i with w = shell_weights(m): int_0^R r^m f dr.
double radial_moment(const RadialGrid& grid, std::span<const double> f, int m);

enum class CutoffFlavor { flat, sharp };

/// flat: 1 on [0, sigma), 0 beyond. sharp: the complement.
Field cutoff_mask(const RadialGrid& grid, double sigma, CutoffFlavor flavor);

/// Finite-difference weights for the derivative of order `deriv` at x0 from
/// the nodes xs (Fornberg's recursion). Exposed for tests.
std::vector<double> fd_weights(double x0, std::span<const double> xs, int deriv);

}  // namespace rdns
