#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "invlab/types.hpp"

namespace invlab {

/// Square raster [-half_width, half_width]^2 with n nodes per axis.
/// Node (p, q) sits at column p (x1) and row q (x2); storage is row-major.
class Grid {
 public:
  Grid(int n_per_axis, double half_width);

  int n() const { return n_; }
  double half_width() const { return half_width_; }
  double spacing() const { return spacing_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }

  std::size_t index(int p, int q) const {
    return static_cast<std::size_t>(q) * n_ + p;
  }
  /// Coordinate of node p along either axis; exactly antisymmetric about 0.
  double coord(int p) const {
    return half_width_ * static_cast<double>(2 * p - (n_ - 1)) / (n_ - 1);
  }
  Vec2 node(int p, int q) const { return {coord(p), coord(q)}; }
  Vec2 node(std::size_t idx) const {
    return node(static_cast<int>(idx % n_), static_cast<int>(idx / n_));
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.n_ == b.n_ && a.half_width_ == b.half_width_;
  }

 private:
  int n_;
  double half_width_;
  double spacing_;
};

Grid build_grid(int n_per_axis, double half_width = 0.5);

/// Interior flags of the disk |x| < radius on a grid.
struct DomainMask {
  double radius = 0.0;
  std::vector<std::uint8_t> interior;
  std::size_t interior_count = 0;

  bool is_interior(std::size_t idx) const { return interior[idx] != 0; }
};

DomainMask disk_mask(const Grid& grid, double radius);

/// Equal-angle samples of the circle of given radius with outward normals and
/// trapezoid weights.
struct BoundaryGeometry {
  double radius = 0.0;
  std::vector<double> theta;
  std::vector<Vec2> points;
  std::vector<Vec2> normals;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

BoundaryGeometry boundary_circle(int n_samples, double radius);

/// Complex samples on the nodes of a grid.
struct ComplexField {
  Grid grid;
  std::vector<complex> values;

  explicit ComplexField(const Grid& g, complex fill = 0.0)
      : grid(g), values(g.size(), fill) {}

  complex& operator[](std::size_t i) { return values[i]; }
  const complex& operator[](std::size_t i) const { return values[i]; }
  complex& at(int p, int q) { return values[grid.index(p, q)]; }
  const complex& at(int p, int q) const { return values[grid.index(p, q)]; }

  ComplexField& operator+=(const ComplexField& o);
  ComplexField& operator-=(const ComplexField& o);
  ComplexField& operator*=(complex s);

  bool all_finite() const;
  double max_abs() const;
};

ComplexField operator+(ComplexField a, const ComplexField& b);
ComplexField operator-(ComplexField a, const ComplexField& b);
ComplexField operator*(complex s, ComplexField a);

/// Samples f at every node.
template <class F>
ComplexField sample_field(const Grid& grid, F&& f) {
  ComplexField out(grid);
  for (int q = 0; q < grid.n(); ++q)
    for (int p = 0; p < grid.n(); ++p) out.at(p, q) = f(grid.node(p, q));
  return out;
}

/// Bilinear interpolation of a field at an arbitrary point of its square.
complex interpolate_bilinear(const ComplexField& field, Vec2 x);

/// Bilinear interpolation of a fine-grid field onto the nodes of a coarse grid.
ComplexField resample_to(const Grid& coarse, const ComplexField& field_on_fine,
                         const Grid& fine);

}  // namespace invlab
