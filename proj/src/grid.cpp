#include "invlab/grid.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace invlab {

Grid::Grid(int n_per_axis, double half_width)
    : n_(n_per_axis), half_width_(half_width) {
  if (n_per_axis < 3)
    throw std::invalid_argument("grid needs at least 3 nodes per axis, got " +
                                std::to_string(n_per_axis));
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("grid half width must be positive");
  spacing_ = 2.0 * half_width_ / (n_ - 1);
}

Grid build_grid(int n_per_axis, double half_width) {
  return Grid(n_per_axis, half_width);
}

DomainMask disk_mask(const Grid& grid, double radius) {
  if (!(radius > 0.0) || radius > grid.half_width())
    throw std::invalid_argument("disk radius must lie in (0, half_width]");

  // Work in index units: node offsets from the center are (2p - (n-1)) / 2
  // spacings, so the test below is exact in integers whenever the radius is
  // commensurate with the grid and symmetric under the square's dihedral group.
  const int n = grid.n();
  const double r2 = radius * (n - 1) / grid.half_width();
  const double r2sq = r2 * r2;

  DomainMask mask;
  mask.radius = radius;
  mask.interior.assign(grid.size(), 0);
  for (int q = 0; q < n; ++q) {
    const double dq = 2.0 * q - (n - 1);
    for (int p = 0; p < n; ++p) {
      const double dp = 2.0 * p - (n - 1);
      if (dp * dp + dq * dq < r2sq) {
        mask.interior[grid.index(p, q)] = 1;
        ++mask.interior_count;
      }
    }
  }
  return mask;
}

BoundaryGeometry boundary_circle(int n_samples, double radius) {
  if (n_samples < 8)
    throw std::invalid_argument("boundary circle needs at least 8 samples");
  if (!(radius > 0.0))
    throw std::invalid_argument("boundary radius must be positive");

  BoundaryGeometry b;
  b.radius = radius;
  const double dtheta = 2.0 * pi / n_samples;
  b.theta.resize(n_samples);
  b.points.resize(n_samples);
  b.normals.resize(n_samples);
  b.weights.assign(n_samples, radius * dtheta);
  for (int t = 0; t < n_samples; ++t) {
    const double th = dtheta * t;
    b.theta[t] = th;
    b.normals[t] = {std::cos(th), std::sin(th)};
    b.points[t] = radius * b.normals[t];
  }
  return b;
}

ComplexField& ComplexField::operator+=(const ComplexField& o) {
  if (!(grid == o.grid)) throw std::invalid_argument("field grids differ");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
  return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& o) {
  if (!(grid == o.grid)) throw std::invalid_argument("field grids differ");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
  return *this;
}

ComplexField& ComplexField::operator*=(complex s) {
  for (auto& v : values) v *= s;
  return *this;
}

bool ComplexField::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](complex v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

double ComplexField::max_abs() const {
  double m = 0.0;
  for (auto v : values) m = std::max(m, std::abs(v));
  return m;
}

ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
ComplexField operator*(complex s, ComplexField a) { return a *= s; }

complex interpolate_bilinear(const ComplexField& field, Vec2 x) {
  const Grid& g = field.grid;
  const double h = g.spacing();
  const double u = (x.x1 + g.half_width()) / h;
  const double v = (x.x2 + g.half_width()) / h;
  const double last = g.n() - 1;
  if (u < -1e-9 || v < -1e-9 || u > last + 1e-9 || v > last + 1e-9)
    throw std::out_of_range("interpolation point outside the grid");
  const int p = std::clamp(static_cast<int>(std::floor(u)), 0, g.n() - 2);
  const int q = std::clamp(static_cast<int>(std::floor(v)), 0, g.n() - 2);
  const double s = u - p;
  const double t = v - q;
  return (1 - s) * (1 - t) * field.at(p, q) + s * (1 - t) * field.at(p + 1, q) +
         (1 - s) * t * field.at(p, q + 1) + s * t * field.at(p + 1, q + 1);
}

ComplexField resample_to(const Grid& coarse, const ComplexField& field_on_fine,
                         const Grid& fine) {
  if (coarse.half_width() != fine.half_width())
    throw std::invalid_argument("resample_to: grids must share half_width");
  if (!(field_on_fine.grid == fine))
    throw std::invalid_argument("resample_to: field does not live on the fine grid");
  ComplexField out(coarse);
  for (int q = 0; q < coarse.n(); ++q)
    for (int p = 0; p < coarse.n(); ++p)
      out.at(p, q) = interpolate_bilinear(field_on_fine, coarse.node(p, q));
  return out;
}

}  // namespace invlab
