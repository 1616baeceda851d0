#include <Eigen/Dense>
#include <array>
#include <stdexcept>
#include <string>

#include "invlab/forward.hpp"

namespace invlab {
namespace {

constexpr double kFitRadius = 4.0;  // in grid spacings
constexpr int kMonomials = 10;      // total degree <= 3
constexpr std::size_t kMinNodes = 16;

std::array<double, kMonomials> monomials(double x, double y) {
  return {1.0, x, y, x * x, x * y, y * y, x * x * x, x * x * y, x * y * y, y * y * y};
}

}  // namespace

NeumannTraceOperator::NeumannTraceOperator(const Grid& grid, const DomainMask& mask,
                                           const BoundaryGeometry& boundary)
    : grid_(grid) {
  if (mask.interior.size() != grid.size())
    throw std::invalid_argument("trace: mask does not match grid");
  const double h = grid.spacing();
  const double hw = grid.half_width();
  const int n = grid.n();
  offsets_.push_back(0);

  for (std::size_t t = 0; t < boundary.size(); ++t) {
    const Vec2 b = boundary.points[t];
    const Vec2 nu = boundary.normals[t];
    if (std::abs(b.x1) > hw * (1 + 1e-12) || std::abs(b.x2) > hw * (1 + 1e-12))
      throw std::out_of_range("trace stencil exits the grid at boundary sample " +
                              std::to_string(t));
    const Vec2 center = b - h * nu;

    // Interior nodes near the stencil center.
    std::vector<std::int32_t> picked;
    std::vector<Vec2> local;
    const int pc = static_cast<int>(std::lround((center.x1 + hw) / h));
    const int qc = static_cast<int>(std::lround((center.x2 + hw) / h));
    const int reach = static_cast<int>(kFitRadius) + 1;
    for (int q = std::max(0, qc - reach); q <= std::min(n - 1, qc + reach); ++q) {
      for (int p = std::max(0, pc - reach); p <= std::min(n - 1, pc + reach); ++p) {
        const std::size_t idx = grid.index(p, q);
        if (!mask.is_interior(idx)) continue;
        const Vec2 d = (1.0 / h) * (grid.node(p, q) - center);
        if (norm(d) > kFitRadius) continue;
        picked.push_back(static_cast<std::int32_t>(idx));
        local.push_back(d);
      }
    }
    if (picked.size() < kMinNodes)
      throw std::out_of_range("too few interior nodes for the trace stencil at sample " +
                              std::to_string(t));

    Eigen::MatrixXd vt(kMonomials, static_cast<Eigen::Index>(picked.size()));
    for (std::size_t j = 0; j < picked.size(); ++j) {
      const auto mono = monomials(local[j].x1, local[j].x2);
      for (int r = 0; r < kMonomials; ++r) vt(r, static_cast<Eigen::Index>(j)) = mono[r];
    }
    // Functional on polynomial coefficients: one-sided second-order difference
    // of the fitted polynomial at offsets 0, h, 2h along -nu.
    const auto at_b = monomials(nu.x1, nu.x2);
    const auto at_c = monomials(0.0, 0.0);
    const auto at_2 = monomials(-nu.x1, -nu.x2);
    Eigen::VectorXd functional(kMonomials);
    for (int r = 0; r < kMonomials; ++r)
      functional[r] = (3.0 * at_b[r] - 4.0 * at_c[r] + at_2[r]) / (2.0 * h);

    // Minimum-norm w with V^T w = functional gives w = pinv(V)^T functional.
    const Eigen::VectorXd w = vt.completeOrthogonalDecomposition().solve(functional);
    for (std::size_t j = 0; j < picked.size(); ++j) {
      nodes_.push_back(picked[j]);
      weights_.push_back(w[static_cast<Eigen::Index>(j)]);
    }
    offsets_.push_back(nodes_.size());
  }
}

std::vector<complex> NeumannTraceOperator::apply(const ComplexField& field) const {
  if (!(field.grid == grid_)) throw std::invalid_argument("trace: field grid mismatch");
  std::vector<complex> out(samples());
  for (std::size_t t = 0; t < samples(); ++t) {
    complex acc = 0.0;
    for (std::size_t j = offsets_[t]; j < offsets_[t + 1]; ++j)
      acc += weights_[j] * field[nodes_[j]];
    out[t] = acc;
  }
  return out;
}

void NeumannTraceOperator::apply_rows(std::span<const complex> block, int width, int col,
                                      std::span<const std::int32_t> node_to_row,
                                      std::span<complex> out) const {
  const auto w = static_cast<std::size_t>(width);
  for (std::size_t t = 0; t < samples(); ++t) {
    complex acc = 0.0;
    for (std::size_t j = offsets_[t]; j < offsets_[t + 1]; ++j) {
      const std::int32_t row = node_to_row[nodes_[j]];
      acc += weights_[j] * block[static_cast<std::size_t>(row) * w + col];
    }
    out[t] = acc;
  }
}

std::vector<complex> neumann_trace(const ComplexField& field, const Grid& grid,
                                   const BoundaryGeometry& boundary) {
  if (!(field.grid == grid)) throw std::invalid_argument("trace: field grid mismatch");
  return NeumannTraceOperator(grid, disk_mask(grid, boundary.radius), boundary).apply(field);
}

}  // namespace invlab
