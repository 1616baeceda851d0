#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "invlab/grid.hpp"

namespace invlab {

/// Factored five-point discretization of Delta + k^2 on the interior nodes of
/// a disk mask. Where a stencil arm leaves the disk, the exterior value is a
/// ghost extrapolated linearly from u_i through the Dirichlet value at the
/// point where the arm crosses the circle. Only the diagonal changes, so the
/// matrix stays symmetric while the boundary condition sits on the circle
/// itself rather than on the staircase of exterior nodes.
///
/// The matrix is real symmetric; it is factored once as P^T L D L^T P and the
/// factor is shared read-only by every solve, so `solve_block` may be called
/// concurrently from several threads.
class HelmholtzOperator {
 public:
  HelmholtzOperator(const Grid& grid, const DomainMask& mask, double k);

  const Grid& grid() const { return grid_; }
  const DomainMask& mask() const { return mask_; }
  double k() const { return k_; }
  std::size_t unknowns() const { return unknown_node_.size(); }

  /// node index -> row, or -1 for exterior nodes.
  std::span<const std::int32_t> node_to_row() const { return node_row_; }
  /// row -> node index.
  std::span<const std::int32_t> row_to_node() const { return unknown_node_; }

  /// One stencil arm from an interior row to an exterior node. The circle
  /// crosses the arm at `theta` spacings from the interior node, at `point`.
  struct Coupling {
    std::int32_t row;
    std::int32_t node;
    double theta;
    Vec2 point;
  };
  std::span<const Coupling> dirichlet_couplings() const { return couplings_; }

  /// Dirichlet values at the crossing points, interpolated linearly along each
  /// arm from a field defined at every node.
  std::vector<complex> boundary_values(const ComplexField& dirichlet) const;

  /// Solves A X = B in place with the stored factor. `block` holds
  /// unknowns() rows of `width` complex entries each (row-major).
  void solve_block(std::span<complex> block, int width) const;

  /// solve_block followed by one step of iterative refinement. The factor of
  /// the indefinite matrix is computed without pivoting, so a plain solve can
  /// leave residuals near 1e-8 relative; one step brings them to round-off.
  void solve_refined(std::span<complex> block, int width) const;

  /// out -= A x for blocks laid out as in solve_block.
  void subtract_product(std::span<const complex> x, std::span<complex> out, int width) const;

  /// Moves the boundary values (one per coupling) to the right-hand side of
  /// column `col`.
  void add_dirichlet_rhs(std::span<const complex> boundary_values, std::span<complex> block,
                         int width, int col) const;

  /// Full-field solve: Delta_h u + k^2 u = source at interior nodes, u =
  /// dirichlet elsewhere.
  ComplexField solve(const ComplexField& dirichlet, const ComplexField& source) const;

  /// Delta_h u + k^2 u - source at every interior node (zero elsewhere), with
  /// the ghost values built from `boundary_values`.
  ComplexField residual(const ComplexField& u, std::span<const complex> boundary_values,
                        const ComplexField& source) const;

  /// Rough estimate of the smallest |eigenvalue| of the discrete operator.
  double smallest_eigenvalue_estimate() const { return lambda_min_; }

 private:
  void factor();
  void estimate_conditioning();

  Grid grid_;
  DomainMask mask_;
  double k_;
  std::vector<std::int32_t> node_row_;
  std::vector<std::int32_t> unknown_node_;
  std::vector<Coupling> couplings_;
  // Matrix rows: diagonal and up to four interior neighbours (-1 if absent).
  std::vector<double> diag_;
  std::vector<std::array<std::int32_t, 4>> neighbours_;

  // Factor storage (CSC of the unit lower factor, without its diagonal).
  std::vector<std::int32_t> l_outer_;
  std::vector<std::int32_t> l_inner_;
  std::vector<double> l_values_;
  // The same factor stored by rows.
  std::vector<std::int32_t> lr_outer_;
  std::vector<std::int32_t> lr_inner_;
  std::vector<double> lr_values_;
  std::vector<double> d_inv_;
  std::vector<std::int32_t> perm_;
  double lambda_min_ = 0.0;
};

}  // namespace invlab
