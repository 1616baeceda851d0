#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "invlab/grid.hpp"
#include "invlab/helmholtz_operator.hpp"

namespace invlab {

struct SolveReport {
  int iterations = 0;
  /// Last successive-iterate max difference divided by (1 + max|u|).
  double final_residual = 0.0;
  bool converged = false;
};

struct PicardOptions {
  double tol = 1e-10;
  int max_iter = 50;
};

/// Nonzero entries of a potential, indexed by operator rows.
struct PotentialSupport {
  std::vector<std::int32_t> rows;
  std::vector<complex> values;

  static PotentialSupport from_field(const HelmholtzOperator& op, const ComplexField& c);
  bool empty() const { return rows.empty(); }
};

/// Result of running Picard iterations on several Dirichlet data at once.
/// Blocks are operator rows x width, row-major.
struct PicardBlock {
  int width = 0;
  std::vector<complex> linear;    // first iterate: the c = 0 Helmholtz solution
  std::vector<complex> solution;  // last iterate of each column
  std::vector<SolveReport> reports;
};

/// Picard iteration u <- A^{-1}(b + c u^m) per column of `boundary_rhs`
/// (which carries only the Dirichlet contributions), run as defect
/// correction so that converged columns satisfy the discrete equation to
/// round-off. `linear` is the refined c = 0 solution. Columns stop
/// independently; a column that diverges or exhausts max_iter is reported
/// with converged = false rather than thrown.
PicardBlock picard_block(const HelmholtzOperator& op, int m, const PotentialSupport& c,
                         std::vector<complex> boundary_rhs, int width,
                         const PicardOptions& options);

ComplexField solve_helmholtz(const Grid& grid, const DomainMask& mask, double k,
                             const ComplexField& dirichlet, const ComplexField& source);

/// Solves Delta u + k^2 u - c u^m = 0 with u = dirichlet off the disk.
/// Throws NoConvergence when the iteration does not settle.
std::pair<ComplexField, SolveReport> solve_nonlinear(const HelmholtzOperator& op, int m,
                                                     const ComplexField& c,
                                                     const ComplexField& dirichlet,
                                                     const PicardOptions& options = {});

std::pair<ComplexField, SolveReport> solve_nonlinear(const Grid& grid, const DomainMask& mask,
                                                     double k, int m, const ComplexField& c,
                                                     const ComplexField& dirichlet,
                                                     double tol = 1e-10, int max_iter = 50);

/// Delta_h u + k^2 u - c u^m at the interior nodes, with boundary values
/// taken from `dirichlet` as in the solve.
ComplexField nonlinear_residual(const HelmholtzOperator& op, int m, const ComplexField& c,
                                const ComplexField& u, const ComplexField& dirichlet);

/// Linear map from interior nodal values to normal derivatives on a circle.
///
/// Each boundary sample b with normal nu gets a cubic least-squares fit over
/// the interior nodes within four spacings of b - h nu; the fitted polynomial
/// is evaluated at b, b - h nu, b - 2h nu and combined as
/// (3 u(b) - 4 u(b - h nu) + u(b - 2h nu)) / (2h).
/// Only interior nodes enter the fit, so the Dirichlet values stored off the
/// disk never contaminate the derivative.
class NeumannTraceOperator {
 public:
  NeumannTraceOperator(const Grid& grid, const DomainMask& mask,
                       const BoundaryGeometry& boundary);

  std::size_t samples() const { return offsets_.size() - 1; }

  std::vector<complex> apply(const ComplexField& field) const;

  /// Trace of column `col` of a row-space block (see HelmholtzOperator).
  void apply_rows(std::span<const complex> block, int width, int col,
                  std::span<const std::int32_t> node_to_row, std::span<complex> out) const;

  std::span<const std::int32_t> stencil_nodes(std::size_t t) const {
    return {nodes_.data() + offsets_[t], nodes_.data() + offsets_[t + 1]};
  }
  std::span<const double> stencil_weights(std::size_t t) const {
    return {weights_.data() + offsets_[t], weights_.data() + offsets_[t + 1]};
  }

 private:
  Grid grid_;
  std::vector<std::size_t> offsets_;
  std::vector<std::int32_t> nodes_;
  std::vector<double> weights_;
};

/// Normal derivative of `field` on the sampled circle; the disk of the
/// boundary's radius selects which nodes are used.
std::vector<complex> neumann_trace(const ComplexField& field, const Grid& grid,
                                   const BoundaryGeometry& boundary);

}  // namespace invlab
