#include "invlab/forward.hpp"

#include <algorithm>
#include <string>

#include "invlab/errors.hpp"

namespace invlab {
namespace {

constexpr double kDivergence = 1e100;

complex int_pow(complex u, int m) {
  complex p = u;
  for (int r = 1; r < m; ++r) p *= u;
  return p;
}

}  // namespace

PotentialSupport PotentialSupport::from_field(const HelmholtzOperator& op,
                                              const ComplexField& c) {
  if (!(c.grid == op.grid())) throw std::invalid_argument("potential grid mismatch");
  if (!c.all_finite()) throw NonFinite("potential has non-finite values");
  PotentialSupport s;
  const auto node_row = op.node_to_row();
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    if (c[i] == complex(0.0)) continue;
    if (node_row[i] < 0)
      throw std::invalid_argument("potential must vanish outside the disk");
    s.rows.push_back(node_row[i]);
    s.values.push_back(c[i]);
  }
  return s;
}

PicardBlock picard_block(const HelmholtzOperator& op, int m, const PotentialSupport& c,
                         std::vector<complex> boundary_rhs, int width,
                         const PicardOptions& options) {
  if (m < 1) throw std::invalid_argument("nonlinearity index must be positive");
  const std::size_t rows = op.unknowns();
  const auto w = static_cast<std::size_t>(width);
  if (width < 1 || boundary_rhs.size() != rows * w)
    throw std::invalid_argument("picard_block: boundary block shape mismatch");

  PicardBlock out;
  out.width = width;
  out.linear = boundary_rhs;
  op.solve_refined(out.linear, width);
  out.solution = out.linear;
  out.reports.assign(w, SolveReport{});

  if (c.empty()) {
    // u^(1) = u^(0) exactly.
    for (auto& r : out.reports) r = {1, 0.0, true};
    return out;
  }

  // Defect correction: u <- u + A~^{-1}(b + c u^m - A u). With an exact
  // factor this is the plain Picard step; with the computed factor the fixed
  // point still satisfies the discrete equation to round-off.
  std::vector<std::size_t> active(w);
  for (std::size_t j = 0; j < w; ++j) active[j] = j;
  std::vector<complex> current, work;

  for (int it = 1; it <= options.max_iter && !active.empty(); ++it) {
    const std::size_t a = active.size();
    current.resize(rows * a);
    work.resize(rows * a);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t k = 0; k < a; ++k) {
        current[r * a + k] = out.solution[r * w + active[k]];
        work[r * a + k] = boundary_rhs[r * w + active[k]];
      }
    for (std::size_t s = 0; s < c.rows.size(); ++s) {
      const std::size_t r = c.rows[s];
      for (std::size_t k = 0; k < a; ++k)
        work[r * a + k] += c.values[s] * int_pow(current[r * a + k], m);
    }
    op.subtract_product(current, work, static_cast<int>(a));
    op.solve_block(work, static_cast<int>(a));

    // Squared magnitudes avoid a hypot per entry; sqrt is taken once per column.
    std::vector<double> diff2(a, 0.0), size2(a, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      complex* sol = out.solution.data() + r * w;
      const complex* step = work.data() + r * a;
      for (std::size_t k = 0; k < a; ++k) {
        complex& prev = sol[active[k]];
        diff2[k] = std::max(diff2[k], std::norm(step[k]));
        size2[k] = std::max(size2[k], std::norm(prev));
        prev += step[k];
      }
    }
    std::vector<std::size_t> still;
    for (std::size_t k = 0; k < a; ++k) {
      const std::size_t j = active[k];
      const double diff = std::sqrt(diff2[k]);
      const double size = std::sqrt(size2[k]);
      const double rel = diff / (1.0 + size);
      SolveReport& rep = out.reports[j];
      rep.iterations = it;
      rep.final_residual = rel;
      if (!std::isfinite(diff) || diff > kDivergence) {
        rep.converged = false;
      } else if (diff <= options.tol * (1.0 + size)) {
        rep.converged = true;
      } else {
        still.push_back(j);
      }
    }
    active.swap(still);
  }
  return out;
}

ComplexField solve_helmholtz(const Grid& grid, const DomainMask& mask, double k,
                             const ComplexField& dirichlet, const ComplexField& source) {
  return HelmholtzOperator(grid, mask, k).solve(dirichlet, source);
}

std::pair<ComplexField, SolveReport> solve_nonlinear(const HelmholtzOperator& op, int m,
                                                     const ComplexField& c,
                                                     const ComplexField& dirichlet,
                                                     const PicardOptions& options) {
  if (m < 2) throw std::invalid_argument("nonlinearity index must be at least 2");
  if (!(dirichlet.grid == op.grid())) throw std::invalid_argument("Dirichlet grid mismatch");
  if (!dirichlet.all_finite()) throw NonFinite("non-finite Dirichlet data");
  const PotentialSupport support = PotentialSupport::from_field(op, c);

  std::vector<complex> rhs(op.unknowns(), 0.0);
  op.add_dirichlet_rhs(op.boundary_values(dirichlet), rhs, 1, 0);
  PicardBlock block = picard_block(op, m, support, std::move(rhs), 1, options);

  const SolveReport report = block.reports[0];
  if (!report.converged)
    throw NoConvergence("Picard iteration did not converge after " +
                            std::to_string(report.iterations) + " iterations (residual " +
                            std::to_string(report.final_residual) + ")",
                        report.iterations, report.final_residual);

  ComplexField u = dirichlet;
  const auto rows = op.row_to_node();
  for (std::size_t r = 0; r < rows.size(); ++r) u[rows[r]] = block.solution[r];
  return {std::move(u), report};
}

std::pair<ComplexField, SolveReport> solve_nonlinear(const Grid& grid, const DomainMask& mask,
                                                     double k, int m, const ComplexField& c,
                                                     const ComplexField& dirichlet, double tol,
                                                     int max_iter) {
  return solve_nonlinear(HelmholtzOperator(grid, mask, k), m, c, dirichlet,
                         PicardOptions{tol, max_iter});
}

ComplexField nonlinear_residual(const HelmholtzOperator& op, int m, const ComplexField& c,
                                const ComplexField& u, const ComplexField& dirichlet) {
  ComplexField source(op.grid());
  for (std::size_t i = 0; i < source.values.size(); ++i)
    if (op.mask().is_interior(i)) source[i] = c[i] * int_pow(u[i], m);
  return op.residual(u, op.boundary_values(dirichlet), source);
}

}  // namespace invlab
