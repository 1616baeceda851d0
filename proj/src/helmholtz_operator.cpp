#include "invlab/helmholtz_operator.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <string>
#include <type_traits>

#include "invlab/errors.hpp"

namespace invlab {
namespace {

// Relative size of the smallest eigenvalue, against the spectral radius, below
// which the discrete problem is treated as resonant.
constexpr double kResonanceRatio = 1e-10;

// Shortest stencil arm, in spacings, used for a boundary crossing.
constexpr double kMinArm = 1e-3;

// Sparse triangular sweeps over a tile of W doubles per row. Both use the
// gather form y_i -= sum_j L_ij y_j with a register accumulator; the order of
// the terms is fixed by the factor, never by the tile width.
template <int W>
void lower_sweep(std::size_t rows, const std::int32_t* ptr, const std::int32_t* idx,
                 const double* val, double* y, std::size_t stride) {
  for (std::size_t i = 0; i < rows; ++i) {
    double acc[W];
    double* yi = y + i * stride;
    for (int c = 0; c < W; ++c) acc[c] = yi[c];
    for (std::int32_t p = ptr[i]; p < ptr[i + 1]; ++p) {
      const double v = val[p];
      const double* yj = y + static_cast<std::size_t>(idx[p]) * stride;
#pragma omp simd
      for (int c = 0; c < W; ++c) acc[c] -= v * yj[c];
    }
    for (int c = 0; c < W; ++c) yi[c] = acc[c];
  }
}

template <int W>
void upper_sweep(std::size_t rows, const std::int32_t* ptr, const std::int32_t* idx,
                 const double* val, double* y, std::size_t stride) {
  for (std::size_t j = rows; j-- > 0;) {
    double acc[W];
    double* yj = y + j * stride;
    for (int c = 0; c < W; ++c) acc[c] = yj[c];
    for (std::int32_t p = ptr[j]; p < ptr[j + 1]; ++p) {
      const double v = val[p];
      const double* yi = y + static_cast<std::size_t>(idx[p]) * stride;
#pragma omp simd
      for (int c = 0; c < W; ++c) acc[c] -= v * yi[c];
    }
    for (int c = 0; c < W; ++c) yj[c] = acc[c];
  }
}

template <int W>
void sweep_pair(std::size_t rows, const std::int32_t* row_ptr, const std::int32_t* row_idx,
                const double* row_val, const std::int32_t* col_ptr,
                const std::int32_t* col_idx, const double* col_val, const double* d_inv,
                double* y, std::size_t stride) {
  lower_sweep<W>(rows, row_ptr, row_idx, row_val, y, stride);
  for (std::size_t j = 0; j < rows; ++j) {
    const double d = d_inv[j];
    for (int c = 0; c < W; ++c) y[j * stride + c] *= d;
  }
  upper_sweep<W>(rows, col_ptr, col_idx, col_val, y, stride);
}

}  // namespace

HelmholtzOperator::HelmholtzOperator(const Grid& grid, const DomainMask& mask, double k)
    : grid_(grid), mask_(mask), k_(k) {
  if (!(k > 0.0) || !std::isfinite(k))
    throw std::invalid_argument("wavenumber must be positive and finite");
  if (mask.interior.size() != grid.size())
    throw std::invalid_argument("mask does not match grid");

  const int n = grid.n();
  node_row_.assign(grid.size(), -1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!mask.is_interior(i)) continue;
    const int p = static_cast<int>(i % n);
    const int q = static_cast<int>(i / n);
    if (p == 0 || q == 0 || p == n - 1 || q == n - 1)
      throw std::invalid_argument("interior node on the grid edge; shrink the disk");
    node_row_[i] = static_cast<std::int32_t>(unknown_node_.size());
    unknown_node_.push_back(static_cast<std::int32_t>(i));
  }
  if (unknown_node_.empty()) throw std::invalid_argument("mask has no interior nodes");

  const double h = grid.spacing();
  const double radius = mask.radius;
  const std::ptrdiff_t step[4] = {1, -1, n, -n};
  const Vec2 dir[4] = {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
  for (std::size_t r = 0; r < unknown_node_.size(); ++r) {
    const std::size_t i = unknown_node_[r];
    const Vec2 x = grid.node(i);
    for (int d = 0; d < 4; ++d) {
      const std::size_t j = i + step[d];
      if (node_row_[j] >= 0) continue;
      // |x + t h dir| = radius, positive root; clamped against rounding and
      // against arms that graze the circle right next to the node.
      const double b = dot(x, dir[d]);
      const double t = (-b + std::sqrt(b * b + (radius * radius - dot(x, x)))) / h;
      const double theta = std::clamp(t, kMinArm, 1.0);
      couplings_.push_back({static_cast<std::int32_t>(r), static_cast<std::int32_t>(j), theta,
                            x + (theta * h) * dir[d]});
    }
  }

  factor();
  estimate_conditioning();
}

void HelmholtzOperator::factor() {
  const int n = grid_.n();
  const double h2 = 1.0 / (grid_.spacing() * grid_.spacing());
  const auto rows = static_cast<Eigen::Index>(unknowns());

  diag_.assign(unknowns(), k_ * k_);
  neighbours_.assign(unknowns(), {-1, -1, -1, -1});
  for (std::size_t r = 0; r < unknowns(); ++r) {
    const std::size_t i = unknown_node_[r];
    const std::size_t nb[4] = {i + 1, i - 1, i + n, i - n};
    for (int d = 0; d < 4; ++d)
      if (node_row_[nb[d]] >= 0) {
        neighbours_[r][d] = node_row_[nb[d]];
        diag_[r] -= h2;
      }
  }
  // Ghost arm (g - u_i) / (theta h^2): only its u_i part stays in the matrix.
  for (const auto& c : couplings_) diag_[c.row] -= h2 / c.theta;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(unknowns() * 5);
  for (std::size_t r = 0; r < unknowns(); ++r) {
    trip.emplace_back(r, r, diag_[r]);
    for (std::int32_t j : neighbours_[r])
      if (j >= 0) trip.emplace_back(r, j, h2);
  }
  Eigen::SparseMatrix<double> a(rows, rows);
  a.setFromTriplets(trip.begin(), trip.end());
  a.makeCompressed();

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower,
                        Eigen::AMDOrdering<int>>
      ldlt(a);
  if (ldlt.info() != Eigen::Success)
    throw NearResonance("LDL^T factorization failed at k = " + std::to_string(k_));

  const auto& l = ldlt.matrixL().nestedExpression();
  l_outer_.assign(l.outerIndexPtr(), l.outerIndexPtr() + rows + 1);
  l_inner_.assign(l.innerIndexPtr(), l.innerIndexPtr() + l.nonZeros());
  l_values_.assign(l.valuePtr(), l.valuePtr() + l.nonZeros());

  // Row-wise copy of the same factor for the forward sweep.
  lr_outer_.assign(rows + 1, 0);
  for (std::int32_t idx : l_inner_) ++lr_outer_[idx + 1];
  for (Eigen::Index r = 0; r < rows; ++r) lr_outer_[r + 1] += lr_outer_[r];
  lr_inner_.resize(l_inner_.size());
  lr_values_.resize(l_values_.size());
  std::vector<std::int32_t> fill(lr_outer_.begin(), lr_outer_.end() - 1);
  for (Eigen::Index col = 0; col < rows; ++col)
    for (std::int32_t p = l_outer_[col]; p < l_outer_[col + 1]; ++p) {
      const std::int32_t slot = fill[l_inner_[p]]++;
      lr_inner_[slot] = static_cast<std::int32_t>(col);
      lr_values_[slot] = l_values_[p];
    }

  const auto& d = ldlt.vectorD();
  const double scale = 8.0 * h2;
  d_inv_.resize(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!std::isfinite(d[r]) || std::abs(d[r]) <= 1e-14 * scale)
      throw NearResonance("zero pivot in LDL^T factorization at k = " + std::to_string(k_));
    d_inv_[r] = 1.0 / d[r];
  }
  const auto& pi = ldlt.permutationP().indices();
  perm_.assign(pi.data(), pi.data() + rows);
}

void HelmholtzOperator::estimate_conditioning() {
  // A few steps of inverse iteration from a fixed pseudo-random start.
  const std::size_t rows = unknowns();
  std::vector<complex> x(rows);
  std::uint64_t state = 0x9E3779B97F4A7C15ull;
  for (auto& v : x) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    v = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
  }
  double growth = 0.0;
  for (int it = 0; it < 6; ++it) {
    double before = 0.0;
    for (auto v : x) before += std::norm(v);
    solve_block(x, 1);
    double after = 0.0;
    for (auto v : x) after += std::norm(v);
    if (!std::isfinite(after))
      throw NearResonance("non-finite inverse iterate at k = " + std::to_string(k_));
    growth = std::sqrt(after / before);
    const double inv = 1.0 / std::sqrt(after);
    for (auto& v : x) v *= inv;
  }
  lambda_min_ = 1.0 / growth;
  const double h = grid_.spacing();
  const double spectral_radius = 8.0 / (h * h) + k_ * k_;
  if (lambda_min_ < kResonanceRatio * spectral_radius)
    throw NearResonance("k^2 = " + std::to_string(k_ * k_) +
                        " is within round-off of a discrete Dirichlet eigenvalue");
}

void HelmholtzOperator::solve_block(std::span<complex> block, int width) const {
  const std::size_t rows = unknowns();
  if (width < 1 || block.size() != rows * static_cast<std::size_t>(width))
    throw std::invalid_argument("solve_block: block shape mismatch");

  // Complex entries are handled as interleaved doubles; every lane sees the
  // same sequence of operations regardless of width.
  const std::size_t w2 = 2 * static_cast<std::size_t>(width);
  thread_local std::vector<double> work;
  work.resize(rows * w2);
  double* y = work.data();
  const double* b = reinterpret_cast<const double*>(block.data());

  for (std::size_t i = 0; i < rows; ++i)
    std::copy_n(b + i * w2, w2, y + static_cast<std::size_t>(perm_[i]) * w2);

  // Tiles of 8, 4, 2 or 1 complex columns; wider accumulators spill.
  std::size_t lane = 0;
  while (lane < w2) {
    const std::size_t left = w2 - lane;
    double* yt = y + lane;
    auto run = [&](auto tag) {
      constexpr int W = decltype(tag)::value;
      sweep_pair<W>(rows, lr_outer_.data(), lr_inner_.data(), lr_values_.data(),
                    l_outer_.data(), l_inner_.data(), l_values_.data(), d_inv_.data(), yt, w2);
      lane += W;
    };
    if (left >= 16) run(std::integral_constant<int, 16>{});
    else if (left >= 8) run(std::integral_constant<int, 8>{});
    else if (left >= 4) run(std::integral_constant<int, 4>{});
    else run(std::integral_constant<int, 2>{});
  }

  double* out = reinterpret_cast<double*>(block.data());
  for (std::size_t i = 0; i < rows; ++i)
    std::copy_n(y + static_cast<std::size_t>(perm_[i]) * w2, w2, out + i * w2);
}

void HelmholtzOperator::subtract_product(std::span<const complex> x, std::span<complex> out,
                                         int width) const {
  const std::size_t rows = unknowns();
  const auto w = static_cast<std::size_t>(width);
  if (width < 1 || x.size() != rows * w || out.size() != rows * w)
    throw std::invalid_argument("subtract_product: block shape mismatch");
  const double h2 = 1.0 / (grid_.spacing() * grid_.spacing());
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& nb = neighbours_[r];
    for (std::size_t c = 0; c < w; ++c) {
      complex off = 0.0;
      for (std::int32_t j : nb)
        if (j >= 0) off += x[static_cast<std::size_t>(j) * w + c];
      out[r * w + c] -= diag_[r] * x[r * w + c] + h2 * off;
    }
  }
}

void HelmholtzOperator::solve_refined(std::span<complex> block, int width) const {
  std::vector<complex> correction(block.begin(), block.end());
  solve_block(block, width);
  subtract_product(block, correction, width);
  solve_block(correction, width);
  for (std::size_t j = 0; j < block.size(); ++j) block[j] += correction[j];
}

std::vector<complex> HelmholtzOperator::boundary_values(const ComplexField& dirichlet) const {
  if (!(dirichlet.grid == grid_)) throw std::invalid_argument("Dirichlet grid mismatch");
  std::vector<complex> out(couplings_.size());
  for (std::size_t j = 0; j < couplings_.size(); ++j) {
    const Coupling& c = couplings_[j];
    const complex inner = dirichlet[unknown_node_[c.row]];
    out[j] = (1.0 - c.theta) * inner + c.theta * dirichlet[c.node];
  }
  return out;
}

void HelmholtzOperator::add_dirichlet_rhs(std::span<const complex> boundary_values,
                                          std::span<complex> block, int width,
                                          int col) const {
  if (boundary_values.size() != couplings_.size())
    throw std::invalid_argument("one boundary value per coupling expected");
  const double h2 = 1.0 / (grid_.spacing() * grid_.spacing());
  for (std::size_t j = 0; j < couplings_.size(); ++j) {
    const Coupling& c = couplings_[j];
    block[static_cast<std::size_t>(c.row) * width + col] -= (h2 / c.theta) * boundary_values[j];
  }
}

ComplexField HelmholtzOperator::solve(const ComplexField& dirichlet,
                                      const ComplexField& source) const {
  if (!(dirichlet.grid == grid_) || !(source.grid == grid_))
    throw std::invalid_argument("solve: field grids differ from operator grid");
  if (!dirichlet.all_finite() || !source.all_finite())
    throw NonFinite("non-finite Dirichlet data or source");

  std::vector<complex> rhs(unknowns());
  for (std::size_t r = 0; r < unknowns(); ++r) rhs[r] = source[unknown_node_[r]];
  add_dirichlet_rhs(boundary_values(dirichlet), rhs, 1, 0);
  solve_refined(rhs, 1);

  ComplexField u = dirichlet;
  for (std::size_t r = 0; r < unknowns(); ++r) u[unknown_node_[r]] = rhs[r];
  if (!u.all_finite()) throw NonFinite("Helmholtz solve produced non-finite values");
  return u;
}

ComplexField HelmholtzOperator::residual(const ComplexField& u,
                                         std::span<const complex> boundary_values,
                                         const ComplexField& source) const {
  if (boundary_values.size() != couplings_.size())
    throw std::invalid_argument("one boundary value per coupling expected");
  const int n = grid_.n();
  const double h2 = 1.0 / (grid_.spacing() * grid_.spacing());
  ComplexField r(grid_);
  for (std::size_t i : unknown_node_) {
    complex lap = 0.0;
    for (std::size_t j : {i + 1, i - 1, i + n, i - n})
      if (node_row_[j] >= 0) lap += u[j] - u[i];
    r[i] = lap * h2 + k_ * k_ * u[i] - source[i];
  }
  for (std::size_t j = 0; j < couplings_.size(); ++j) {
    const Coupling& c = couplings_[j];
    const std::size_t i = unknown_node_[c.row];
    r[i] += (boundary_values[j] - u[i]) * (h2 / c.theta);
  }
  return r;
}

}  // namespace invlab
