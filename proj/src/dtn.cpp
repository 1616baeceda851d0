#include "invlab/dtn.hpp"

#include <string>

#include "invlab/errors.hpp"

namespace invlab {

ForwardSetup make_forward_setup(int n_per_axis, double radius, int n_samples,
                                double half_width) {
  Grid grid = build_grid(n_per_axis, half_width);
  DomainMask mask = disk_mask(grid, radius);
  BoundaryGeometry boundary = boundary_circle(n_samples > 0 ? n_samples : 4 * n_per_axis, radius);
  return {std::move(grid), std::move(mask), std::move(boundary)};
}

complex PlaneWaveDatum::operator()(Vec2 x) const {
  complex acc = 0.0;
  for (const auto& [a, zeta] : terms) acc += a * plane_wave(zeta, x);
  return acc;
}

PlaneWaveDatum PlaneWaveDatum::scaled(complex s) const {
  PlaneWaveDatum out = *this;
  for (auto& term : out.terms) term.first *= s;
  return out;
}

bool PlaneWaveDatum::is_zero() const {
  for (const auto& term : terms)
    if (term.first != complex(0.0)) return false;
  return true;
}

ComplexField PlaneWaveDatum::on_grid(const Grid& grid) const {
  return sample_field(grid, [this](Vec2 x) { return (*this)(x); });
}

double BoundaryTrace::sup_norm() const {
  double m = 0.0;
  for (auto v : values) m = std::max(m, std::abs(v));
  return m;
}

BoundaryTrace operator-(const BoundaryTrace& a, const BoundaryTrace& b) {
  if (a.values.size() != b.values.size()) throw std::invalid_argument("trace size mismatch");
  BoundaryTrace out{a.kind, a.values};
  for (std::size_t t = 0; t < out.values.size(); ++t) out.values[t] -= b.values[t];
  return out;
}

DtnMap::DtnMap(const ForwardSetup& setup, double k, int m, const ComplexField& c,
               const PicardOptions& options)
    : setup_(setup),
      m_(m),
      c_(c),
      options_(options),
      op_(setup.grid, setup.mask, k),
      trace_(setup.grid, setup.mask, setup.boundary),
      support_(PotentialSupport::from_field(op_, c)) {
  if (m < 2) throw std::invalid_argument("nonlinearity index must be at least 2");
  const auto node_row = op_.node_to_row();
  for (std::size_t t = 0; t < trace_.samples(); ++t)
    for (auto node : trace_.stencil_nodes(t))
      if (node_row[node] < 0)
        throw std::invalid_argument("trace stencil uses a node outside the solver mask");
}

std::vector<DtnMap::Measurement> DtnMap::measure(std::span<const PlaneWaveDatum> data) const {
  const int width = static_cast<int>(data.size());
  std::vector<Measurement> out(data.size());
  if (data.empty()) return out;

  const auto couplings = op_.dirichlet_couplings();
  std::vector<complex> rhs(op_.unknowns() * data.size(), 0.0);
  std::vector<complex> values(couplings.size());
  for (int col = 0; col < width; ++col) {
    for (std::size_t j = 0; j < couplings.size(); ++j) {
      values[j] = data[col](couplings[j].point);
      if (!std::isfinite(values[j].real()) || !std::isfinite(values[j].imag()))
        throw NonFinite("Dirichlet datum overflows on the boundary");
    }
    op_.add_dirichlet_rhs(values, rhs, width, col);
  }

  const PicardBlock block = picard_block(op_, m_, support_, std::move(rhs), width, options_);
  const auto node_row = op_.node_to_row();
  const std::size_t samples = trace_.samples();
  for (int col = 0; col < width; ++col) {
    Measurement& meas = out[col];
    meas.report = block.reports[col];
    meas.neumann.values.resize(samples);
    meas.linear_neumann.values.resize(samples);
    trace_.apply_rows(block.solution, width, col, node_row, meas.neumann.values);
    trace_.apply_rows(block.linear, width, col, node_row, meas.linear_neumann.values);
  }
  return out;
}

namespace {

void require_converged(const SolveReport& r) {
  if (!r.converged)
    throw NoConvergence("Picard iteration did not converge after " +
                            std::to_string(r.iterations) + " iterations",
                        r.iterations, r.final_residual);
}

}  // namespace

BoundaryTrace DtnMap::apply(const PlaneWaveDatum& g0) const {
  if (g0.is_zero()) return {BoundaryTrace::Kind::neumann, std::vector<complex>(trace_.samples())};
  auto meas = measure(std::span(&g0, 1));
  require_converged(meas[0].report);
  return std::move(meas[0].neumann);
}

BoundaryTrace DtnMap::linearized(const PlaneWaveDatum& g0) const {
  if (g0.is_zero()) return {BoundaryTrace::Kind::neumann, std::vector<complex>(trace_.samples())};
  auto meas = measure(std::span(&g0, 1));
  require_converged(meas[0].report);
  return meas[0].neumann - meas[0].linear_neumann;
}

FrechetStencil frechet_stencil(std::span<const PlaneWaveDatum> f, std::span<const double> eps) {
  if (f.size() != eps.size()) throw std::invalid_argument("one eps per direction");
  for (double e : eps)
    if (!(e > 0.0)) throw std::invalid_argument("Frechet steps must be positive");
  FrechetStencil s;
  if (f.size() == 2) {
    const PlaneWaveDatum a = f[0].scaled(eps[0]);
    const PlaneWaveDatum b = f[1].scaled(eps[1]);
    s.data = {a + b, b, a};
    s.signs = {1.0, -1.0, -1.0};
    s.scale = 1.0 / (eps[0] * eps[1]);
  } else if (f.size() == 3) {
    const PlaneWaveDatum a = f[0].scaled(eps[0]);
    const PlaneWaveDatum b = f[1].scaled(eps[1]);
    const PlaneWaveDatum c = f[2].scaled(eps[2]);
    s.data = {a + b + c, a + b, a + c, b + c, c, b, a};
    s.signs = {1.0, -1.0, -1.0, -1.0, 1.0, 1.0, 1.0};
    s.scale = 1.0 / (eps[0] * eps[1] * eps[2]);
  } else {
    throw UnsupportedM("Frechet differences are implemented for m = 2 and m = 3 only, got m = " +
                       std::to_string(f.size()));
  }
  return s;
}

BoundaryTrace frechet_combine(const FrechetStencil& stencil,
                              std::span<const BoundaryTrace> lambda_values) {
  if (lambda_values.size() != stencil.data.size())
    throw std::invalid_argument("frechet_combine: one trace per stencil term");
  const std::size_t n = lambda_values.front().values.size();
  BoundaryTrace out{BoundaryTrace::Kind::neumann, std::vector<complex>(n, 0.0)};
  for (std::size_t term = 0; term < lambda_values.size(); ++term)
    for (std::size_t t = 0; t < n; ++t)
      out.values[t] += stencil.signs[term] * lambda_values[term].values[t];
  for (auto& v : out.values) v *= stencil.scale;
  return out;
}

namespace {

BoundaryTrace frechet(const DtnMap& map, std::span<const PlaneWaveDatum> f,
                      std::span<const double> eps) {
  const FrechetStencil stencil = frechet_stencil(f, eps);
  auto meas = map.measure(stencil.data);
  std::vector<BoundaryTrace> lambda;
  lambda.reserve(meas.size());
  for (auto& m : meas) {
    require_converged(m.report);
    lambda.push_back(std::move(m.neumann));
  }
  return frechet_combine(stencil, lambda);
}

}  // namespace

BoundaryTrace DtnMap::frechet_m2(const PlaneWaveDatum& f1, const PlaneWaveDatum& f2,
                                 double eps1, double eps2) const {
  const PlaneWaveDatum f[] = {f1, f2};
  const double eps[] = {eps1, eps2};
  return frechet(*this, f, eps);
}

BoundaryTrace DtnMap::frechet_m3(const PlaneWaveDatum& f1, const PlaneWaveDatum& f2,
                                 const PlaneWaveDatum& f3, double eps1, double eps2,
                                 double eps3) const {
  const PlaneWaveDatum f[] = {f1, f2, f3};
  const double eps[] = {eps1, eps2, eps3};
  return frechet(*this, f, eps);
}

BoundaryTrace dtn_apply(const ForwardSetup& setup, double k, int m, const ComplexField& c,
                        const PlaneWaveDatum& g0) {
  return DtnMap(setup, k, m, c).apply(g0);
}

BoundaryTrace linearized_data(const ForwardSetup& setup, double k, int m,
                              const ComplexField& c, const PlaneWaveDatum& g0) {
  return DtnMap(setup, k, m, c).linearized(g0);
}

BoundaryTrace frechet_data_m2(const ForwardSetup& setup, double k, const ComplexField& c,
                              const PlaneWaveDatum& f1, const PlaneWaveDatum& f2, double eps1,
                              double eps2) {
  return DtnMap(setup, k, 2, c).frechet_m2(f1, f2, eps1, eps2);
}

BoundaryTrace frechet_data_m3(const ForwardSetup& setup, double k, const ComplexField& c,
                              const PlaneWaveDatum& f1, const PlaneWaveDatum& f2,
                              const PlaneWaveDatum& f3, double eps1, double eps2,
                              double eps3) {
  return DtnMap(setup, k, 3, c).frechet_m3(f1, f2, f3, eps1, eps2, eps3);
}

}  // namespace invlab
