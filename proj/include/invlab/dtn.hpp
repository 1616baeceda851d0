#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "invlab/forward.hpp"
#include "invlab/probes.hpp"

namespace invlab {

/// Fine-grid discretization shared by every forward solve of a run.
struct ForwardSetup {
  Grid grid;
  DomainMask mask;
  BoundaryGeometry boundary;
};

/// Square of half width 0.5 (unless given) holding the disk of `radius`;
/// boundary sampled at `n_samples` points, default 4 * n_per_axis.
ForwardSetup make_forward_setup(int n_per_axis, double radius = 0.5, int n_samples = 0,
                                double half_width = 0.5);

/// Dirichlet datum given as a finite sum of plane waves a_j exp(i zeta_j . x);
/// it is evaluated analytically wherever the solver needs exterior values.
struct PlaneWaveDatum {
  std::vector<std::pair<complex, CVec2>> terms;

  static PlaneWaveDatum wave(CVec2 zeta, complex amplitude = 1.0) {
    return {{{amplitude, zeta}}};
  }
  complex operator()(Vec2 x) const;
  PlaneWaveDatum scaled(complex s) const;
  bool is_zero() const;
  ComplexField on_grid(const Grid& grid) const;

  friend PlaneWaveDatum operator+(PlaneWaveDatum a, const PlaneWaveDatum& b) {
    a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
    return a;
  }
};

struct BoundaryTrace {
  enum class Kind { dirichlet, neumann };
  Kind kind = Kind::neumann;
  std::vector<complex> values;

  double sup_norm() const;
};

BoundaryTrace operator-(const BoundaryTrace& a, const BoundaryTrace& b);

struct NoiseSpec {
  double delta = 0.0;
  std::uint64_t seed = 0;
};

/// Additive noise, independent per sample and uniform on the complex disk of
/// radius delta * ||trace||_inf. Deterministic in the seed.
BoundaryTrace add_noise(const BoundaryTrace& trace, const NoiseSpec& spec);

/// Mixes extra integers into a seed (splitmix64 finalizer per step).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

/// Nonlinear Dirichlet-to-Neumann map for fixed (k, m, c) on a ForwardSetup.
/// Owns the factored Helmholtz operator, so every datum costs only triangular
/// solves.
class DtnMap {
 public:
  DtnMap(const ForwardSetup& setup, double k, int m, const ComplexField& c,
         const PicardOptions& options = {});

  double k() const { return op_.k(); }
  int m() const { return m_; }
  const ForwardSetup& setup() const { return setup_; }
  const HelmholtzOperator& op() const { return op_; }
  const ComplexField& potential() const { return c_; }
  const PicardOptions& options() const { return options_; }

  struct Measurement {
    BoundaryTrace neumann;         // d_nu u for the nonlinear solution
    BoundaryTrace linear_neumann;  // d_nu u0 for the same datum with c = 0
    SolveReport report;
  };

  /// Solves every datum in one block. Non-converged data are reported through
  /// Measurement::report, not thrown.
  std::vector<Measurement> measure(std::span<const PlaneWaveDatum> data) const;

  /// Lambda_c(g0). Lambda_c(0) = 0 without a solve.
  BoundaryTrace apply(const PlaneWaveDatum& g0) const;
  /// d_nu u - d_nu u0: the measurable stand-in for Lambda'_c g0.
  BoundaryTrace linearized(const PlaneWaveDatum& g0) const;

  BoundaryTrace frechet_m2(const PlaneWaveDatum& f1, const PlaneWaveDatum& f2, double eps1,
                           double eps2) const;
  BoundaryTrace frechet_m3(const PlaneWaveDatum& f1, const PlaneWaveDatum& f2,
                           const PlaneWaveDatum& f3, double eps1, double eps2,
                           double eps3) const;

 private:
  ForwardSetup setup_;
  int m_;
  ComplexField c_;
  PicardOptions options_;
  HelmholtzOperator op_;
  NeumannTraceOperator trace_;
  PotentialSupport support_;
};

/// Terms of the mixed finite difference approximating D^m_0 Lambda_c(f_1..f_m)
/// for m = 2, 3: data eps-combinations with their signs (Lambda_c(0) = 0 is
/// dropped).
struct FrechetStencil {
  std::vector<PlaneWaveDatum> data;
  std::vector<double> signs;
  double scale = 1.0;  // 1 / (eps_1 ... eps_m)
};

FrechetStencil frechet_stencil(std::span<const PlaneWaveDatum> f, std::span<const double> eps);

/// Applies the stencil to Lambda_c values, in the stencil's term order.
BoundaryTrace frechet_combine(const FrechetStencil& stencil,
                              std::span<const BoundaryTrace> lambda_values);

// Convenience entry points that build a DtnMap per call.
BoundaryTrace dtn_apply(const ForwardSetup& setup, double k, int m, const ComplexField& c,
                        const PlaneWaveDatum& g0);
BoundaryTrace linearized_data(const ForwardSetup& setup, double k, int m,
                              const ComplexField& c, const PlaneWaveDatum& g0);
BoundaryTrace frechet_data_m2(const ForwardSetup& setup, double k, const ComplexField& c,
                              const PlaneWaveDatum& f1, const PlaneWaveDatum& f2, double eps1,
                              double eps2);
BoundaryTrace frechet_data_m3(const ForwardSetup& setup, double k, const ComplexField& c,
                              const PlaneWaveDatum& f1, const PlaneWaveDatum& f2,
                              const PlaneWaveDatum& f3, double eps1, double eps2, double eps3);

}  // namespace invlab
