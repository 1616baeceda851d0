#include "selftest.hpp"

#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "invlab/dtn.hpp"
#include "invlab/errors.hpp"
#include "invlab/harness.hpp"

namespace invlab::cli {
namespace {

bool probe_algebra() {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int draw = 0; draw < 200; ++draw) {
    const double k = 1.0 + 19.0 * unit(gen);
    const int m = 2 + draw % 5;
    const double angle = 2.0 * pi * unit(gen);
    const double r = (m - 1) * k + 2.0 * k * unit(gen);
    const Vec2 xi{r * std::cos(angle), r * std::sin(angle)};
    for (const ProbeSet& p : {frechet_probe(k, xi, m), mu_probe(k, xi, m)}) {
      for (const CVec2& z : p.vectors)
        if (std::abs(bilinear_dot(z, z) - k * k) > 1e-10 * k * k) return false;
      const CVec2 sum = p.weighted_sum();
      if (std::abs(sum.z1 - xi.x1) + std::abs(sum.z2 - xi.x2) > 1e-10 * (1.0 + r)) return false;
    }
  }
  return true;
}

bool boundary_quadrature() {
  const BoundaryGeometry b = boundary_circle(256, 0.5);
  double total = 0.0;
  complex mode = 0.0;
  for (std::size_t t = 0; t < b.size(); ++t) {
    total += b.weights[t];
    mode += b.weights[t] * std::polar(1.0, b.theta[t]);
  }
  return std::abs(total - pi) <= 1e-12 * pi && std::abs(mode) <= 1e-12;
}

bool plane_wave_solve() {
  const ForwardSetup setup = make_forward_setup(80);
  const double k = 5.0;
  const CVec2 zeta{k * 0.6, k * 0.8};
  const DtnMap map(setup, k, 2, ComplexField(setup.grid));
  const BoundaryTrace g = map.apply(PlaneWaveDatum::wave(zeta));
  double err = 0.0, ref = 0.0;
  for (std::size_t t = 0; t < setup.boundary.size(); ++t) {
    const complex exact = complex(0.0, 1.0) * bilinear_dot(zeta, setup.boundary.normals[t]) *
                          plane_wave(zeta, setup.boundary.points[t]);
    err = std::max(err, std::abs(g.values[t] - exact));
    ref = std::max(ref, std::abs(exact));
  }
  return err <= 0.1 * ref;
}

bool noise_bound() {
  BoundaryTrace t{BoundaryTrace::Kind::neumann, std::vector<complex>(64, complex(1.0, -2.0))};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const BoundaryTrace n = add_noise(t, {0.1, seed});
    if ((n - t).sup_norm() > 0.1 * t.sup_norm()) return false;
  }
  return true;
}

bool schedule_tiling() {
  const WavenumberSchedule s = make_schedule(1.25, 10.0, 3);
  return s.k == std::vector<double>{1.25, 2.5, 5.0, 10.0};
}

bool nonlinear_residual_small() {
  const ForwardSetup setup = make_forward_setup(60);
  const ComplexField c = preset_potential(Preset::bump, 0.1, setup.grid, setup.mask);
  const HelmholtzOperator op(setup.grid, setup.mask, 6.0);
  const ComplexField g = PlaneWaveDatum::wave({6.0, 0.0}).on_grid(setup.grid);
  const auto [u, report] = solve_nonlinear(op, 2, c, g);
  const ComplexField res = nonlinear_residual(op, 2, c, u, g);
  return report.converged && res.max_abs() <= 1e-8 * (1.0 + u.max_abs());
}

}  // namespace

int run_selftest() {
  const std::pair<const char*, std::function<bool()>> checks[] = {
      {"probe algebra", probe_algebra},
      {"boundary quadrature", boundary_quadrature},
      {"plane-wave Neumann trace", plane_wave_solve},
      {"noise bound", noise_bound},
      {"wavenumber schedule", schedule_tiling},
      {"nonlinear residual", nonlinear_residual_small},
  };
  int failures = 0;
  for (const auto& [name, check] : checks) {
    bool ok = false;
    try {
      ok = check();
    } catch (const std::exception& e) {
      std::printf("  (%s threw: %s)\n", name, e.what());
    }
    std::printf("%s %s\n", ok ? "PASS" : "FAIL", name);
    failures += !ok;
  }
  return failures;
}

}  // namespace invlab::cli
