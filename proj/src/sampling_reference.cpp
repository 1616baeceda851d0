#include "invlab/errors.hpp"
#include "invlab/reconstruct.hpp"
#include "sampling_detail.hpp"

namespace invlab {
namespace detail {

FourierRecord blank_record(const DtnMap& map, Algorithm a, const FrequencyGrid& grid, int i,
                           int s) {
  FourierRecord r;
  r.i = i;
  r.s = s;
  r.kappa = grid.kappa[i];
  r.theta = grid.theta[s];
  r.xi = grid.xi(i, s);
  r.sigma = grid.weight(i);
  r.algorithm = a;
  r.k = map.k();
  r.retained = retained_by(a, map.k(), map.m(), r.kappa);
  return r;
}

namespace {

BoundaryTrace measured_linearized(const DtnMap::Measurement& meas, const NoiseSpec& noise,
                                  std::uint64_t role) {
  return add_noise(meas.neumann - meas.linear_neumann,
                   {noise.delta, derive_seed(noise.seed, role)});
}

complex pair_with(const DtnMap& map, std::span<const complex> g, CVec2 test_vector) {
  const BoundaryGeometry& b = map.setup().boundary;
  complex acc = 0.0;
  for (std::size_t t = 0; t < b.size(); ++t)
    acc += b.weights[t] * g[t] * plane_wave(test_vector, b.points[t]);
  return acc;
}

}  // namespace

SamplePlan plan_sample(const DtnMap& map, Algorithm a, Vec2 xi, double eps) {
  const double k = map.k();
  const int m = map.m();
  const double r = norm(xi);
  SamplePlan plan{a, {}, {}, {}};
  switch (a) {
    case Algorithm::alg1: {
      if (m != 2) throw std::invalid_argument("Algorithm 1 needs m = 2");
      if (!retained_by(a, k, m, r))
        throw EvanescentSkipped("|xi| > 3k: quadratic probes are evanescent");
      const ProbeSet p = quadratic_probe(k, xi);
      const PlaneWaveDatum u0 = PlaneWaveDatum::wave(p.vectors[0]);
      const PlaneWaveDatum v0 = PlaneWaveDatum::wave(p.vectors[1]);
      plan.data = {u0, v0, u0 + v0};
      plan.test_vector = p.vectors[2];
      break;
    }
    case Algorithm::alg2:
    case Algorithm::multik: {
      if (!(r >= (m - 1) * k * (1.0 - kBandSlack) && r <= (m + 1) * k * (1.0 + kBandSlack)))
        throw AnnulusViolation("|xi| outside [(m-1)k, (m+1)k]");
      const ProbeSet p = mu_probe(k, xi, m);
      plan.data = {PlaneWaveDatum::wave(p.vectors[0])};
      plan.test_vector = p.vectors[1];
      break;
    }
    case Algorithm::frechet: {
      if (m != 2 && m != 3)
        throw UnsupportedM("Frechet sampling is implemented for m = 2 and m = 3 only");
      if (!retained_by(a, k, m, r))
        throw EvanescentSkipped("|xi| > (m+1)k: probes are evanescent");
      const ProbeSet p = frechet_probe(k, xi, m);
      std::vector<PlaneWaveDatum> f;
      for (int j = 0; j < m; ++j) f.push_back(PlaneWaveDatum::wave(p.vectors[j]));
      const std::vector<double> steps(m, eps);
      plan.stencil = frechet_stencil(f, steps);
      plan.data = plan.stencil.data;
      plan.test_vector = p.vectors[m];
      break;
    }
  }
  return plan;
}

complex finish_sample(const DtnMap& map, const SamplePlan& plan,
                      std::span<const DtnMap::Measurement> measured, const NoiseSpec& noise) {
  for (const auto& meas : measured)
    if (!meas.report.converged)
      throw NoConvergence("Picard iteration did not converge", meas.report.iterations,
                          meas.report.final_residual);

  switch (plan.algorithm) {
    case Algorithm::alg1: {
      const BoundaryTrace gu = measured_linearized(measured[0], noise, 0);
      const BoundaryTrace gv = measured_linearized(measured[1], noise, 1);
      const BoundaryTrace gw = measured_linearized(measured[2], noise, 2);
      std::vector<complex> diff(gw.values.size());
      for (std::size_t t = 0; t < diff.size(); ++t)
        diff[t] = gw.values[t] - gu.values[t] - gv.values[t];
      return 0.5 * pair_with(map, diff, plan.test_vector);
    }
    case Algorithm::alg2:
    case Algorithm::multik: {
      const BoundaryTrace gu = measured_linearized(measured[0], noise, 0);
      return pair_with(map, gu.values, plan.test_vector);
    }
    case Algorithm::frechet: {
      std::vector<BoundaryTrace> lambda;
      lambda.reserve(measured.size());
      for (const auto& meas : measured) lambda.push_back(meas.neumann);
      const BoundaryTrace d = add_noise(frechet_combine(plan.stencil, lambda),
                                        {noise.delta, derive_seed(noise.seed, 0)});
      double factorial = 1.0;
      for (int j = 2; j <= map.m(); ++j) factorial *= j;
      return pair_with(map, d.values, plan.test_vector) / factorial;
    }
  }
  return 0.0;
}

}  // namespace detail

namespace {

complex sample_one(const DtnMap& map, Algorithm a, Vec2 xi, double eps, const NoiseSpec& noise) {
  const detail::SamplePlan plan = detail::plan_sample(map, a, xi, eps);
  const auto measured = map.measure(plan.data);
  return detail::finish_sample(map, plan, measured, noise);
}

}  // namespace

complex fourier_sample_alg1(const DtnMap& map, Vec2 xi, const NoiseSpec& noise) {
  return sample_one(map, Algorithm::alg1, xi, 0.0, noise);
}

complex fourier_sample_alg2(const DtnMap& map, Vec2 xi, const NoiseSpec& noise) {
  return sample_one(map, Algorithm::alg2, xi, 0.0, noise);
}

complex fourier_sample_frechet(const DtnMap& map, Vec2 xi, double eps, const NoiseSpec& noise) {
  return sample_one(map, Algorithm::frechet, xi, eps, noise);
}

std::uint64_t sample_seed(const SamplingOptions& options, int i, int s) {
  return derive_seed(options.noise.seed, options.stream, static_cast<std::uint64_t>(i),
                     static_cast<std::uint64_t>(s));
}

FourierTable sample_table_reference(const DtnMap& map, Algorithm a, const FrequencyGrid& grid,
                                    const SamplingOptions& options) {
  FourierTable table;
  for (int i = 0; i < grid.I; ++i)
    for (int s = 0; s < grid.S; ++s) {
      FourierRecord r = detail::blank_record(map, a, grid, i, s);
      if (r.retained) {
        try {
          r.value = sample_one(map, a, r.xi, options.eps,
                               {options.noise.delta, sample_seed(options, i, s)});
        } catch (const SolverError&) {
          r.retained = false;
          r.failed = true;
        }
      }
      table.records.push_back(r);
    }
  return table;
}

}  // namespace invlab
