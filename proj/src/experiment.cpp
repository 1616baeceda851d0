#include <algorithm>
#include <chrono>
#include <cstdio>

#include "invlab/harness.hpp"

namespace invlab {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

}  // namespace

void validate(const ExperimentConfig& c) {
  require(c.m >= 2, "m must be at least 2");
  switch (c.algorithm) {
    case Algorithm::alg1:
      require(c.m == 2, "alg1 is the quadratic scheme and needs m = 2");
      break;
    case Algorithm::frechet:
      require(c.m == 2 || c.m == 3, "frechet supports m = 2 and m = 3 only");
      break;
    case Algorithm::alg2:
    case Algorithm::multik:
      break;
  }
  if (c.algorithm == Algorithm::multik) {
    require(finite_positive(c.k1), "k1 must be positive");
    require(std::isfinite(c.kmax) && c.kmax >= c.k1, "kmax must be at least k1");
  } else {
    require(finite_positive(c.k), "k must be positive");
  }
  require(c.fine >= 20, "fine grid needs at least 20 nodes per axis");
  require(c.coarse >= 3, "coarse grid needs at least 3 nodes per axis");
  require(c.lengths >= 1, "freq-lengths must be at least 1");
  require(c.angles >= 4, "freq-angles must be at least 4");
  require(std::isfinite(c.L) && c.L >= 3.0, "L must be at least 3");
  require(finite_positive(c.eps), "eps must be positive");
  require(std::isfinite(c.noise) && c.noise >= 0.0, "noise must be non-negative");
  require(finite_positive(c.amplitude), "amplitude must be positive");
  require(c.boundary_samples == 0 || c.boundary_samples >= 8,
          "boundary samples must be 0 (default) or at least 8");
  if (c.algorithm == Algorithm::multik) {
    try {
      validate_schedule(make_schedule(c.k1, c.kmax, c.m));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
}

std::vector<double> wavenumbers(const ExperimentConfig& c) {
  if (c.algorithm == Algorithm::multik) return make_schedule(c.k1, c.kmax, c.m).k;
  return {c.k};
}

double effective_L(const ExperimentConfig& c) {
  if (c.algorithm == Algorithm::alg1) return c.L;
  return std::max(c.L, static_cast<double>(c.m + 1));
}

Metrics compare_fields(const ComplexField& c_rec, const ComplexField& c_true,
                       const DomainMask& mask) {
  if (!(c_rec.grid == c_true.grid)) throw std::invalid_argument("fields on different grids");
  Metrics m;
  double err2 = 0.0, ref2 = 0.0;
  for (std::size_t idx = 0; idx < c_rec.values.size(); ++idx) {
    if (!mask.is_interior(idx)) continue;
    const double e = std::abs(c_rec[idx].real() - c_true[idx].real());
    m.max_abs_error = std::max(m.max_abs_error, e);
    err2 += e * e;
    ref2 += c_true[idx].real() * c_true[idx].real();
  }
  m.rel_l2_error = ref2 > 0.0 ? std::sqrt(err2 / ref2) : std::sqrt(err2);
  return m;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const Logger& log) {
  validate(config);
  auto say = [&](const std::string& s) {
    if (log) log(s);
  };
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto elapsed = [&] {
    return fmt("%.1f s", std::chrono::duration<double>(clock::now() - t0).count());
  };

  const ForwardSetup setup =
      make_forward_setup(config.fine, 0.5, config.boundary_samples, 0.5);
  const ComplexField c_fine =
      preset_potential(config.preset, config.amplitude, setup.grid, setup.mask);
  const Grid coarse = build_grid(config.coarse, 0.5);
  const DomainMask coarse_mask = disk_mask(coarse, 0.5);
  const ComplexField c_true =
      preset_potential(config.preset, config.amplitude, coarse, coarse_mask);

  SamplingOptions opts;
  opts.eps = config.eps;
  opts.noise = {config.noise, config.seed};

  const double L = effective_L(config);
  say("algorithm " + to_string(config.algorithm) + ", m = " + std::to_string(config.m) +
      ", fine " + std::to_string(config.fine) + ", coarse " + std::to_string(config.coarse));

  Reconstruction rec = [&] {
    if (config.algorithm == Algorithm::multik) {
      const WavenumberSchedule schedule = make_schedule(config.k1, config.kmax, config.m);
      return reconstruct_multik(setup, schedule, c_fine, coarse, L, config.lengths,
                                config.angles, opts);
    }
    const FrequencyGrid freq = frequency_grid(config.k, L, config.lengths, config.angles);
    switch (config.algorithm) {
      case Algorithm::alg1:
        return reconstruct_alg1(setup, config.k, c_fine, coarse, freq, opts);
      case Algorithm::alg2:
        return reconstruct_alg2(setup, config.k, config.m, c_fine, coarse, freq, opts);
      default:
        return reconstruct_frechet(setup, config.k, config.m, c_fine, coarse, freq, opts);
    }
  }();
  say("sampled " + std::to_string(rec.table.retained_count()) + " retained frequencies in " +
      elapsed());
  if (const std::size_t failed = rec.table.failed_count(); failed > 0) {
    say("warning: dropped " + std::to_string(failed) + " frequencies whose solves failed");
    for (const auto& r : rec.table.records)
      if (r.failed)
        say("  dropped k = " + fmt("%g", r.k) + ", kappa = " + fmt("%g", r.kappa) +
            ", theta = " + fmt("%g", r.theta));
  }

  ExperimentResult result{config, coarse, coarse_mask, c_true, std::move(rec), {}};
  result.metrics = compare_fields(result.reconstruction.c_rec, c_true, coarse_mask);

  std::vector<const FourierRecord*> kept;
  for (const auto& r : result.reconstruction.table.records)
    if (r.retained) kept.push_back(&r);
  auto& residuals = result.metrics.residuals;
  residuals.resize(kept.size());
  const std::ptrdiff_t n_kept = static_cast<std::ptrdiff_t>(kept.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t j = 0; j < n_kept; ++j) {
    const FourierRecord& r = *kept[j];
    const complex oracle = volume_oracle(c_fine, r.xi);
    residuals[j] = {r.kappa, r.theta, r.k, r.value, oracle, std::abs(r.value - oracle)};
  }
  for (const auto& fr : residuals) {
    result.metrics.max_residual = std::max(result.metrics.max_residual, fr.abs_residual);
    result.metrics.oracle_sup = std::max(result.metrics.oracle_sup, std::abs(fr.oracle));
  }
  say("max_abs_error " + fmt("%.6g", result.metrics.max_abs_error) + ", rel_l2_error " +
      fmt("%.6g", result.metrics.rel_l2_error) + ", total " + elapsed());
  return result;
}

}  // namespace invlab
