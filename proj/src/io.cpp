#include <Eigen/Core>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "invlab/harness.hpp"
#include "invlab/version.hpp"

namespace invlab {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream f(path, mode | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  return f;
}

void finish(std::ofstream& f, const fs::path& path) {
  f.flush();
  if (!f) throw IoError("write failed for " + path.string());
}

struct Range {
  double min = 0.0;
  double max = 0.0;
};

// 8-bit grayscale, linear over [min, max] of the interior values; exterior
// pixels are 0.
Range write_pgm(const fs::path& path, const Grid& grid, const DomainMask& mask,
                const std::vector<double>& values) {
  Range r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t idx = 0; idx < values.size(); ++idx)
    if (mask.is_interior(idx)) {
      r.min = std::min(r.min, values[idx]);
      r.max = std::max(r.max, values[idx]);
    }
  if (!(r.min <= r.max)) r = {0.0, 0.0};

  std::vector<unsigned char> pixels(values.size(), 0);
  const double span = r.max - r.min;
  for (std::size_t idx = 0; idx < values.size(); ++idx)
    if (mask.is_interior(idx) && span > 0.0)
      pixels[idx] = static_cast<unsigned char>(std::lround(255.0 * (values[idx] - r.min) / span));

  auto f = open_out(path, std::ios::out | std::ios::binary);
  f << "P5\n" << grid.n() << ' ' << grid.n() << "\n255\n";
  f.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  finish(f, path);
  return r;
}

void write_json(const fs::path& path, const ordered_json& j) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
  finish(f, path);
}

ordered_json config_json(const ExperimentConfig& c) {
  ordered_json j;
  j["algorithm"] = to_string(c.algorithm);
  j["m"] = c.m;
  if (c.algorithm == Algorithm::multik) {
    j["k1"] = c.k1;
    j["kmax"] = c.kmax;
  } else {
    j["k"] = c.k;
  }
  j["fine"] = c.fine;
  j["coarse"] = c.coarse;
  j["freq_lengths"] = c.lengths;
  j["freq_angles"] = c.angles;
  j["L"] = c.L;
  j["L_effective"] = effective_L(c);
  j["eps"] = c.eps;
  j["noise"] = c.noise;
  j["seed"] = c.seed;
  j["preset"] = to_string(c.preset);
  j["amplitude"] = c.amplitude;
  j["boundary_samples"] = c.boundary_samples > 0 ? c.boundary_samples : 4 * c.fine;
  j["domain_radius"] = 0.5;
  j["picard_tol"] = PicardOptions{}.tol;
  j["picard_max_iter"] = PicardOptions{}.max_iter;
  return j;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_outputs(const ExperimentResult& result) {
  const ExperimentConfig& config = result.config;
  if (config.out_dir.empty()) throw IoError("no output directory given");
  const fs::path dir(config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string());

  const FourierTable& table = result.reconstruction.table;
  {
    const fs::path path = dir / "fourier_samples.csv";
    auto f = open_out(path);
    f << "kappa,theta,xi1,xi2,re_hat,im_hat,sigma,retained,algorithm,k\n";
    for (const auto& r : table.records)
      f << format_double(r.kappa) << ',' << format_double(r.theta) << ','
        << format_double(r.xi.x1) << ',' << format_double(r.xi.x2) << ','
        << format_double(r.value.real()) << ',' << format_double(r.value.imag()) << ','
        << format_double(r.sigma) << ',' << (r.retained ? 1 : 0) << ','
        << to_string(r.algorithm) << ',' << format_double(r.k) << '\n';
    finish(f, path);
  }

  const Grid& coarse = result.coarse;
  const DomainMask& mask = result.coarse_mask;
  const ComplexField& rec = result.reconstruction.c_rec;
  std::vector<double> rec_values(coarse.size()), err_values(coarse.size());
  for (std::size_t idx = 0; idx < coarse.size(); ++idx) {
    rec_values[idx] = rec[idx].real();
    err_values[idx] = std::abs(rec[idx].real() - result.c_true[idx].real());
  }
  {
    const fs::path path = dir / "reconstruction.csv";
    auto f = open_out(path);
    f << "x1,x2,c_rec,c_true,abs_err\n";
    for (std::size_t idx = 0; idx < coarse.size(); ++idx) {
      if (!mask.is_interior(idx)) continue;
      const Vec2 x = coarse.node(idx);
      f << format_double(x.x1) << ',' << format_double(x.x2) << ','
        << format_double(rec_values[idx]) << ',' << format_double(result.c_true[idx].real())
        << ',' << format_double(err_values[idx]) << '\n';
    }
    finish(f, path);
  }
  {
    const fs::path path = dir / "frequency_residuals.csv";
    auto f = open_out(path);
    f << "kappa,theta,k,re_hat,im_hat,re_oracle,im_oracle,abs_residual\n";
    for (const auto& r : result.metrics.residuals)
      f << format_double(r.kappa) << ',' << format_double(r.theta) << ','
        << format_double(r.k) << ',' << format_double(r.estimate.real()) << ','
        << format_double(r.estimate.imag()) << ',' << format_double(r.oracle.real()) << ','
        << format_double(r.oracle.imag()) << ',' << format_double(r.abs_residual) << '\n';
    finish(f, path);
  }

  const Range recon_range = write_pgm(dir / "recon.pgm", coarse, mask, rec_values);
  const Range error_range = write_pgm(dir / "error.pgm", coarse, mask, err_values);

  ordered_json manifest;
  manifest["tool"] = "invlab";
  manifest["version"] = kVersion;
  manifest["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                              std::to_string(EIGEN_MAJOR_VERSION) + "." +
                              std::to_string(EIGEN_MINOR_VERSION);
  manifest["config"] = config_json(config);
  manifest["wavenumbers"] = result.reconstruction.k;
  ordered_json per_k = ordered_json::array();
  for (double k : result.reconstruction.k) {
    std::size_t kept = 0, failed = 0;
    for (const auto& r : table.records)
      if (r.k == k) {
        kept += r.retained;
        failed += r.failed;
      }
    per_k.push_back({{"k", k}, {"retained", kept}, {"failed", failed}});
  }
  manifest["frequencies"] = {{"total", table.records.size()},
                             {"retained", table.retained_count()},
                             {"failed", table.failed_count()},
                             {"per_k", per_k}};
  manifest["heatmaps"] = {
      {"recon.pgm", {{"min", recon_range.min}, {"max", recon_range.max}}},
      {"error.pgm", {{"min", error_range.min}, {"max", error_range.max}}}};
  write_json(dir / "manifest.json", manifest);

  const Metrics& m = result.metrics;
  ordered_json metrics;
  metrics["max_abs_error"] = m.max_abs_error;
  metrics["rel_l2_error"] = m.rel_l2_error;
  metrics["max_frequency_residual"] = m.max_residual;
  metrics["oracle_sup"] = m.oracle_sup;
  metrics["relative_frequency_residual"] = m.oracle_sup > 0.0 ? m.max_residual / m.oracle_sup : 0.0;
  write_json(dir / "metrics.json", metrics);
}

void write_oracle_csv(const FourierTable& table, const std::string& path_name) {
  const fs::path path(path_name);
  auto f = open_out(path);
  f << "kappa,theta,xi1,xi2,re_hat,im_hat,sigma\n";
  for (const auto& r : table.records)
    f << format_double(r.kappa) << ',' << format_double(r.theta) << ','
      << format_double(r.xi.x1) << ',' << format_double(r.xi.x2) << ','
      << format_double(r.value.real()) << ',' << format_double(r.value.imag()) << ','
      << format_double(r.sigma) << '\n';
  finish(f, path);
}

}  // namespace invlab
