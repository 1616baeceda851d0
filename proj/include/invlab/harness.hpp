#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "invlab/reconstruct.hpp"

namespace invlab {

/// Invalid experiment configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Output could not be written (CLI exit code 4).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Preset { bump, dipole, ring };

std::string to_string(Preset p);
Preset parse_preset(const std::string& id);

/// Analytic test potentials. All are real, smooth and vanish for |x| >= 0.4.
///  - bump:   centered Gaussian of width 0.075
///  - dipole: Gaussians of width 0.05 at (+-0.15, 0) with opposite signs
///  - ring:   Gaussian profile of width 0.05 around the circle |x| = 0.2
struct Potential {
  Preset preset = Preset::bump;
  double amplitude = 0.1;

  double operator()(Vec2 x) const;
};

/// Smooth radial cutoff: 1 for r <= 0.3, 0 for r >= 0.4.
double support_cutoff(double r);

/// Samples a preset on a grid, zero outside the mask. Throws ConfigError for
/// amplitude <= 0.
ComplexField preset_potential(Preset id, double amplitude, const Grid& grid,
                              const DomainMask& mask);

/// Trapezoid quadrature of int c e^{i xi.x} dx over the grid (c must vanish on
/// the grid edge, so the rule reduces to h^2 times a plain sum).
complex volume_oracle(const ComplexField& c, Vec2 xi);

/// Oracle values at every frequency of a grid, tagged with the retention rule
/// of (a, k, m). Parallel over frequencies; the serial variant is the
/// reference.
FourierTable oracle_table(const ComplexField& c, const FrequencyGrid& grid, Algorithm a,
                          double k, int m);
FourierTable oracle_table_reference(const ComplexField& c, const FrequencyGrid& grid,
                                    Algorithm a, double k, int m);

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::alg1;
  int m = 2;
  double k = 10.0;     // alg1, alg2, frechet
  double k1 = 1.25;    // multik
  double kmax = 10.0;  // multik
  int fine = 200;
  int coarse = 90;
  int lengths = 60;  // I
  int angles = 64;   // S
  double L = 3.0;
  double eps = 0.1;
  double noise = 0.0;
  std::uint64_t seed = 1;
  Preset preset = Preset::bump;
  double amplitude = 0.1;
  int boundary_samples = 0;  // 0 means 4 * fine
  std::string out_dir;
};

/// Throws ConfigError describing the first violated constraint.
void validate(const ExperimentConfig& config);

/// Wavenumbers a configuration runs, in order.
std::vector<double> wavenumbers(const ExperimentConfig& config);

/// L actually used for the frequency grid of each wavenumber.
double effective_L(const ExperimentConfig& config);

struct FrequencyResidual {
  double kappa;
  double theta;
  double k;
  complex estimate;
  complex oracle;
  double abs_residual;
};

struct Metrics {
  double max_abs_error = 0.0;
  /// ||c_rec - c_true|| / ||c_true|| over the interior nodes of the coarse grid.
  double rel_l2_error = 0.0;
  std::vector<FrequencyResidual> residuals;  // retained samples only
  double max_residual = 0.0;
  double oracle_sup = 0.0;  // max |oracle| over the retained samples
};

/// Compares over mask-interior nodes.
Metrics compare_fields(const ComplexField& c_rec, const ComplexField& c_true,
                       const DomainMask& mask);

struct ExperimentResult {
  ExperimentConfig config;
  Grid coarse;
  DomainMask coarse_mask;
  ComplexField c_true;  // preset evaluated on the coarse grid
  Reconstruction reconstruction;
  Metrics metrics;
};

using Logger = std::function<void(const std::string&)>;

/// Runs the configured reconstruction; no files are written.
ExperimentResult run_experiment(const ExperimentConfig& config, const Logger& log = {});

/// Writes manifest.json, fourier_samples.csv, reconstruction.csv,
/// frequency_residuals.csv, recon.pgm, error.pgm and metrics.json into
/// config.out_dir. Throws IoError.
void write_outputs(const ExperimentResult& result);

/// Oracle table as CSV: kappa,theta,xi1,xi2,re_hat,im_hat,sigma.
void write_oracle_csv(const FourierTable& table, const std::string& path);

/// Formats a double with 17 significant digits.
std::string format_double(double v);

}  // namespace invlab
