#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "invlab/dtn.hpp"

namespace invlab {

/// Polar sampling of frequency space: lengths kappa_i = i L k_max / I and
/// angles theta_s = 2 pi s / S, s = 1..S.
struct FrequencyGrid {
  double k_max = 0.0;
  double L = 0.0;
  int I = 0;
  int S = 0;
  std::vector<double> kappa;
  std::vector<double> theta;
  std::vector<Vec2> y_hat;  // (cos theta, sin theta)
  std::vector<Vec2> z_hat;  // y_hat rotated by +90 degrees
  double dkappa = 0.0;
  double dtheta = 0.0;

  /// Polar measure kappa dkappa dtheta / (2 pi)^2.
  double weight(int i) const { return kappa[i] * dkappa * dtheta / (4.0 * pi * pi); }
  Vec2 xi(int i, int s) const { return kappa[i] * y_hat[s]; }
  std::size_t size() const { return kappa.size() * theta.size(); }
};

FrequencyGrid frequency_grid(double k_max, double L, int I, int S);

enum class Algorithm { alg1, alg2, frechet, multik };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

/// One sampled frequency; i and s are zero-based grid indices.
struct FourierRecord {
  int i = 0;
  int s = 0;
  double kappa = 0.0;
  double theta = 0.0;
  Vec2 xi;
  complex value = 0.0;
  double sigma = 0.0;
  bool retained = false;
  bool failed = false;  // inside the retained band but a solve did not converge
  Algorithm algorithm = Algorithm::alg1;
  double k = 0.0;
};

struct FourierTable {
  std::vector<FourierRecord> records;

  std::size_t retained_count() const;
  std::size_t failed_count() const;
};

/// Relative slack applied to band edges so that grid lengths landing on an
/// edge in exact arithmetic are classified the same way after rounding.
inline constexpr double kBandSlack = 1e-12;

/// Retention rule of each sampling scheme at wavenumber k.
/// alg1: |xi| <= 3k; alg2 / multik: (m-1)k <= |xi| < (m+1)k; frechet: |xi| <= (m+1)k.
bool retained_by(Algorithm a, double k, int m, double kappa);

struct WavenumberSchedule {
  int m = 0;
  std::vector<double> k;
};

/// k_1, k_1 r, k_1 r^2, ... up to K with r = (m+1)/(m-1).
WavenumberSchedule make_schedule(double k1, double K, int m);
/// Throws std::invalid_argument unless consecutive ratios equal (m+1)/(m-1).
void validate_schedule(const WavenumberSchedule& schedule);

// Single-frequency estimates of F[c](xi) = int c e^{i xi.x} dx from boundary
// data of `map`. `noise.seed` seeds this sample; each measured trace gets its
// own stream derived from it.

/// m = 2 quadratic probes: 1/2 int (g'_w - g'_u - g'_v) phi dS.
complex fourier_sample_alg1(const DtnMap& map, Vec2 xi, const NoiseSpec& noise = {});
/// mu probes: int g'_u phi dS. Throws AnnulusViolation outside the band.
complex fourier_sample_alg2(const DtnMap& map, Vec2 xi, const NoiseSpec& noise = {});
/// (1/m!) int D^m Lambda_c(f_1..f_m) f_{m+1} dS with mixed finite differences.
complex fourier_sample_frechet(const DtnMap& map, Vec2 xi, double eps = 0.1,
                               const NoiseSpec& noise = {});

struct SamplingOptions {
  double eps = 0.1;        // Frechet step
  NoiseSpec noise;         // seed is the run seed; per-sample seeds are derived
  std::uint64_t stream = 0;  // distinguishes wavenumbers of one run
  int chunk_columns = 8;  // target right-hand sides per blocked solve
};

/// Samples every grid frequency with the given scheme. Frequencies outside the
/// retention band are recorded with value 0 and retained = false. Runs chunks
/// of frequencies in parallel, each chunk sharing blocked solves.
FourierTable sample_table(const DtnMap& map, Algorithm a, const FrequencyGrid& grid,
                          const SamplingOptions& options = {});
/// Same table computed one frequency at a time, serially, through the
/// single-frequency functions above.
FourierTable sample_table_reference(const DtnMap& map, Algorithm a, const FrequencyGrid& grid,
                                    const SamplingOptions& options = {});

/// Seed of the noise stream of one sample.
std::uint64_t sample_seed(const SamplingOptions& options, int i, int s);

/// c_rec(x) = Re sum_retained F(xi) e^{-i xi.x} sigma, summed in record order.
/// The real part is stored with zero imaginary part. Throws when nothing is
/// retained.
ComplexField synthesize(const FourierTable& table, const Grid& coarse);
ComplexField synthesize_reference(const FourierTable& table, const Grid& coarse);

struct Reconstruction {
  ComplexField c_rec;
  FourierTable table;
  std::vector<double> k;  // wavenumbers used, in order
};

Reconstruction reconstruct_alg1(const ForwardSetup& setup, double k, const ComplexField& c,
                                const Grid& coarse, const FrequencyGrid& freq,
                                const SamplingOptions& options = {});
Reconstruction reconstruct_alg2(const ForwardSetup& setup, double k, int m,
                                const ComplexField& c, const Grid& coarse,
                                const FrequencyGrid& freq, const SamplingOptions& options = {});
Reconstruction reconstruct_frechet(const ForwardSetup& setup, double k, int m,
                                   const ComplexField& c, const Grid& coarse,
                                   const FrequencyGrid& freq,
                                   const SamplingOptions& options = {});
/// Sums Algorithm-2 partial reconstructions over the schedule. `L`, `I`, `S`
/// configure each wavenumber's own frequency grid (with L raised to m + 1 so
/// that the grid covers the band).
Reconstruction reconstruct_multik(const ForwardSetup& setup, const WavenumberSchedule& schedule,
                                  const ComplexField& c, const Grid& coarse, double L, int I,
                                  int S, const SamplingOptions& options = {});

}  // namespace invlab
