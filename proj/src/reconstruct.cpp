#include <algorithm>
#include <stdexcept>

#include "invlab/reconstruct.hpp"

namespace invlab {
namespace {

Reconstruction single_k(const ForwardSetup& setup, Algorithm a, double k, int m,
                        const ComplexField& c, const Grid& coarse, const FrequencyGrid& freq,
                        const SamplingOptions& options) {
  const DtnMap map(setup, k, m, c);
  Reconstruction out{ComplexField(coarse), sample_table(map, a, freq, options), {k}};
  out.c_rec = synthesize(out.table, coarse);
  return out;
}

}  // namespace

Reconstruction reconstruct_alg1(const ForwardSetup& setup, double k, const ComplexField& c,
                                const Grid& coarse, const FrequencyGrid& freq,
                                const SamplingOptions& options) {
  return single_k(setup, Algorithm::alg1, k, 2, c, coarse, freq, options);
}

Reconstruction reconstruct_alg2(const ForwardSetup& setup, double k, int m,
                                const ComplexField& c, const Grid& coarse,
                                const FrequencyGrid& freq, const SamplingOptions& options) {
  return single_k(setup, Algorithm::alg2, k, m, c, coarse, freq, options);
}

Reconstruction reconstruct_frechet(const ForwardSetup& setup, double k, int m,
                                   const ComplexField& c, const Grid& coarse,
                                   const FrequencyGrid& freq, const SamplingOptions& options) {
  if (m != 2 && m != 3)
    throw std::invalid_argument("Frechet reconstruction supports m = 2 and m = 3");
  return single_k(setup, Algorithm::frechet, k, m, c, coarse, freq, options);
}

Reconstruction reconstruct_multik(const ForwardSetup& setup, const WavenumberSchedule& schedule,
                                  const ComplexField& c, const Grid& coarse, double L, int I,
                                  int S, const SamplingOptions& options) {
  validate_schedule(schedule);
  const int m = schedule.m;
  Reconstruction out{ComplexField(coarse), {}, schedule.k};
  for (std::size_t j = 0; j < schedule.k.size(); ++j) {
    const double k = schedule.k[j];
    const FrequencyGrid freq = frequency_grid(k, std::max(L, static_cast<double>(m + 1)), I, S);
    SamplingOptions opts = options;
    opts.stream = options.stream + j;
    const DtnMap map(setup, k, m, c);
    FourierTable table = sample_table(map, Algorithm::multik, freq, opts);
    // A wavenumber whose band misses the grid contributes nothing.
    if (table.retained_count() > 0) out.c_rec += synthesize(table, coarse);
    out.table.records.insert(out.table.records.end(), table.records.begin(),
                             table.records.end());
  }
  if (out.table.retained_count() == 0)
    throw std::invalid_argument("no retained Fourier samples to synthesize");
  return out;
}

}  // namespace invlab
