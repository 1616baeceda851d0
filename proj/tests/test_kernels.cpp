#include <doctest.h>

#include <omp.h>

#include "invlab/harness.hpp"

using namespace invlab;

namespace {

bool same(const FourierTable& a, const FourierTable& b) {
  if (a.records.size() != b.records.size()) return false;
  for (std::size_t j = 0; j < a.records.size(); ++j) {
    const FourierRecord& x = a.records[j];
    const FourierRecord& y = b.records[j];
    if (x.value != y.value || x.retained != y.retained || x.failed != y.failed ||
        x.sigma != y.sigma || !(x.xi == y.xi) || x.i != y.i || x.s != y.s)
      return false;
  }
  return true;
}

struct Threads {
  int saved = omp_get_max_threads();
  explicit Threads(int n) { omp_set_num_threads(n); }
  ~Threads() { omp_set_num_threads(saved); }
};

}  // namespace

TEST_CASE("blocked parallel sampling equals the serial reference bit for bit") {
  const ForwardSetup s = make_forward_setup(70);
  const ComplexField c = preset_potential(Preset::dipole, 0.1, s.grid, s.mask);
  SamplingOptions opts;
  opts.noise = {0.1, 7};
  opts.stream = 2;
  for (auto [a, m] : {std::pair{Algorithm::alg1, 2}, std::pair{Algorithm::alg2, 3},
                      std::pair{Algorithm::frechet, 2}, std::pair{Algorithm::frechet, 3}}) {
    CAPTURE(to_string(a));
    const DtnMap map(s, 5.0, m, c);
    const FrequencyGrid freq = frequency_grid(5.0, 4.0, 6, 6);
    const FourierTable ref = sample_table_reference(map, a, freq, opts);
    for (int threads : {1, 3}) {
      const Threads t(threads);
      for (int chunk : {1, 8, 32}) {
        SamplingOptions o = opts;
        o.chunk_columns = chunk;
        CHECK(same(sample_table(map, a, freq, o), ref));
      }
    }
  }
}

TEST_CASE("parallel synthesis and oracle equal their serial references") {
  const Grid fine(120, 0.5);
  const ComplexField c = preset_potential(Preset::ring, 0.1, fine, disk_mask(fine, 0.5));
  const FrequencyGrid freq = frequency_grid(6.0, 3.0, 14, 12);
  const FourierTable ref = oracle_table_reference(c, freq, Algorithm::alg1, 6.0, 2);
  const Grid coarse(45, 0.5);
  const ComplexField syn = synthesize_reference(ref, coarse);
  for (int threads : {1, 2, 5}) {
    const Threads t(threads);
    CHECK(same(oracle_table(c, freq, Algorithm::alg1, 6.0, 2), ref));
    CHECK(synthesize(ref, coarse).values == syn.values);
  }
}

TEST_CASE("experiments do not depend on the thread count") {
  ExperimentConfig cfg;
  cfg.k = 4.0;
  cfg.fine = 50;
  cfg.coarse = 21;
  cfg.lengths = 4;
  cfg.angles = 6;
  cfg.noise = 0.05;
  const ExperimentResult one = [&] {
    const Threads t(1);
    return run_experiment(cfg);
  }();
  const Threads t(4);
  const ExperimentResult four = run_experiment(cfg);
  CHECK(one.reconstruction.c_rec.values == four.reconstruction.c_rec.values);
  CHECK(one.metrics.max_residual == four.metrics.max_residual);
}
