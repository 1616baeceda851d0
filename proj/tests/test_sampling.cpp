#include <doctest.h>

#include "invlab/errors.hpp"
#include "invlab/harness.hpp"

using namespace invlab;

namespace {

const ForwardSetup& setup200() {
  static const ForwardSetup s = make_forward_setup(200);
  return s;
}

const ComplexField& bump200() {
  static const ComplexField c =
      preset_potential(Preset::bump, 0.1, setup200().grid, setup200().mask);
  return c;
}

Vec2 polar_xi(double r, double angle) { return {r * std::cos(angle), r * std::sin(angle)}; }

// The bump is positive, so its transform peaks at the origin.
double oracle_peak(const ComplexField& c) { return std::abs(volume_oracle(c, {0.0, 0.0})); }

}  // namespace

TEST_CASE("zero potential gives zero samples") {
  const ForwardSetup& s = setup200();
  const ComplexField zero(s.grid);
  const DtnMap m2(s, 10.0, 2, zero);
  CHECK(std::abs(fourier_sample_alg1(m2, polar_xi(5.0, 0.3))) <= 1e-8);
  CHECK(std::abs(fourier_sample_frechet(m2, polar_xi(12.0, 1.3), 0.1)) <= 1e-6);
  const DtnMap m3(s, 5.0, 3, zero);
  CHECK(std::abs(fourier_sample_alg2(m3, polar_xi(10.0, 2.3))) <= 1e-8);
}

TEST_CASE("quadratic probe samples match the volume oracle") {
  const DtnMap map(setup200(), 10.0, 2, bump200());
  const double peak = oracle_peak(bump200());
  const Vec2 xi = polar_xi(5.0, 0.6);
  const complex a = fourier_sample_alg1(map, xi);
  CHECK(std::abs(a - volume_oracle(bump200(), xi)) <= 0.1 * peak);

  const complex b = fourier_sample_alg1(map, -1.0 * xi);
  CHECK(std::abs(b - std::conj(a)) <= 0.05 * std::abs(a));

  CHECK_THROWS_AS(fourier_sample_alg1(map, polar_xi(30.5, 0.0)), EvanescentSkipped);
}

TEST_CASE("annulus samples match the volume oracle") {
  const ForwardSetup s = make_forward_setup(200);
  const ComplexField c = preset_potential(Preset::bump, 0.1, s.grid, s.mask);
  const DtnMap map(s, 5.0, 3, c);
  const double peak = oracle_peak(c);
  const Vec2 xi = polar_xi(10.0, 2.0);
  CHECK(std::abs(fourier_sample_alg2(map, xi) - volume_oracle(c, xi)) <= 0.1 * peak);
  CHECK_THROWS_AS(fourier_sample_alg2(map, polar_xi(25.0, 0.0)), AnnulusViolation);
  CHECK_THROWS_AS(fourier_sample_alg2(map, polar_xi(9.0, 0.0)), AnnulusViolation);
}

TEST_CASE("Frechet samples match the volume oracle") {
  const DtnMap map(setup200(), 10.0, 2, bump200());
  const double peak = oracle_peak(bump200());
  for (double r : {4.0, 17.0}) {
    const Vec2 xi = polar_xi(r, 0.9);
    CHECK(std::abs(fourier_sample_frechet(map, xi, 0.1) - volume_oracle(bump200(), xi)) <=
          0.15 * peak);
  }
  CHECK_THROWS_AS(fourier_sample_frechet(map, polar_xi(31.0, 0.0), 0.1), EvanescentSkipped);
}

TEST_CASE("cubic Frechet sample") {
  const ForwardSetup s = make_forward_setup(120);
  const ComplexField c = preset_potential(Preset::bump, 0.1, s.grid, s.mask);
  const DtnMap map(s, 10.0, 3, c);
  const Vec2 xi = polar_xi(8.0, 0.4);
  CHECK(std::abs(fourier_sample_frechet(map, xi, 0.1) - volume_oracle(c, xi)) <=
        0.15 * oracle_peak(c));
  const DtnMap m4(s, 10.0, 4, c);
  CHECK_THROWS_AS(fourier_sample_frechet(m4, xi, 0.1), UnsupportedM);
}

TEST_CASE("sample tables follow the retention rules") {
  const ForwardSetup s = make_forward_setup(80);
  const ComplexField c = preset_potential(Preset::bump, 0.1, s.grid, s.mask);
  const FrequencyGrid freq = frequency_grid(4.0, 4.0, 8, 8);
  for (auto [a, m] : {std::pair{Algorithm::alg1, 2}, std::pair{Algorithm::alg2, 3},
                      std::pair{Algorithm::frechet, 2}}) {
    const DtnMap map(s, 4.0, m, c);
    const FourierTable t = sample_table(map, a, freq);
    REQUIRE(t.records.size() == freq.size());
    CHECK(t.failed_count() == 0);
    std::size_t expected = 0;
    for (const FourierRecord& r : t.records) {
      CHECK(r.retained == retained_by(a, 4.0, m, r.kappa));
      expected += r.retained;
      if (!r.retained) CHECK(r.value == complex(0.0));
      CHECK(r.sigma == freq.weight(r.i));
      CHECK(r.algorithm == a);
    }
    CHECK(t.retained_count() == expected);
    CHECK(expected > 0);
    CHECK(expected < freq.size());
  }
}

TEST_CASE("failed solves are dropped, not thrown") {
  const ForwardSetup s = make_forward_setup(60);
  const ComplexField c = preset_potential(Preset::bump, 1e4, s.grid, s.mask);
  const DtnMap map(s, 4.0, 2, c);
  const FrequencyGrid freq = frequency_grid(4.0, 3.0, 3, 4);
  const FourierTable t = sample_table(map, Algorithm::alg1, freq);
  CHECK(t.failed_count() == freq.size());
  CHECK(t.retained_count() == 0);
  CHECK_THROWS_AS(synthesize(t, Grid(20, 0.5)), std::invalid_argument);
}

TEST_CASE("synthesis of a single record") {
  const Grid coarse(30, 0.5);
  const FrequencyGrid freq = frequency_grid(1.0, 3.0, 10, 4);
  FourierRecord r;
  r.kappa = freq.kappa[0];
  r.theta = freq.theta[3];
  r.xi = freq.xi(0, 3);
  r.sigma = freq.weight(0);
  r.value = 1.0;
  r.retained = true;
  const ComplexField f = synthesize({{r}}, coarse);
  for (int q = 0; q < coarse.n(); ++q)
    for (int p = 0; p < coarse.n(); ++p) {
      const double expect = r.sigma * std::cos(dot(r.xi, coarse.node(p, q)));
      CHECK(std::abs(f.at(p, q) - expect) <= 1e-15);
    }

  r.value = 0.0;
  CHECK(synthesize({{r, r}}, coarse).max_abs() == 0.0);
}

TEST_CASE("synthesis is linear in the table") {
  const ForwardSetup s = make_forward_setup(100);
  const Grid coarse(40, 0.5);
  const ComplexField c = preset_potential(Preset::ring, 0.1, s.grid, s.mask);
  const FrequencyGrid freq = frequency_grid(5.0, 3.0, 12, 16);
  FourierTable a = oracle_table(c, freq, Algorithm::alg1, 5.0, 2);
  FourierTable b = oracle_table(c, frequency_grid(3.0, 3.0, 7, 9), Algorithm::alg1, 3.0, 2);
  FourierTable ab = a;
  ab.records.insert(ab.records.end(), b.records.begin(), b.records.end());
  const ComplexField diff = synthesize(ab, coarse) - (synthesize(a, coarse) + synthesize(b, coarse));
  CHECK(diff.max_abs() <= 1e-12);
}

TEST_CASE("oracle coefficients synthesize the bump") {
  const ForwardSetup s = make_forward_setup(200);
  const ComplexField c = preset_potential(Preset::bump, 0.1, s.grid, s.mask);
  const Grid coarse(90, 0.5);
  const DomainMask mask = disk_mask(coarse, 0.5);
  const FourierTable t = oracle_table(c, frequency_grid(10.0, 3.0, 60, 64), Algorithm::alg1, 10.0, 2);
  const ComplexField truth = preset_potential(Preset::bump, 0.1, coarse, mask);
  CHECK(compare_fields(synthesize(t, coarse), truth, mask).rel_l2_error <= 0.15);
}

TEST_CASE("zero potential reconstructs to zero") {
  const ForwardSetup s = make_forward_setup(80);
  const Grid coarse(30, 0.5);
  const Reconstruction r =
      reconstruct_alg1(s, 5.0, ComplexField(s.grid), coarse, frequency_grid(5.0, 3.0, 6, 8));
  CHECK(r.c_rec.max_abs() <= 1e-6);
  CHECK(r.k == std::vector<double>{5.0});
}

TEST_CASE("one-element schedule equals one annulus pass") {
  const ForwardSetup s = make_forward_setup(80);
  const Grid coarse(30, 0.5);
  const ComplexField c = preset_potential(Preset::bump, 0.1, s.grid, s.mask);
  SamplingOptions opts;
  opts.noise = {0.05, 3};
  const Reconstruction multi = reconstruct_multik(s, {3, {4.0}}, c, coarse, 3.0, 8, 8, opts);
  const Reconstruction single =
      reconstruct_alg2(s, 4.0, 3, c, coarse, frequency_grid(4.0, 4.0, 8, 8), opts);
  CHECK(multi.c_rec.values == single.c_rec.values);
  CHECK(multi.table.retained_count() == single.table.retained_count());
}

TEST_CASE("multi-wavenumber annuli do not overlap") {
  const ForwardSetup s = make_forward_setup(60);
  const Grid coarse(20, 0.5);
  const ComplexField c = preset_potential(Preset::bump, 0.1, s.grid, s.mask);
  const Reconstruction r = reconstruct_multik(s, make_schedule(1.0, 3.0, 2), c, coarse, 3.0, 9, 4);
  CHECK(r.k == std::vector<double>{1.0, 3.0});
  for (const FourierRecord& rec : r.table.records) {
    int hits = 0;
    for (double k : r.k) hits += retained_by(Algorithm::multik, k, 2, rec.kappa);
    if (rec.retained) CHECK(hits == 1);
  }
  CHECK_THROWS_AS(reconstruct_multik(s, {2, {1.0, 2.0}}, c, coarse, 3.0, 4, 4),
                  std::invalid_argument);
}
