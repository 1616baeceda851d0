#include <doctest.h>

#include <array>

#include "invlab/dtn.hpp"
#include "invlab/errors.hpp"
#include "invlab/harness.hpp"

using namespace invlab;

namespace {

const ForwardSetup& setup200() {
  static const ForwardSetup s = make_forward_setup(200);
  return s;
}

ComplexField bump(const ForwardSetup& s, double amplitude) {
  return preset_potential(Preset::bump, amplitude, s.grid, s.mask);
}

CVec2 wave_vector(double k, double angle) {
  return {k * std::cos(angle), k * std::sin(angle)};
}

double max_diff(const BoundaryTrace& a, const BoundaryTrace& b) { return (a - b).sup_norm(); }

}  // namespace

TEST_CASE("zero potential maps a plane wave to its normal derivative") {
  const ForwardSetup& s = setup200();
  const double k = 5.0;
  const CVec2 zeta = wave_vector(k, 0.4);
  const BoundaryTrace t = dtn_apply(s, k, 2, ComplexField(s.grid), PlaneWaveDatum::wave(zeta));
  REQUIRE(t.values.size() == s.boundary.size());
  double err = 0.0;
  for (std::size_t j = 0; j < s.boundary.size(); ++j) {
    const complex exact = complex(0.0, 1.0) * bilinear_dot(zeta, s.boundary.normals[j]) *
                          plane_wave(zeta, s.boundary.points[j]);
    err = std::max(err, std::abs(t.values[j] - exact));
  }
  CHECK(err <= 1e-2 * k);
}

TEST_CASE("zero datum gives a zero trace") {
  const ForwardSetup& s = setup200();
  const DtnMap map(s, 10.0, 2, bump(s, 0.1));
  const BoundaryTrace t = map.apply(PlaneWaveDatum::wave({10.0, 0.0}, 0.0));
  CHECK(t.sup_norm() == 0.0);
  CHECK(map.linearized(PlaneWaveDatum{}).sup_norm() == 0.0);
}

TEST_CASE("the map is nonlinear for a nonzero potential") {
  const ForwardSetup& s = setup200();
  const PlaneWaveDatum g1 = PlaneWaveDatum::wave(wave_vector(10.0, 0.3));
  const PlaneWaveDatum g2 = PlaneWaveDatum::wave(wave_vector(10.0, 1.9));
  const DtnMap lin(s, 10.0, 2, ComplexField(s.grid));
  const DtnMap map(s, 10.0, 2, bump(s, 0.1));
  const auto defect = [&](const DtnMap& m) {
    BoundaryTrace sum = m.apply(g1);
    const BoundaryTrace b = m.apply(g2);
    for (std::size_t j = 0; j < sum.values.size(); ++j) sum.values[j] += b.values[j];
    return max_diff(m.apply(g1 + g2), sum);
  };
  CHECK(defect(lin) <= 1e-10);
  CHECK(defect(map) > 1e-4);
}

TEST_CASE("linearized data") {
  const ForwardSetup& s = setup200();
  const double k = 10.0;
  const PlaneWaveDatum g = PlaneWaveDatum::wave(wave_vector(k, 0.8));
  CHECK(linearized_data(s, k, 2, ComplexField(s.grid), g).sup_norm() <= 1e-10);

  SUBCASE("degree two in the datum") {
    const DtnMap map(s, k, 2, bump(s, 0.1));
    const double full = map.linearized(g).sup_norm();
    const double half = map.linearized(g.scaled(0.5)).sup_norm();
    const double quarter = map.linearized(g.scaled(0.25)).sup_norm();
    CHECK(full / half == doctest::Approx(4.0).epsilon(0.2));
    CHECK(half / quarter == doctest::Approx(4.0).epsilon(0.2));
  }
  SUBCASE("linear in the potential") {
    const double a = DtnMap(s, k, 2, bump(s, 0.01)).linearized(g).sup_norm();
    const double b = DtnMap(s, k, 2, bump(s, 0.02)).linearized(g).sup_norm();
    CHECK(b / a == doctest::Approx(2.0).epsilon(0.1));
  }
}

TEST_CASE("measuring a block matches one datum at a time") {
  const ForwardSetup s = make_forward_setup(100);
  const DtnMap map(s, 7.0, 2, bump(s, 0.1));
  std::vector<PlaneWaveDatum> data;
  for (int j = 0; j < 5; ++j) data.push_back(PlaneWaveDatum::wave(wave_vector(7.0, 0.7 * j)));
  const auto block = map.measure(data);
  for (int j = 0; j < 5; ++j) {
    const auto single = map.measure(std::span(&data[j], 1));
    CHECK(block[j].neumann.values == single[0].neumann.values);
    CHECK(block[j].linear_neumann.values == single[0].linear_neumann.values);
    CHECK(block[j].report.iterations == single[0].report.iterations);
  }
}

TEST_CASE("invalid map configurations") {
  const ForwardSetup s = make_forward_setup(60);
  CHECK_THROWS_AS(DtnMap(s, 5.0, 1, ComplexField(s.grid)), std::invalid_argument);
  const DtnMap map(s, 5.0, 2, bump(s, 1e4));
  CHECK_THROWS_AS(map.apply(PlaneWaveDatum::wave({5.0, 0.0})), NoConvergence);
  CHECK_THROWS_AS(map.apply(PlaneWaveDatum::wave({0.0, complex(0.0, -5000.0)})), NonFinite);
}

TEST_CASE("second Frechet differences") {
  const ForwardSetup& s = setup200();
  const double k = 10.0;
  const PlaneWaveDatum f1 = PlaneWaveDatum::wave(wave_vector(k, 0.2));
  const PlaneWaveDatum f2 = PlaneWaveDatum::wave(wave_vector(k, 2.4));

  const BoundaryTrace zero = frechet_data_m2(s, k, ComplexField(s.grid), f1, f2, 0.1, 0.1);
  CHECK(zero.sup_norm() <= 1e-8 / (0.1 * 0.1));

  const DtnMap map(s, k, 2, bump(s, 0.1));
  const BoundaryTrace a = map.frechet_m2(f1, f2, 0.1, 0.07);
  const BoundaryTrace b = map.frechet_m2(f2, f1, 0.07, 0.1);
  CHECK(max_diff(a, b) <= 1e-10);
  CHECK(a.sup_norm() > 0.0);

  const BoundaryTrace coarse = map.frechet_m2(f1, f2, 0.1, 0.1);
  const BoundaryTrace fine = map.frechet_m2(f1, f2, 0.05, 0.05);
  CHECK(max_diff(coarse, fine) <= 0.25 * fine.sup_norm());
}

TEST_CASE("third Frechet differences") {
  const ForwardSetup s = make_forward_setup(120);
  const double k = 6.0;
  const std::array<PlaneWaveDatum, 3> f = {PlaneWaveDatum::wave(wave_vector(k, 0.1)),
                                           PlaneWaveDatum::wave(wave_vector(k, 2.0)),
                                           PlaneWaveDatum::wave(wave_vector(k, 4.1))};
  const std::array<double, 3> eps = {0.1, 0.08, 0.12};

  const BoundaryTrace zero =
      frechet_data_m3(s, k, ComplexField(s.grid), f[0], f[1], f[2], eps[0], eps[1], eps[2]);
  CHECK(zero.sup_norm() <= 1e-8 / (eps[0] * eps[1] * eps[2]));

  const DtnMap map(s, k, 3, bump(s, 0.1));
  const BoundaryTrace ref = map.frechet_m3(f[0], f[1], f[2], eps[0], eps[1], eps[2]);
  CHECK(ref.sup_norm() > 0.0);
  std::array<int, 3> perm = {0, 1, 2};
  while (std::next_permutation(perm.begin(), perm.end())) {
    const BoundaryTrace p = map.frechet_m3(f[perm[0]], f[perm[1]], f[perm[2]], eps[perm[0]],
                                           eps[perm[1]], eps[perm[2]]);
    CHECK(max_diff(p, ref) <= 1e-10);
  }
}

TEST_CASE("Frechet stencil") {
  const PlaneWaveDatum f = PlaneWaveDatum::wave({1.0, 0.0});
  const std::vector<PlaneWaveDatum> two{f, f}, four{f, f, f, f};
  const std::vector<double> e2{0.1, 0.2}, e4{0.1, 0.1, 0.1, 0.1};
  const FrechetStencil s = frechet_stencil(two, e2);
  CHECK(s.data.size() == 3);
  CHECK(s.scale == doctest::Approx(50.0));
  CHECK_THROWS_AS(frechet_stencil(four, e4), UnsupportedM);
  const std::vector<double> bad{0.1, 0.0};
  CHECK_THROWS_AS(frechet_stencil(two, bad), std::invalid_argument);
}

TEST_CASE("noise injection") {
  BoundaryTrace t{BoundaryTrace::Kind::neumann, {}};
  for (int j = 0; j < 256; ++j)
    t.values.push_back(std::polar(1.0 + std::sin(0.1 * j), 0.3 * j));
  const double sup = t.sup_norm();

  CHECK(add_noise(t, {0.0, 5}).values == t.values);
  CHECK_THROWS_AS(add_noise(t, {-0.1, 5}), std::invalid_argument);

  for (std::uint64_t seed : {std::uint64_t{0}, std::uint64_t{1}}) {
    const double dev = (add_noise(t, {0.1, seed}) - t).sup_norm() / sup;
    CHECK(dev <= 0.1);
    CHECK(dev >= 0.05);
  }
  CHECK(add_noise(t, {0.1, 9}).values == add_noise(t, {0.1, 9}).values);
  CHECK(add_noise(t, {0.1, 9}).values != add_noise(t, {0.1, 10}).values);

  for (std::uint64_t seed = 0; seed < 1000; ++seed)
    REQUIRE((add_noise(t, {0.1, seed}) - t).sup_norm() <= 0.1 * sup);
}

TEST_CASE("seed derivation separates streams") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0, 1) != derive_seed(1, 1, 0));
  CHECK(derive_seed(2, 3, 4, 5) == derive_seed(2, 3, 4, 5));
}
