#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <json.hpp>

#include "invlab/harness.hpp"

using namespace invlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("invlab_test_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.algorithm = Algorithm::alg1;
  c.k = 4.0;
  c.fine = 60;
  c.coarse = 25;
  c.lengths = 5;
  c.angles = 8;
  return c;
}

}  // namespace

TEST_CASE("presets vanish outside the support disk") {
  const Grid g(200, 0.5);
  const DomainMask mask = disk_mask(g, 0.5);
  for (Preset p : {Preset::bump, Preset::dipole, Preset::ring}) {
    const ComplexField c = preset_potential(p, 0.1, g, mask);
    for (std::size_t i = 0; i < c.values.size(); ++i) {
      REQUIRE(c[i].imag() == 0.0);
      if (norm(g.node(i)) >= 0.4) REQUIRE(c[i] == complex(0.0));
    }
    CHECK(c.max_abs() > 0.0);
    CHECK(c.max_abs() <= 0.1 + 1e-15);
  }
  CHECK(support_cutoff(0.0) == 1.0);
  CHECK(support_cutoff(0.3) == 1.0);
  CHECK(support_cutoff(0.4) == 0.0);
  CHECK(support_cutoff(0.35) > 0.0);
  CHECK(support_cutoff(0.35) < 1.0);
}

TEST_CASE("preset amplitude") {
  const Grid g(201, 0.5);
  const DomainMask mask = disk_mask(g, 0.5);
  CHECK(preset_potential(Preset::bump, 1e-9, g, mask).max_abs() ==
        doctest::Approx(1e-9).epsilon(1e-12));
  CHECK_THROWS_AS(preset_potential(Preset::bump, 0.0, g, mask), ConfigError);
  CHECK_THROWS_AS(preset_potential(Preset::ring, -1.0, g, mask), ConfigError);
  CHECK(parse_preset("dipole") == Preset::dipole);
  CHECK_THROWS_AS(parse_preset("blob"), ConfigError);
}

TEST_CASE("the dipole integrates to zero") {
  const Grid g(200, 0.5);
  const DomainMask mask = disk_mask(g, 0.5);
  const ComplexField c = preset_potential(Preset::dipole, 1.0, g, mask);
  double mass = 0.0;
  for (auto v : c.values) mass += std::abs(v) * g.spacing() * g.spacing();
  CHECK(std::abs(volume_oracle(c, {0.0, 0.0})) <= 1e-12 * mass);
}

TEST_CASE("volume oracle") {
  const Grid g(200, 0.5);
  const DomainMask mask = disk_mask(g, 0.5);
  CHECK(volume_oracle(ComplexField(g), {3.0, 1.0}) == complex(0.0));

  const ComplexField c = preset_potential(Preset::bump, 0.1, g, mask);
  const Grid g2(399, 0.5);
  const ComplexField c2 = preset_potential(Preset::bump, 0.1, g2, disk_mask(g2, 0.5));
  const complex a = volume_oracle(c, {0.0, 0.0});
  CHECK(std::abs(a - volume_oracle(c2, {0.0, 0.0})) <= 1e-6 * std::abs(a));

  const ComplexField r = preset_potential(Preset::ring, 0.1, g, mask);
  for (Vec2 xi : {Vec2{3.0, -4.0}, Vec2{17.5, 2.0}, Vec2{-25.0, 9.0}}) {
    const complex f = volume_oracle(r, xi);
    CHECK(std::abs(volume_oracle(r, -1.0 * xi) - std::conj(f)) <= 1e-12 * std::abs(a));
  }
}

TEST_CASE("oracle tables carry the retention rule") {
  const Grid g(80, 0.5);
  const ComplexField c = preset_potential(Preset::bump, 0.1, g, disk_mask(g, 0.5));
  const FrequencyGrid freq = frequency_grid(2.0, 4.0, 8, 8);
  const FourierTable t = oracle_table(c, freq, Algorithm::alg2, 2.0, 3);
  REQUIRE(t.records.size() == freq.size());
  for (const FourierRecord& r : t.records) {
    CHECK(r.retained == retained_by(Algorithm::alg2, 2.0, 3, r.kappa));
    CHECK(r.value == volume_oracle(c, r.xi));
  }
}

TEST_CASE("configuration validation") {
  CHECK_NOTHROW(validate(ExperimentConfig{}));
  ExperimentConfig c;
  c.m = 3;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.algorithm = Algorithm::frechet;
  CHECK_NOTHROW(validate(c));
  c.m = 4;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.algorithm = Algorithm::alg2;
  CHECK_NOTHROW(validate(c));

  ExperimentConfig bad;
  bad.noise = -0.1;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = {};
  bad.amplitude = 0.0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = {};
  bad.L = 2.0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = {};
  bad.algorithm = Algorithm::multik;
  bad.kmax = 1.0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("wavenumbers and effective L") {
  ExperimentConfig c;
  c.algorithm = Algorithm::multik;
  c.m = 3;
  CHECK(wavenumbers(c) == std::vector<double>{1.25, 2.5, 5.0, 10.0});
  CHECK(effective_L(c) == 4.0);
  c.algorithm = Algorithm::alg1;
  c.m = 2;
  CHECK(wavenumbers(c) == std::vector<double>{10.0});
  CHECK(effective_L(c) == 3.0);
}

TEST_CASE("metrics") {
  const Grid g(9, 0.5);
  const DomainMask mask = disk_mask(g, 0.5);
  ComplexField truth(g, 1.0), rec(g, 1.0);
  rec[g.index(4, 4)] = 1.5;
  rec[g.index(0, 0)] = 100.0;  // exterior, ignored
  const Metrics m = compare_fields(rec, truth, mask);
  CHECK(m.max_abs_error == 0.5);
  CHECK(m.rel_l2_error == doctest::Approx(0.5 / std::sqrt(double(mask.interior_count))));
}

TEST_CASE("outputs are written and deterministic") {
  ExperimentConfig c = small_config();
  c.noise = 0.1;
  c.seed = 42;
  const fs::path a = scratch_dir("a"), b = scratch_dir("b");
  c.out_dir = a.string();
  write_outputs(run_experiment(c));
  c.out_dir = b.string();
  write_outputs(run_experiment(c));

  for (const char* name : {"manifest.json", "metrics.json", "fourier_samples.csv",
                           "reconstruction.csv", "frequency_residuals.csv", "recon.pgm",
                           "error.pgm"}) {
    CAPTURE(name);
    REQUIRE(fs::exists(a / name));
    CHECK(slurp(a / name) == slurp(b / name));
  }
  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  CHECK(manifest["wavenumbers"].size() == 1);
  CHECK(manifest["config"]["seed"] == 42);
  // The largest abs_err in reconstruction.csv is the reported max_abs_error.
  std::ifstream csv(a / "reconstruction.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == "x1,x2,c_rec,c_true,abs_err");
  double max_err = 0.0;
  while (std::getline(csv, line)) max_err = std::max(max_err, std::stod(line.substr(line.rfind(',') + 1)));
  const auto metrics = nlohmann::json::parse(slurp(a / "metrics.json"));
  CHECK(max_err == metrics["max_abs_error"].get<double>());

  const std::string pgm = slurp(a / "recon.pgm");
  CHECK(pgm.rfind("P5", 0) == 0);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("multi-wavenumber manifest lists the schedule") {
  ExperimentConfig c = small_config();
  c.algorithm = Algorithm::multik;
  c.m = 3;
  c.k1 = 1.25;
  c.kmax = 10.0;
  c.fine = 40;
  c.lengths = 3;
  c.angles = 4;
  const fs::path dir = scratch_dir("multik");
  c.out_dir = dir.string();
  const ExperimentResult r = run_experiment(c);
  CHECK(r.reconstruction.k.size() == 4);
  write_outputs(r);
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["wavenumbers"] == nlohmann::json::array({1.25, 2.5, 5.0, 10.0}));
  fs::remove_all(dir);
}

TEST_CASE("unwritable output directory") {
  ExperimentConfig c = small_config();
  const fs::path file = scratch_dir("blocker");
  std::ofstream(file) << "x";
  c.out_dir = (file / "sub").string();
  const ExperimentResult r = run_experiment(c);
  CHECK_THROWS_AS(write_outputs(r), IoError);
  fs::remove_all(file);
}

TEST_CASE("number formatting round trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 12345.678}) CHECK(std::stod(format_double(v)) == v);
}
