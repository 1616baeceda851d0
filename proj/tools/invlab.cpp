#include <omp.h>

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "invlab/errors.hpp"
#include "invlab/harness.hpp"
#include "invlab/version.hpp"
#include "selftest.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

void log_line(const std::string& s) { std::cerr << "[invlab] " << s << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  using namespace invlab;

  CLI::App app{"Potential reconstruction from linearized nonlinear Dirichlet-to-Neumann data"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)")
      ->check(CLI::NonNegativeNumber);

  ExperimentConfig cfg;
  std::string algorithm = "alg1", preset = "bump";
  auto* run = app.add_subcommand("run", "Run one reconstruction and write its outputs");
  run->add_option("--algorithm", algorithm, "alg1 | alg2 | multik | frechet")
      ->check(CLI::IsMember({"alg1", "alg2", "multik", "frechet"}));
  run->add_option("--m", cfg.m, "nonlinearity index");
  auto* k_opt = run->add_option("--k", cfg.k, "wavenumber (alg1, alg2, frechet)");
  auto* k1_opt = run->add_option("--k1", cfg.k1, "first wavenumber of the multik schedule");
  auto* kmax_opt = run->add_option("--kmax", cfg.kmax, "largest wavenumber of the multik schedule");
  k_opt->excludes(k1_opt)->excludes(kmax_opt);
  run->add_option("--fine", cfg.fine, "forward grid nodes per axis");
  run->add_option("--coarse", cfg.coarse, "reconstruction grid nodes per axis");
  run->add_option("--freq-lengths", cfg.lengths, "frequency lengths I");
  run->add_option("--freq-angles", cfg.angles, "frequency angles S");
  run->add_option("--L", cfg.L, "frequency range factor (>= 3)");
  run->add_option("--eps", cfg.eps, "Frechet difference step");
  run->add_option("--noise", cfg.noise, "relative noise level delta");
  run->add_option("--seed", cfg.seed, "noise seed");
  run->add_option("--preset", preset, "bump | dipole | ring");
  run->add_option("--amplitude", cfg.amplitude, "potential amplitude");
  run->add_option("--boundary-samples", cfg.boundary_samples, "boundary samples (0 = 4 * fine)");
  run->add_option("--out", cfg.out_dir, "output directory")->required();

  ExperimentConfig ocfg;
  std::string opreset = "bump", oalgorithm = "alg1", oout;
  auto* oracle = app.add_subcommand("oracle", "Dump volume-oracle Fourier values of a preset");
  oracle->add_option("--preset", opreset, "bump | dipole | ring");
  oracle->add_option("--amplitude", ocfg.amplitude, "potential amplitude");
  oracle->add_option("--fine", ocfg.fine, "quadrature grid nodes per axis");
  oracle->add_option("--k", ocfg.k, "wavenumber setting the frequency range");
  oracle->add_option("--m", ocfg.m, "nonlinearity index (retention rule)");
  oracle->add_option("--algorithm", oalgorithm, "retention rule")
      ->check(CLI::IsMember({"alg1", "alg2", "multik", "frechet"}));
  oracle->add_option("--L", ocfg.L, "frequency range factor (>= 3)");
  oracle->add_option("--freq-lengths", ocfg.lengths, "frequency lengths I");
  oracle->add_option("--freq-angles", ocfg.angles, "frequency angles S");
  oracle->add_option("--out", oout, "CSV file (default: stdout)");

  auto* selftest = app.add_subcommand("selftest", "Run the quick invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (*run) {
      cfg.algorithm = parse_algorithm(algorithm);
      cfg.preset = parse_preset(preset);
      if (cfg.algorithm == Algorithm::multik && k_opt->count() > 0)
        throw ConfigError("multik takes --k1/--kmax, not --k");
      if (cfg.algorithm != Algorithm::multik && (k1_opt->count() + kmax_opt->count()) > 0)
        throw ConfigError("--k1/--kmax apply to multik only");
      const ExperimentResult result = run_experiment(cfg, log_line);
      write_outputs(result);
      std::printf("max_abs_error %s\nrel_l2_error %s\n",
                  format_double(result.metrics.max_abs_error).c_str(),
                  format_double(result.metrics.rel_l2_error).c_str());
      return 0;
    }
    if (*oracle) {
      ocfg.algorithm = parse_algorithm(oalgorithm);
      ocfg.preset = parse_preset(opreset);
      validate(ocfg);
      const ForwardSetup setup = make_forward_setup(ocfg.fine);
      const ComplexField c = preset_potential(ocfg.preset, ocfg.amplitude, setup.grid, setup.mask);
      const FrequencyGrid freq =
          frequency_grid(ocfg.k, effective_L(ocfg), ocfg.lengths, ocfg.angles);
      const FourierTable table = oracle_table(c, freq, ocfg.algorithm, ocfg.k, ocfg.m);
      write_oracle_csv(table, oout.empty() ? "/dev/stdout" : oout);
      return 0;
    }
    if (*selftest) return cli::run_selftest() == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    log_line(std::string("configuration error: ") + e.what());
    return kExitConfig;
  } catch (const UnsupportedM& e) {
    log_line(std::string("configuration error: ") + e.what());
    return kExitConfig;
  } catch (const SolverError& e) {
    log_line(std::string("solver failure: ") + e.what());
    return kExitSolver;
  } catch (const IoError& e) {
    log_line(std::string("I/O failure: ") + e.what());
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    log_line(std::string("configuration error: ") + e.what());
    return kExitConfig;
  }
  return 0;
}
