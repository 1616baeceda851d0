#include <stdexcept>
#include <string>

#include "invlab/reconstruct.hpp"

namespace invlab {

FrequencyGrid frequency_grid(double k_max, double L, int I, int S) {
  if (!(k_max > 0.0) || !std::isfinite(k_max)) throw std::invalid_argument("k_max must be positive");
  if (!(L >= 3.0) || !std::isfinite(L)) throw std::invalid_argument("L must be at least 3");
  if (I < 1) throw std::invalid_argument("need at least one frequency length");
  if (S < 4) throw std::invalid_argument("need at least four frequency angles");

  FrequencyGrid g;
  g.k_max = k_max;
  g.L = L;
  g.I = I;
  g.S = S;
  g.dkappa = L * k_max / I;
  g.dtheta = 2.0 * pi / S;
  for (int i = 1; i <= I; ++i) g.kappa.push_back(i * (L * k_max) / I);
  for (int s = 1; s <= S; ++s) {
    const double t = 2.0 * pi * s / S;
    const double c = std::cos(t), sn = std::sin(t);
    g.theta.push_back(t);
    g.y_hat.push_back({c, sn});
    g.z_hat.push_back({-sn, c});
  }
  return g;
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::alg1: return "alg1";
    case Algorithm::alg2: return "alg2";
    case Algorithm::frechet: return "frechet";
    case Algorithm::multik: return "multik";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm a : {Algorithm::alg1, Algorithm::alg2, Algorithm::frechet, Algorithm::multik})
    if (to_string(a) == name) return a;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

std::size_t FourierTable::retained_count() const {
  std::size_t n = 0;
  for (const auto& r : records) n += r.retained;
  return n;
}

std::size_t FourierTable::failed_count() const {
  std::size_t n = 0;
  for (const auto& r : records) n += r.failed;
  return n;
}

bool retained_by(Algorithm a, double k, int m, double kappa) {
  const double up = 1.0 + kBandSlack, down = 1.0 - kBandSlack;
  switch (a) {
    case Algorithm::alg1:
      return kappa <= 3.0 * k * up;
    case Algorithm::frechet:
      return kappa <= (m + 1) * k * up;
    case Algorithm::alg2:
    case Algorithm::multik:
      return kappa >= (m - 1) * k * down && kappa < (m + 1) * k * down;
  }
  return false;
}

WavenumberSchedule make_schedule(double k1, double K, int m) {
  if (m < 2) throw std::invalid_argument("schedule needs m >= 2");
  if (!(k1 > 0.0) || !(K >= k1) || !std::isfinite(K))
    throw std::invalid_argument("schedule needs 0 < k1 <= K");
  const double ratio = static_cast<double>(m + 1) / (m - 1);
  WavenumberSchedule s{m, {}};
  for (double k = k1; k <= K * (1.0 + kBandSlack); k *= ratio) s.k.push_back(k);
  return s;
}

void validate_schedule(const WavenumberSchedule& schedule) {
  if (schedule.m < 2) throw std::invalid_argument("schedule needs m >= 2");
  if (schedule.k.empty()) throw std::invalid_argument("empty wavenumber schedule");
  const double ratio = static_cast<double>(schedule.m + 1) / (schedule.m - 1);
  for (std::size_t j = 0; j < schedule.k.size(); ++j) {
    if (!(schedule.k[j] > 0.0)) throw std::invalid_argument("wavenumbers must be positive");
    if (j > 0 && std::abs(schedule.k[j] / schedule.k[j - 1] - ratio) > 1e-12 * ratio)
      throw std::invalid_argument("schedule ratio must be (m+1)/(m-1) = " +
                                  std::to_string(ratio));
  }
}

}  // namespace invlab
