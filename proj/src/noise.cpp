#include <random>

#include "invlab/dtn.hpp"

namespace invlab {
namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// 53-bit uniform in [0, 1); fixed conversion so output does not depend on the
// standard library's distribution implementation.
double unit(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
  return splitmix(splitmix(splitmix(splitmix(base) ^ a) ^ b) ^ c);
}

BoundaryTrace add_noise(const BoundaryTrace& trace, const NoiseSpec& spec) {
  if (!(spec.delta >= 0.0)) throw std::invalid_argument("noise level must be non-negative");
  BoundaryTrace out = trace;
  if (spec.delta == 0.0) return out;

  const double radius = spec.delta * trace.sup_norm();
  std::mt19937_64 gen(spec.seed);
  for (auto& v : out.values) {
    const double r = radius * std::sqrt(unit(gen));
    const double angle = 2.0 * pi * unit(gen);
    v += std::polar(r, angle);
  }
  return out;
}

}  // namespace invlab
