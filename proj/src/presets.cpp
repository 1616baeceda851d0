#include <cmath>

#include "invlab/harness.hpp"

namespace invlab {
namespace {

constexpr double kBumpWidth = 0.075;
constexpr double kDipoleWidth = 0.05;
constexpr double kDipoleOffset = 0.15;
constexpr double kRingRadius = 0.2;
constexpr double kRingWidth = 0.05;

double gaussian(double r2, double width) { return std::exp(-r2 / (2.0 * width * width)); }

double smooth_step_piece(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

std::string to_string(Preset p) {
  switch (p) {
    case Preset::bump: return "bump";
    case Preset::dipole: return "dipole";
    case Preset::ring: return "ring";
  }
  return "unknown";
}

Preset parse_preset(const std::string& id) {
  for (Preset p : {Preset::bump, Preset::dipole, Preset::ring})
    if (to_string(p) == id) return p;
  throw ConfigError("unknown preset '" + id + "' (expected bump, dipole or ring)");
}

double support_cutoff(double r) {
  const double t = (r - 0.3) / 0.1;
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  const double a = smooth_step_piece(1.0 - t);
  return a / (a + smooth_step_piece(t));
}

double Potential::operator()(Vec2 x) const {
  const double r = norm(x);
  if (r >= 0.4) return 0.0;
  double v = 0.0;
  switch (preset) {
    case Preset::bump:
      v = gaussian(dot(x, x), kBumpWidth);
      break;
    case Preset::dipole: {
      const Vec2 a = x - Vec2{kDipoleOffset, 0.0};
      const Vec2 b = x + Vec2{kDipoleOffset, 0.0};
      v = gaussian(dot(a, a), kDipoleWidth) - gaussian(dot(b, b), kDipoleWidth);
      break;
    }
    case Preset::ring:
      v = gaussian((r - kRingRadius) * (r - kRingRadius), kRingWidth);
      break;
  }
  return amplitude * v * support_cutoff(r);
}

ComplexField preset_potential(Preset id, double amplitude, const Grid& grid,
                              const DomainMask& mask) {
  if (!(amplitude > 0.0) || !std::isfinite(amplitude))
    throw ConfigError("potential amplitude must be positive");
  const Potential c{id, amplitude};
  ComplexField out(grid);
  for (std::size_t idx = 0; idx < grid.size(); ++idx)
    if (mask.is_interior(idx)) out[idx] = c(grid.node(idx));
  return out;
}

}  // namespace invlab
