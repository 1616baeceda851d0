#pragma once

#include <span>
#include <vector>

#include "invlab/types.hpp"

namespace invlab {

/// Complex wave vector; products are bilinear (no conjugation).
struct CVec2 {
  complex z1;
  complex z2;

  friend CVec2 operator+(CVec2 a, CVec2 b) { return {a.z1 + b.z1, a.z2 + b.z2}; }
  friend CVec2 operator*(complex s, CVec2 a) { return {s * a.z1, s * a.z2}; }
};

inline complex bilinear_dot(CVec2 a, CVec2 b) { return a.z1 * b.z1 + a.z2 * b.z2; }
inline complex bilinear_dot(CVec2 a, Vec2 x) { return a.z1 * x.x1 + a.z2 * x.x2; }
inline CVec2 to_complex(Vec2 v) { return {v.x1, v.x2}; }

enum class Regime { propagating, evanescent };
enum class ProbeKind { quadratic, even, odd, mu };

/// Wave vectors realizing a target frequency xi.
///
/// Roles of `vectors`:
///  - quadratic: {zeta1 -> u0, zeta2 -> v0, zeta3 -> phi}
///  - even/odd:  {zeta1..zeta_m -> f_1..f_m, zeta_{m+1} -> f_{m+1}}
///  - mu:        {mu1 -> u0 (used m times), mu2 -> phi}
/// `multiplicity[j]` is how often vectors[j] enters the sum that equals xi.
struct ProbeSet {
  ProbeKind kind;
  double k = 0.0;
  int m = 0;
  Vec2 xi;
  Vec2 e1;
  Vec2 e2;
  std::vector<CVec2> vectors;
  std::vector<int> multiplicity;
  Regime regime = Regime::propagating;
  /// Discriminant whose sign decides the regime (>= 0 means propagating).
  double discriminant = 0.0;

  CVec2 weighted_sum() const;
  bool propagating() const { return regime == Regime::propagating; }
};

ProbeSet quadratic_probe(double k, Vec2 xi);
ProbeSet even_probe(double k, Vec2 xi, int m);
ProbeSet odd_probe(double k, Vec2 xi, int m);
/// Dispatches to even_probe or odd_probe.
ProbeSet frechet_probe(double k, Vec2 xi, int m);
ProbeSet mu_probe(double k, Vec2 xi, int m);

complex plane_wave(CVec2 zeta, Vec2 x);
std::vector<complex> plane_wave(CVec2 zeta, std::span<const Vec2> points);

}  // namespace invlab
