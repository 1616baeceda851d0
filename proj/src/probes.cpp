#include "invlab/probes.hpp"

#include <stdexcept>
#include <string>

namespace invlab {
namespace {

struct Basis {
  double len;
  Vec2 e1;
  Vec2 e2;
};

Basis frequency_basis(double k, Vec2 xi) {
  if (!(k > 0.0) || !std::isfinite(k))
    throw std::invalid_argument("wavenumber must be positive");
  const double len = norm(xi);
  if (!(len > 0.0))
    throw std::invalid_argument("probe frequency xi must be nonzero");
  const Vec2 e1 = (1.0 / len) * xi;
  return {len, e1, {-e1.x2, e1.x1}};
}

// sqrt of a discriminant; negative values take the principal branch i*sqrt(|d|).
complex branch_sqrt(double d) {
  return d >= 0.0 ? complex(std::sqrt(d), 0.0) : complex(0.0, std::sqrt(-d));
}

CVec2 combine(complex a, Vec2 e1, complex b, Vec2 e2) {
  return {a * e1.x1 + b * e2.x1, a * e1.x2 + b * e2.x2};
}

ProbeSet make_set(ProbeKind kind, double k, int m, Vec2 xi, const Basis& b,
                  double disc) {
  ProbeSet s;
  s.kind = kind;
  s.k = k;
  s.m = m;
  s.xi = xi;
  s.e1 = b.e1;
  s.e2 = b.e2;
  s.discriminant = disc;
  s.regime = disc >= 0.0 ? Regime::propagating : Regime::evanescent;
  return s;
}

}  // namespace

CVec2 ProbeSet::weighted_sum() const {
  CVec2 sum{0.0, 0.0};
  for (std::size_t j = 0; j < vectors.size(); ++j)
    sum = sum + complex(multiplicity[j]) * vectors[j];
  return sum;
}

ProbeSet quadratic_probe(double k, Vec2 xi) {
  const Basis b = frequency_basis(k, xi);
  // 3k^2 + 2k|xi| - |xi|^2 in factored form, so the degenerate |xi| = 3k is exact.
  const double disc = (3.0 * k - b.len) * (k + b.len);
  const complex root = branch_sqrt(disc);
  const complex a = 0.5 * (b.len - k);

  ProbeSet s = make_set(ProbeKind::quadratic, k, 2, xi, b, disc);
  s.vectors = {combine(a, b.e1, -0.5 * root, b.e2),
               combine(a, b.e1, 0.5 * root, b.e2),
               combine(k, b.e1, 0.0, b.e2)};
  s.multiplicity = {1, 1, 1};
  return s;
}

ProbeSet even_probe(double k, Vec2 xi, int m) {
  if (m < 2 || m % 2 != 0)
    throw std::invalid_argument("even_probe needs an even m >= 2, got " + std::to_string(m));
  const Basis b = frequency_basis(k, xi);
  // (m^2-1)k^2 + 2k|xi| - |xi|^2 = ((m+1)k - |xi|)(|xi| + (m-1)k)
  const double disc = ((m + 1) * k - b.len) * (b.len + (m - 1) * k);
  const complex root = branch_sqrt(disc) / static_cast<double>(m);
  const complex a = (b.len - k) / m;

  ProbeSet s = make_set(ProbeKind::even, k, m, xi, b, disc);
  const CVec2 z1 = combine(a, b.e1, root, b.e2);
  const CVec2 z2 = combine(a, b.e1, -root, b.e2);
  for (int j = 0; j < m; ++j) s.vectors.push_back(j % 2 == 0 ? z1 : z2);
  s.vectors.push_back(combine(k, b.e1, 0.0, b.e2));
  s.multiplicity.assign(m + 1, 1);
  return s;
}

ProbeSet odd_probe(double k, Vec2 xi, int m) {
  if (m < 3 || m % 2 == 0)
    throw std::invalid_argument("odd_probe needs an odd m >= 3, got " + std::to_string(m));
  const Basis b = frequency_basis(k, xi);
  const double disc = ((m + 1) * k - b.len) * ((m + 1) * k + b.len);
  const complex root = branch_sqrt(disc) / static_cast<double>(m + 1);
  const complex a = b.len / (m + 1);

  ProbeSet s = make_set(ProbeKind::odd, k, m, xi, b, disc);
  const CVec2 z1 = combine(a, b.e1, root, b.e2);
  const CVec2 z2 = combine(a, b.e1, -root, b.e2);
  for (int j = 0; j <= m; ++j) s.vectors.push_back(j % 2 == 0 ? z1 : z2);
  s.multiplicity.assign(m + 1, 1);
  return s;
}

ProbeSet frechet_probe(double k, Vec2 xi, int m) {
  return m % 2 == 0 ? even_probe(k, xi, m) : odd_probe(k, xi, m);
}

ProbeSet mu_probe(double k, Vec2 xi, int m) {
  if (m < 2) throw std::invalid_argument("mu_probe needs m >= 2");
  const Basis b = frequency_basis(k, xi);
  const double r = b.len;
  // -(m^2-1)^2 k^4 + 2(m^2+1) k^2 |xi|^2 - |xi|^4, factored over its four roots.
  const double disc =
      -(r + (m + 1) * k) * (r + (m - 1) * k) * (r - (m - 1) * k) * (r - (m + 1) * k);
  const complex root = branch_sqrt(disc);
  const double mk = (static_cast<double>(m) * m - 1.0) * k * k;

  ProbeSet s = make_set(ProbeKind::mu, k, m, xi, b, disc);
  s.vectors = {combine((mk + r * r) / (2.0 * m * r), b.e1, -root / (2.0 * m * r), b.e2),
               combine((r * r - mk) / (2.0 * r), b.e1, root / (2.0 * r), b.e2)};
  s.multiplicity = {m, 1};
  return s;
}

complex plane_wave(CVec2 zeta, Vec2 x) {
  return std::exp(complex(0.0, 1.0) * bilinear_dot(zeta, x));
}

std::vector<complex> plane_wave(CVec2 zeta, std::span<const Vec2> points) {
  std::vector<complex> out;
  out.reserve(points.size());
  for (const Vec2& x : points) out.push_back(plane_wave(zeta, x));
  return out;
}

}  // namespace invlab
