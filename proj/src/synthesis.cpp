#include <stdexcept>

#include "invlab/reconstruct.hpp"

namespace invlab {
namespace {

// sigma F together with the axis factors of e^{-i xi.x} on the coarse nodes.
struct Terms {
  std::vector<complex> weight;  // sigma F per retained record
  std::vector<complex> ex;      // [term * n + p] = e^{-i xi_1 x_p}
  std::vector<complex> ey;      // [term * n + q] = e^{-i xi_2 x_q}
};

Terms retained_terms(const FourierTable& table, const Grid& coarse) {
  const int n = coarse.n();
  Terms t;
  for (const auto& r : table.records) {
    if (!r.retained) continue;
    t.weight.push_back(r.sigma * r.value);
    for (int p = 0; p < n; ++p) t.ex.push_back(std::polar(1.0, -r.xi.x1 * coarse.coord(p)));
    for (int q = 0; q < n; ++q) t.ey.push_back(std::polar(1.0, -r.xi.x2 * coarse.coord(q)));
  }
  if (t.weight.empty()) throw std::invalid_argument("no retained Fourier samples to synthesize");
  return t;
}

double node_value(const Terms& t, int n, int p, int q) {
  double acc = 0.0;
  for (std::size_t j = 0; j < t.weight.size(); ++j)
    acc += (t.weight[j] * (t.ex[j * n + p] * t.ey[j * n + q])).real();
  return acc;
}

}  // namespace

ComplexField synthesize(const FourierTable& table, const Grid& coarse) {
  const Terms terms = retained_terms(table, coarse);
  const int n = coarse.n();
  ComplexField out(coarse);
#pragma omp parallel for schedule(static)
  for (int q = 0; q < n; ++q)
    for (int p = 0; p < n; ++p) out.at(p, q) = node_value(terms, n, p, q);
  return out;
}

ComplexField synthesize_reference(const FourierTable& table, const Grid& coarse) {
  const Terms terms = retained_terms(table, coarse);
  const int n = coarse.n();
  ComplexField out(coarse);
  for (int q = 0; q < n; ++q)
    for (int p = 0; p < n; ++p) out.at(p, q) = node_value(terms, n, p, q);
  return out;
}

}  // namespace invlab
