#include "invlab/harness.hpp"

namespace invlab {

complex volume_oracle(const ComplexField& c, Vec2 xi) {
  const Grid& g = c.grid;
  const int n = g.n();
  // e^{i xi.x} factors over the two axes.
  std::vector<complex> ex(n), ey(n);
  for (int p = 0; p < n; ++p) {
    ex[p] = std::polar(1.0, xi.x1 * g.coord(p));
    ey[p] = std::polar(1.0, xi.x2 * g.coord(p));
  }
  // Row sums first, then rows in order: the same association for every caller.
  complex total = 0.0;
  for (int q = 0; q < n; ++q) {
    complex row = 0.0;
    const complex* cq = c.values.data() + g.index(0, q);
    for (int p = 0; p < n; ++p)
      if (cq[p] != complex(0.0)) row += cq[p] * ex[p];
    total += row * ey[q];
  }
  const double h = g.spacing();
  return h * h * total;
}

namespace {

FourierRecord oracle_record(const ComplexField& c, const FrequencyGrid& grid, Algorithm a,
                            double k, int m, int i, int s) {
  FourierRecord r;
  r.i = i;
  r.s = s;
  r.kappa = grid.kappa[i];
  r.theta = grid.theta[s];
  r.xi = grid.xi(i, s);
  r.sigma = grid.weight(i);
  r.algorithm = a;
  r.k = k;
  r.retained = retained_by(a, k, m, r.kappa);
  r.value = volume_oracle(c, r.xi);
  return r;
}

}  // namespace

FourierTable oracle_table(const ComplexField& c, const FrequencyGrid& grid, Algorithm a,
                          double k, int m) {
  FourierTable table;
  table.records.resize(grid.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t j = 0; j < n; ++j)
    table.records[j] = oracle_record(c, grid, a, k, m, static_cast<int>(j / grid.S),
                                     static_cast<int>(j % grid.S));
  return table;
}

FourierTable oracle_table_reference(const ComplexField& c, const FrequencyGrid& grid,
                                    Algorithm a, double k, int m) {
  FourierTable table;
  for (int i = 0; i < grid.I; ++i)
    for (int s = 0; s < grid.S; ++s) table.records.push_back(oracle_record(c, grid, a, k, m, i, s));
  return table;
}

}  // namespace invlab
