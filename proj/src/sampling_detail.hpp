#pragma once

// Shared pieces of the blocked and serial Fourier samplers. Both paths build
// the same plan and finish it with the same arithmetic, so they agree bitwise.

#include <span>
#include <vector>

#include "invlab/reconstruct.hpp"

namespace invlab::detail {

struct SamplePlan {
  Algorithm algorithm;
  std::vector<PlaneWaveDatum> data;  // Dirichlet data to measure, in order
  CVec2 test_vector;                 // phi = e^{i test_vector . x} on the boundary
  FrechetStencil stencil;            // frechet only
};

/// Throws EvanescentSkipped / AnnulusViolation / UnsupportedM when xi cannot
/// be sampled by the scheme at map.k().
SamplePlan plan_sample(const DtnMap& map, Algorithm a, Vec2 xi, double eps);

/// Turns measurements of plan.data into the Fourier estimate. Throws
/// NoConvergence if any measurement did not converge.
complex finish_sample(const DtnMap& map, const SamplePlan& plan,
                      std::span<const DtnMap::Measurement> measured, const NoiseSpec& noise);

inline int columns_per_sample(Algorithm a, int m) {
  switch (a) {
    case Algorithm::alg1: return 3;
    case Algorithm::frechet: return m == 2 ? 3 : 7;
    default: return 1;
  }
}

FourierRecord blank_record(const DtnMap& map, Algorithm a, const FrequencyGrid& grid, int i,
                           int s);

}  // namespace invlab::detail
