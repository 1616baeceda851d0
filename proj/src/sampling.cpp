#include <algorithm>
#include <optional>

#include "invlab/errors.hpp"
#include "invlab/reconstruct.hpp"
#include "sampling_detail.hpp"

namespace invlab {

FourierTable sample_table(const DtnMap& map, Algorithm a, const FrequencyGrid& grid,
                          const SamplingOptions& options) {
  FourierTable table;
  table.records.reserve(grid.size());
  std::vector<std::size_t> todo;
  for (int i = 0; i < grid.I; ++i)
    for (int s = 0; s < grid.S; ++s) {
      table.records.push_back(detail::blank_record(map, a, grid, i, s));
      if (table.records.back().retained) todo.push_back(table.records.size() - 1);
    }

  const int per_sample = detail::columns_per_sample(a, map.m());
  const std::size_t chunk =
      static_cast<std::size_t>(std::max(1, options.chunk_columns / per_sample));
  const std::ptrdiff_t n_chunks = static_cast<std::ptrdiff_t>((todo.size() + chunk - 1) / chunk);

  auto fail = [](FourierRecord& r) {
    r.retained = false;
    r.failed = true;
  };
  auto noise_of = [&](const FourierRecord& r) {
    return NoiseSpec{options.noise.delta, sample_seed(options, r.i, r.s)};
  };

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t c = 0; c < n_chunks; ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * chunk;
    const std::size_t end = std::min(todo.size(), begin + chunk);

    std::vector<std::optional<detail::SamplePlan>> plans;
    std::vector<PlaneWaveDatum> data;
    for (std::size_t j = begin; j < end; ++j) {
      FourierRecord& r = table.records[todo[j]];
      try {
        plans.emplace_back(detail::plan_sample(map, a, r.xi, options.eps));
        data.insert(data.end(), plans.back()->data.begin(), plans.back()->data.end());
      } catch (const std::exception&) {
        plans.emplace_back();
        fail(r);
      }
    }

    std::vector<DtnMap::Measurement> measured;
    bool blocked = true;
    try {
      measured = map.measure(data);
    } catch (const std::exception&) {
      blocked = false;  // retry one frequency at a time so only the culprit fails
    }

    std::size_t offset = 0;
    for (std::size_t j = begin; j < end; ++j) {
      FourierRecord& r = table.records[todo[j]];
      const auto& plan = plans[j - begin];
      if (!plan) continue;
      const std::size_t cols = plan->data.size();
      try {
        if (blocked) {
          r.value = detail::finish_sample(
              map, *plan, std::span(measured).subspan(offset, cols), noise_of(r));
        } else {
          const auto single = map.measure(plan->data);
          r.value = detail::finish_sample(map, *plan, single, noise_of(r));
        }
      } catch (const std::exception&) {
        fail(r);
      }
      offset += cols;
    }
  }
  return table;
}

}  // namespace invlab
