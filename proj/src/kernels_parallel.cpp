#include <omp.h>

#include "landbayes/kde.hpp"
#include "landbayes/kernels/kernels.hpp"

namespace landbayes::kernels::parallel {

JointCounts count_confusion(std::span<const Cell> sim, std::span<const Cell> obs) {
  const auto n = static_cast<std::int64_t>(sim.size());
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
#pragma omp parallel for reduction(+ : tp, fp, fn, tn) schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const Cell s = sim[i];
    const Cell o = obs[i];
    if (s == Cell::kExcluded || o == Cell::kExcluded) continue;
    const bool sim_one = s == Cell::kOne;
    const bool obs_one = o == Cell::kOne;
    tp += sim_one & obs_one;
    fp += sim_one & !obs_one;
    fn += !sim_one & obs_one;
    tn += !sim_one & !obs_one;
  }
  return {tp, fp, fn, tn};
}

void kde_evaluate(std::span<const double> samples, double bandwidth,
                  std::span<const double> xs, std::span<double> out) {
  const double scale = 1.0 / (static_cast<double>(samples.size()) * bandwidth);
  const auto m = static_cast<std::int64_t>(xs.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < m; ++j) {
    double sum = 0.0;
    for (const double sample : samples) {
      sum += epanechnikov((xs[j] - sample) / bandwidth);
    }
    out[j] = scale * sum;
  }
}

std::vector<TileCounts> tile_counts(const BinaryGrid& change,
                                    const BinaryGrid& exclusion,
                                    std::size_t side) {
  const std::size_t tile_rows = change.rows() / side;
  const std::size_t tile_cols = change.cols() / side;
  std::vector<TileCounts> tiles(tile_rows * tile_cols);
  const auto n_tiles = static_cast<std::int64_t>(tiles.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < n_tiles; ++t) {
    const std::size_t tr = static_cast<std::size_t>(t) / tile_cols;
    const std::size_t tc = static_cast<std::size_t>(t) % tile_cols;
    TileCounts counts;
    for (std::size_t r = tr * side; r < (tr + 1) * side; ++r) {
      for (std::size_t c = tc * side; c < (tc + 1) * side; ++c) {
        counts.change += change.at(r, c) == Cell::kOne;
        counts.exclusion += exclusion.at(r, c) == Cell::kOne;
      }
    }
    tiles[t] = counts;
  }
  return tiles;
}

}  // namespace landbayes::kernels::parallel
