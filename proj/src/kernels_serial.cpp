#include "landbayes/kde.hpp"
#include "landbayes/kernels/kernels.hpp"

namespace landbayes::kernels::serial {

JointCounts count_confusion(std::span<const Cell> sim, std::span<const Cell> obs) {
  JointCounts counts;
  for (std::size_t i = 0; i < sim.size(); ++i) {
    const Cell s = sim[i];
    const Cell o = obs[i];
    if (s == Cell::kExcluded || o == Cell::kExcluded) continue;
    if (s == Cell::kOne) {
      if (o == Cell::kOne) ++counts.tp; else ++counts.fp;
    } else {
      if (o == Cell::kOne) ++counts.fn; else ++counts.tn;
    }
  }
  return counts;
}

void kde_evaluate(std::span<const double> samples, double bandwidth,
                  std::span<const double> xs, std::span<double> out) {
  const double scale = 1.0 / (static_cast<double>(samples.size()) * bandwidth);
  for (std::size_t j = 0; j < xs.size(); ++j) {
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
  for (std::size_t tr = 0; tr < tile_rows; ++tr) {
    for (std::size_t tc = 0; tc < tile_cols; ++tc) {
      TileCounts& t = tiles[tr * tile_cols + tc];
      for (std::size_t r = tr * side; r < (tr + 1) * side; ++r) {
        for (std::size_t c = tc * side; c < (tc + 1) * side; ++c) {
          if (change.at(r, c) == Cell::kOne) ++t.change;
          if (exclusion.at(r, c) == Cell::kOne) ++t.exclusion;
        }
      }
    }
  }
  return tiles;
}

}  // namespace landbayes::kernels::serial
