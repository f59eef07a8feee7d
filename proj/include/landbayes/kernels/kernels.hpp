#ifndef LANDBAYES_KERNELS_KERNELS_HPP_
#define LANDBAYES_KERNELS_KERNELS_HPP_

// Data-parallel inner loops. Each kernel has a serial reference in
// kernels::serial and an OpenMP version in kernels::parallel with an
// identical contract; the library calls the parallel one, tests check the
// two agree, and bench/ compares their speed.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "landbayes/raster.hpp"

namespace landbayes::kernels {

struct JointCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  bool operator==(const JointCounts&) const = default;
};

// Change and exclusion cell counts of one square tile.
struct TileCounts {
  std::size_t change = 0;
  std::size_t exclusion = 0;

  bool operator==(const TileCounts&) const = default;
};

namespace serial {

// Cells excluded in either map are skipped. Spans must have equal length.
JointCounts count_confusion(std::span<const Cell> sim, std::span<const Cell> obs);

// out[j] = (1/(n h)) * sum_i K((xs[j] - samples[i]) / h), K Epanechnikov.
void kde_evaluate(std::span<const double> samples, double bandwidth,
                  std::span<const double> xs, std::span<double> out);

// Counts per full side x side tile, tiles in row-major order; partial edge
// tiles are dropped. A cell counts as change / exclusion when it is Cell::kOne
// in the respective map.
std::vector<TileCounts> tile_counts(const BinaryGrid& change,
                                    const BinaryGrid& exclusion,
                                    std::size_t side);

}  // namespace serial

namespace parallel {

JointCounts count_confusion(std::span<const Cell> sim, std::span<const Cell> obs);
void kde_evaluate(std::span<const double> samples, double bandwidth,
                  std::span<const double> xs, std::span<double> out);
std::vector<TileCounts> tile_counts(const BinaryGrid& change,
                                    const BinaryGrid& exclusion,
                                    std::size_t side);

}  // namespace parallel
}  // namespace landbayes::kernels

#endif  // LANDBAYES_KERNELS_KERNELS_HPP_
