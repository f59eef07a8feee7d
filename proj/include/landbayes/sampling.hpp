#ifndef LANDBAYES_SAMPLING_HPP_
#define LANDBAYES_SAMPLING_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "landbayes/raster.hpp"

namespace landbayes {

// One equal-area square tile of the study region.
struct SampleBox {
  int box_id = 0;
  std::size_t row0 = 0;
  std::size_t col0 = 0;
  std::size_t side = 0;
  double pct_urban_change = 0.0;  // fraction of tile cells with change
  double pct_exclusionary = 0.0;  // fraction of tile cells excluded
  double index = 0.0;             // sampling index, see sampling_index()
};

// Ratio of change fraction to exclusion fraction. A zero denominator gives
// +inf when there is change and 0 when there is none.
double sampling_index(double pct_urban_change, double pct_exclusionary);

// Tiles the region into side x side boxes (row-major box ids from 0).
// Partial edge tiles are dropped. Throws if the shapes differ or the side
// exceeds either region dimension.
std::vector<SampleBox> tile_region(const BinaryGrid& urban_change,
                                   const BinaryGrid& exclusion,
                                   std::size_t box_side);

enum class Pool : std::uint8_t { kA, kB, kC };

char pool_letter(Pool pool);
Pool parse_pool(std::string_view text);

// Nested pool membership: A iff index >= 0, B iff >= 1/2, C iff >= 1.
struct PoolAssignment {
  int box_id = 0;
  bool in_a = false;
  bool in_b = false;
  bool in_c = false;

  bool contains(Pool pool) const;
  std::string label() const;  // e.g. "AB"
};

std::vector<PoolAssignment> classify_pools(std::span<const SampleBox> boxes);

std::vector<SampleBox> pool_members(std::span<const SampleBox> boxes,
                                    std::span<const PoolAssignment> pools,
                                    Pool pool);

// Sizes of n_quantiles contiguous bins covering n items. Sizes differ by at
// most one and the larger bins come first.
std::vector<std::size_t> quantile_bin_sizes(std::size_t n, std::size_t n_quantiles);

// Sorts the pool by ascending change fraction (ties by box id), cuts it into
// n_quantiles bins and draws one box uniformly from each bin. The generator
// is Rng(seed, "sample/" + label), fresh for every call, so each pool gets
// its own reproducible stream. Throws if the pool has fewer boxes than bins.
std::vector<SampleBox> draw_quantile_sample(std::span<const SampleBox> pool,
                                            std::size_t n_quantiles,
                                            std::uint64_t seed,
                                            std::string_view label);

}  // namespace landbayes

#endif  // LANDBAYES_SAMPLING_HPP_
