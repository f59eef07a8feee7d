#include "landbayes/sampling.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "landbayes/kernels/kernels.hpp"
#include "landbayes/rng.hpp"

namespace landbayes {

double sampling_index(double pct_urban_change, double pct_exclusionary) {
  if (pct_exclusionary > 0.0) return pct_urban_change / pct_exclusionary;
  return pct_urban_change > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

std::vector<SampleBox> tile_region(const BinaryGrid& urban_change,
                                   const BinaryGrid& exclusion,
                                   std::size_t box_side) {
  if (!urban_change.info().same_shape(exclusion.info())) {
    throw std::invalid_argument("change and exclusion grids differ in shape");
  }
  if (box_side == 0) throw std::invalid_argument("box side must be positive");
  if (box_side > urban_change.rows() || box_side > urban_change.cols()) {
    throw std::invalid_argument("box side " + std::to_string(box_side) +
                                " larger than the region");
  }
  const auto counts =
      kernels::parallel::tile_counts(urban_change, exclusion, box_side);
  const std::size_t tile_cols = urban_change.cols() / box_side;
  const double cells = static_cast<double>(box_side * box_side);

  std::vector<SampleBox> boxes(counts.size());
  for (std::size_t t = 0; t < counts.size(); ++t) {
    SampleBox& box = boxes[t];
    box.box_id = static_cast<int>(t);
    box.row0 = (t / tile_cols) * box_side;
    box.col0 = (t % tile_cols) * box_side;
    box.side = box_side;
    box.pct_urban_change = static_cast<double>(counts[t].change) / cells;
    box.pct_exclusionary = static_cast<double>(counts[t].exclusion) / cells;
    box.index = sampling_index(box.pct_urban_change, box.pct_exclusionary);
  }
  return boxes;
}

char pool_letter(Pool pool) {
  switch (pool) {
    case Pool::kA: return 'A';
    case Pool::kB: return 'B';
    case Pool::kC: return 'C';
  }
  return '?';
}

Pool parse_pool(std::string_view text) {
  if (text == "A") return Pool::kA;
  if (text == "B") return Pool::kB;
  if (text == "C") return Pool::kC;
  throw std::invalid_argument("unknown group label '" + std::string(text) + "'");
}

bool PoolAssignment::contains(Pool pool) const {
  switch (pool) {
    case Pool::kA: return in_a;
    case Pool::kB: return in_b;
    case Pool::kC: return in_c;
  }
  return false;
}

std::string PoolAssignment::label() const {
  std::string s;
  if (in_a) s += 'A';
  if (in_b) s += 'B';
  if (in_c) s += 'C';
  return s;
}

std::vector<PoolAssignment> classify_pools(std::span<const SampleBox> boxes) {
  std::vector<PoolAssignment> out;
  out.reserve(boxes.size());
  for (const SampleBox& box : boxes) {
    out.push_back({box.box_id, box.index >= 0.0, box.index >= 0.5,
                   box.index >= 1.0});
  }
  return out;
}

std::vector<SampleBox> pool_members(std::span<const SampleBox> boxes,
                                    std::span<const PoolAssignment> pools,
                                    Pool pool) {
  if (boxes.size() != pools.size()) {
    throw std::invalid_argument("boxes and pool assignments differ in length");
  }
  std::vector<SampleBox> members;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (pools[i].contains(pool)) members.push_back(boxes[i]);
  }
  return members;
}

std::vector<std::size_t> quantile_bin_sizes(std::size_t n, std::size_t n_quantiles) {
  if (n_quantiles == 0) throw std::invalid_argument("need at least one bin");
  std::vector<std::size_t> sizes(n_quantiles, n / n_quantiles);
  for (std::size_t k = 0; k < n % n_quantiles; ++k) ++sizes[k];
  return sizes;
}

std::vector<SampleBox> draw_quantile_sample(std::span<const SampleBox> pool,
                                            std::size_t n_quantiles,
                                            std::uint64_t seed,
                                            std::string_view label) {
  if (n_quantiles == 0 || pool.size() < n_quantiles) {
    throw std::invalid_argument("pool of " + std::to_string(pool.size()) +
                                " boxes cannot fill " +
                                std::to_string(n_quantiles) + " quantile bins");
  }
  std::vector<SampleBox> ranked(pool.begin(), pool.end());
  std::sort(ranked.begin(), ranked.end(),
            [](const SampleBox& a, const SampleBox& b) {
              if (a.pct_urban_change != b.pct_urban_change) {
                return a.pct_urban_change < b.pct_urban_change;
              }
              return a.box_id < b.box_id;
            });

  Rng rng(seed, "sample/" + std::string(label));
  std::vector<SampleBox> drawn;
  drawn.reserve(n_quantiles);
  std::size_t start = 0;
  for (const std::size_t size : quantile_bin_sizes(ranked.size(), n_quantiles)) {
    drawn.push_back(ranked[start + rng.below(size)]);
    start += size;
  }
  return drawn;
}

}  // namespace landbayes
