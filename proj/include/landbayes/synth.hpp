#ifndef LANDBAYES_SYNTH_HPP_
#define LANDBAYES_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "landbayes/convergence.hpp"
#include "landbayes/raster.hpp"

namespace landbayes {

// Synthetic landscapes with known ground truth, for desk-scale checks.
struct SynthConfig {
  std::size_t rows = 100;
  std::size_t cols = 100;
  std::uint64_t seed = 1;
  double change_fraction = 0.1;
  double exclusion_fraction = 0.1;
  double score_noise = 0.1;
  double planted_offset = 0.25;  // target PPV - NPV of generated runs

  // Throws std::invalid_argument for infeasible settings.
  void validate() const;
};

struct SynthPair {
  BinaryGrid obs;
  ScoreGrid scores;
};

// floor(exclusion_fraction * n) excluded cells and floor(change_fraction * n)
// change cells are placed by a seeded shuffle; every other cell is 0. Scores
// are the observed value plus Normal(0, score_noise), clamped to [0, 1].
SynthPair generate_pair(const SynthConfig& config);

// Emulated training runs. Box b belongs to group A, B, C by b mod 3. At each
// cycle the gap PPV - NPV is planted_offset + Normal(0, sd), clamped to
// [-1, 1], with sd = score_noise * sqrt(min_cycle / cycle) so that noise
// shrinks as training proceeds; the midpoint (PPV + NPV)/2 is uniform over
// the range that keeps both in [0, 1]. Each box draws from its own stream,
// Rng(seed, "runs/<box>"). Cycles must be positive.
std::vector<RunRecord> generate_run_table(const SynthConfig& config,
                                          std::size_t n_boxes,
                                          std::span<const int> cycles);

}  // namespace landbayes

#endif  // LANDBAYES_SYNTH_HPP_
