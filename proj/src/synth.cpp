#include "landbayes/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "landbayes/rng.hpp"

namespace landbayes {

void SynthConfig::validate() const {
  if (rows == 0 || cols == 0) throw std::invalid_argument("empty synthetic grid");
  const auto unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!unit(change_fraction) || !unit(exclusion_fraction)) {
    throw std::invalid_argument("fractions must lie in [0,1]");
  }
  if (change_fraction + exclusion_fraction > 1.0) {
    throw std::invalid_argument("change_fraction + exclusion_fraction exceeds 1");
  }
  if (!(score_noise >= 0.0) || !std::isfinite(score_noise)) {
    throw std::invalid_argument("score_noise must be a non-negative number");
  }
  if (!(planted_offset >= -1.0 && planted_offset <= 1.0)) {
    throw std::invalid_argument("planted_offset must lie in [-1,1]");
  }
}

SynthPair generate_pair(const SynthConfig& config) {
  config.validate();
  const std::size_t n = config.rows * config.cols;
  const auto n_excluded =
      static_cast<std::size_t>(std::floor(config.exclusion_fraction * static_cast<double>(n)));
  const auto n_change =
      static_cast<std::size_t>(std::floor(config.change_fraction * static_cast<double>(n)));

  // Partial Fisher-Yates: the first n_excluded + n_change slots are drawn.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng cells_rng(config.seed, "synth/cells");
  for (std::size_t i = 0; i < n_excluded + n_change; ++i) {
    const std::size_t j = i + cells_rng.below(n - i);
    std::swap(order[i], order[j]);
  }
  std::vector<Cell> cells(n, Cell::kZero);
  for (std::size_t i = 0; i < n_excluded; ++i) cells[order[i]] = Cell::kExcluded;
  for (std::size_t i = n_excluded; i < n_excluded + n_change; ++i) {
    cells[order[i]] = Cell::kOne;
  }

  GridInfo info;
  info.rows = config.rows;
  info.cols = config.cols;
  info.cell_size = 30.0;

  std::vector<double> scores(n, 0.0);
  std::vector<bool> excluded(n, false);
  Rng noise_rng(config.seed, "synth/scores");
  for (std::size_t i = 0; i < n; ++i) {
    if (cells[i] == Cell::kExcluded) {
      excluded[i] = true;
      continue;
    }
    const double base = cells[i] == Cell::kOne ? 1.0 : 0.0;
    const double noise =
        config.score_noise > 0.0 ? noise_rng.normal(0.0, config.score_noise) : 0.0;
    scores[i] = std::clamp(base + noise, 0.0, 1.0);
  }
  return {BinaryGrid(info, std::move(cells)),
          ScoreGrid(info, std::move(scores), std::move(excluded))};
}

std::vector<RunRecord> generate_run_table(const SynthConfig& config,
                                          std::size_t n_boxes,
                                          std::span<const int> cycles) {
  config.validate();
  if (cycles.empty()) return {};
  if (*std::min_element(cycles.begin(), cycles.end()) <= 0) {
    throw std::invalid_argument("training cycles must be positive");
  }
  const double min_cycle = *std::min_element(cycles.begin(), cycles.end());
  static constexpr Pool kGroups[] = {Pool::kA, Pool::kB, Pool::kC};

  std::vector<RunRecord> runs(n_boxes * cycles.size());
  const auto boxes = static_cast<std::int64_t>(n_boxes);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < boxes; ++b) {
    Rng rng(config.seed, "runs/" + std::to_string(b));
    for (std::size_t c = 0; c < cycles.size(); ++c) {
      const double sd = config.score_noise * std::sqrt(min_cycle / cycles[c]);
      const double gap =
          std::clamp(config.planted_offset + rng.normal(0.0, sd), -1.0, 1.0);
      const double half = std::abs(gap) / 2.0;
      const double mid = half + rng.uniform() * (1.0 - 2.0 * half);
      RunRecord& run = runs[static_cast<std::size_t>(b) * cycles.size() + c];
      run.box_id = static_cast<int>(b);
      run.group = kGroups[b % 3];
      run.cycle = cycles[c];
      run.ppv = std::clamp(mid + gap / 2.0, 0.0, 1.0);
      run.npv = std::clamp(mid - gap / 2.0, 0.0, 1.0);
    }
  }
  return runs;
}

}  // namespace landbayes
