#ifndef LANDBAYES_CONFUSION_HPP_
#define LANDBAYES_CONFUSION_HPP_

#include <cstdint>
#include <optional>

#include "landbayes/raster.hpp"

namespace landbayes {

// Simulated (rows) against observed (columns) transition counts.
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t simulated_positive() const { return tp + fp; }  // SP
  std::uint64_t simulated_negative() const { return tn + fn; }  // SN
  std::uint64_t observed_positive() const { return tp + fn; }   // RP
  std::uint64_t observed_negative() const { return tn + fp; }   // RN
  std::uint64_t total() const { return tp + fp + fn + tn; }     // GT

  bool operator==(const ConfusionMatrix&) const = default;
};

// Rates that need a zero marginal are left empty rather than coerced.
//
// tn_rate is TN/(TN+FP). Standard usage calls this the specificity; the
// convention this toolkit reproduces labels the same number "1 - specificity".
// It is stored once, and specificity_std is the same value under its
// textbook name.
struct AgreementRates {
  std::optional<double> sensitivity;      // TP/(TP+FN)
  std::optional<double> tn_rate;          // TN/(TN+FP)
  std::optional<double> specificity_std;  // == tn_rate
  double prevalence_observed = 0.0;       // (TP+FN)/GT
  double pcm = 0.0;                       // (TP+TN)/GT, proportion correct
};

// Cells count only when non-excluded in both maps. Throws on shape mismatch
// or when no cell survives the joint mask.
ConfusionMatrix build_confusion(const BinaryGrid& sim, const BinaryGrid& obs);

// Throws std::invalid_argument if the matrix is empty.
AgreementRates agreement_rates(const ConfusionMatrix& m);

// |sensitivity - tn_rate|: zero for perfect agreement between the two rates,
// and also for the coin-toss classifier at 0.5/0.5. Empty if either rate is.
std::optional<double> perfect_agreement_gap(const AgreementRates& rates);

}  // namespace landbayes

#endif  // LANDBAYES_CONFUSION_HPP_
