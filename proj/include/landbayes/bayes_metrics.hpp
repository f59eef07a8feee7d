#ifndef LANDBAYES_BAYES_METRICS_HPP_
#define LANDBAYES_BAYES_METRICS_HPP_

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "landbayes/confusion.hpp"

namespace landbayes {

// Two readings of the likelihood-ratio and predictive-value formulas.
//
// kPaperLiteral is the literal reading of the reproduced method, where TN/(TN+FP) plays the role of "1 - specificity" and the PPV
// denominator uses (1 - sensitivity). kStandard is textbook Bayes with
// specificity = TN/(TN+FP). Every output row records which was used.
enum class Convention { kPaperLiteral, kStandard };

std::string_view convention_name(Convention convention);  // "paper" | "standard"
Convention parse_convention(std::string_view text);

// Empty optionals are undefined (0/0). A zero denominator with a positive
// numerator yields +inf, which callers treat as a flag.
struct LikelihoodRatios {
  std::optional<double> lr_pos;
  std::optional<double> lr_neg;
  Convention convention = Convention::kPaperLiteral;
};

struct PredictiveValues {
  std::optional<double> ppv;
  std::optional<double> npv;
  double prevalence = 0.0;
  Convention convention = Convention::kPaperLiteral;
};

bool is_infinite(const std::optional<double>& value);

// paper:    LR+ = sens / tn_rate,       LR- = (1 - sens) / (1 - tn_rate)
// standard: LR+ = sens / (1 - tn_rate), LR- = (1 - sens) / tn_rate
LikelihoodRatios likelihood_ratios(const AgreementRates& rates,
                                   Convention convention);

// LR+ / LR-. +inf when LR- is zero and LR+ positive.
std::optional<double> diagnostic_odds_ratio(const LikelihoodRatios& lr);

PredictiveValues predictive_values(double sensitivity, double tn_rate,
                                   double prevalence, Convention convention);

// Undefined rates give undefined predictive values. Throws
// std::invalid_argument when prevalence is outside [0, 1].
PredictiveValues predictive_values(const AgreementRates& rates,
                                   double prevalence, Convention convention);

std::vector<PredictiveValues> prevalence_sweep(const AgreementRates& rates,
                                               std::span<const double> grid,
                                               Convention convention);

// n evenly spaced points from 0 to 1 inclusive.
std::vector<double> unit_grid(std::size_t n);

}  // namespace landbayes

#endif  // LANDBAYES_BAYES_METRICS_HPP_
