#include "landbayes/bayes_metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace landbayes {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::optional<double> ratio(double numerator, double denominator) {
  if (denominator > 0.0) return numerator / denominator;
  if (numerator > 0.0) return kInf;
  return std::nullopt;
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
  }
}

}  // namespace

std::string_view convention_name(Convention convention) {
  return convention == Convention::kPaperLiteral ? "paper" : "standard";
}

Convention parse_convention(std::string_view text) {
  if (text == "paper" || text == "paper_literal") return Convention::kPaperLiteral;
  if (text == "standard") return Convention::kStandard;
  throw std::invalid_argument("unknown convention '" + std::string(text) +
                              "' (expected paper or standard)");
}

bool is_infinite(const std::optional<double>& value) {
  return value && std::isinf(*value);
}

LikelihoodRatios likelihood_ratios(const AgreementRates& rates,
                                   Convention convention) {
  LikelihoodRatios lr;
  lr.convention = convention;
  if (!rates.sensitivity || !rates.tn_rate) return lr;
  const double sens = *rates.sensitivity;
  const double tn_rate = *rates.tn_rate;
  if (convention == Convention::kPaperLiteral) {
    lr.lr_pos = ratio(sens, tn_rate);
    lr.lr_neg = ratio(1.0 - sens, 1.0 - tn_rate);
  } else {
    lr.lr_pos = ratio(sens, 1.0 - tn_rate);
    lr.lr_neg = ratio(1.0 - sens, tn_rate);
  }
  return lr;
}

std::optional<double> diagnostic_odds_ratio(const LikelihoodRatios& lr) {
  if (!lr.lr_pos || !lr.lr_neg) return std::nullopt;
  const double pos = *lr.lr_pos;
  const double neg = *lr.lr_neg;
  if (std::isinf(pos) && std::isinf(neg)) return std::nullopt;
  if (std::isinf(pos)) return kInf;
  if (std::isinf(neg)) return 0.0;
  return ratio(pos, neg);
}

PredictiveValues predictive_values(double sensitivity, double tn_rate,
                                   double prevalence, Convention convention) {
  check_probability(sensitivity, "sensitivity");
  check_probability(tn_rate, "tn_rate");
  check_probability(prevalence, "prevalence");
  PredictiveValues pv;
  pv.prevalence = prevalence;
  pv.convention = convention;

  const double pos_hit = sensitivity * prevalence;
  const double neg_base = tn_rate * (1.0 - prevalence);
  if (convention == Convention::kPaperLiteral) {
    const double ppv_den = pos_hit + (1.0 - sensitivity) * (1.0 - prevalence);
    const double npv_den = neg_base + pos_hit;
    if (ppv_den > 0.0) pv.ppv = pos_hit / ppv_den;
    if (npv_den > 0.0) pv.npv = neg_base / npv_den;
  } else {
    const double ppv_den = pos_hit + (1.0 - tn_rate) * (1.0 - prevalence);
    const double npv_den = neg_base + (1.0 - sensitivity) * prevalence;
    if (ppv_den > 0.0) pv.ppv = pos_hit / ppv_den;
    if (npv_den > 0.0) pv.npv = neg_base / npv_den;
  }
  return pv;
}

PredictiveValues predictive_values(const AgreementRates& rates,
                                   double prevalence, Convention convention) {
  check_probability(prevalence, "prevalence");
  if (!rates.sensitivity || !rates.tn_rate) {
    PredictiveValues pv;
    pv.prevalence = prevalence;
    pv.convention = convention;
    return pv;
  }
  return predictive_values(*rates.sensitivity, *rates.tn_rate, prevalence,
                           convention);
}

std::vector<PredictiveValues> prevalence_sweep(const AgreementRates& rates,
                                               std::span<const double> grid,
                                               Convention convention) {
  std::vector<PredictiveValues> out;
  out.reserve(grid.size());
  for (const double prevalence : grid) {
    out.push_back(predictive_values(rates, prevalence, convention));
  }
  return out;
}

std::vector<double> unit_grid(std::size_t n) {
  if (n < 2) throw std::invalid_argument("unit grid needs at least 2 points");
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return grid;
}

}  // namespace landbayes
