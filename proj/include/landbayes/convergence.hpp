#ifndef LANDBAYES_CONVERGENCE_HPP_
#define LANDBAYES_CONVERGENCE_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "landbayes/sampling.hpp"

namespace landbayes {

// The Bayes convergence factor C_b measures how close PPV and NPV are:
//
//   triangular         1 - |ppv - npv|
//   adjusted normal    exp(-2 (ppv - npv)^2)
//   asymmetric normal  exp(-2 (ppv - npv - alpha)^2),  alpha in [0, 1]
//
// The normal forms are a N(0; ppv - npv (- alpha), 0.5) density rescaled by
// sqrt(2 pi) * 0.5 so the peak is 1. The adjusted normal form is the
// asymmetric form at alpha = 0.
enum class CbKind { kTriangular, kAdjustedNormal, kAsymmetricNormal };

struct CbForm {
  CbKind kind = CbKind::kAdjustedNormal;
  double alpha = 0.0;

  static CbForm triangular() { return {CbKind::kTriangular, 0.0}; }
  static CbForm adjusted_normal() { return {CbKind::kAdjustedNormal, 0.0}; }
  // Throws std::invalid_argument if alpha is outside [0, 1].
  static CbForm asymmetric_normal(double alpha);

  std::string kind_name() const;
  std::string label() const;  // "triangular", "alpha=0.25", ...

  bool operator==(const CbForm&) const = default;
};

// Peak height of the N(0.5) density, 1/(sqrt(2 pi) * 0.5). The normal forms
// above are divided by it.
inline constexpr double kHalfSdNormalPeak = 0.7978845608028654;

// Throws std::invalid_argument if ppv or npv lies outside [0, 1].
double cb_value(double ppv, double npv, const CbForm& form);

std::vector<CbForm> asymmetric_forms(std::span<const double> alpha_grid);

// Maximum-likelihood normal fit: sample mean and the divisor-N deviation.
struct NormalFit {
  double mu = 0.0;
  double sigma = 0.0;
  bool degenerate = false;  // sigma == 0
};

// Throws std::invalid_argument for fewer than two values.
NormalFit fit_normal_ml(std::span<const double> values);

// One simulation run's predictive values.
struct RunRecord {
  int box_id = 0;
  Pool group = Pool::kA;
  int cycle = 0;
  double ppv = 0.0;
  double npv = 0.0;
};

// A subset of training cycles used to test robustness of the fits.
struct RobustnessGroup {
  std::string label;
  std::function<bool(int cycle)> contains;
};

// {"all_cycles": every run, "final_cycles": runs at final_cycle}.
std::vector<RobustnessGroup> default_robustness_groups(int final_cycle);

struct FitResult {
  CbForm form;
  std::string group;  // robustness group label
  double mu_hat = 0.0;
  double sigma_hat = 0.0;
  std::size_t n = 0;
};

// One fit per (form, group), form-major. Throws if a group holds fewer than
// two runs.
std::vector<FitResult> fit_forms(std::span<const RunRecord> runs,
                                 std::span<const CbForm> forms,
                                 std::span<const RobustnessGroup> groups);

// How to pick a form when none wins all three sub-criteria.
enum class SelectionFallback {
  // Lowest mean over groups of (0.5 - mu)/sigma.
  kMeanVarianceRatio,
  // Lowest location criterion.
  kLocation,
};

struct PairScore {
  std::size_t m = 0;  // group indices into DominanceTable::groups
  std::size_t k = 0;
  double score = 0.0;  // z_m - z_k
};

struct DominanceRow {
  CbForm form;
  std::vector<double> z;  // (0.5 - mu)/sigma per group
  std::vector<PairScore> scores;
  double location = 0.0;    // mean over groups of |0.5 - mu|
  double scale = 0.0;       // mean over groups of sigma
  double robustness = 0.0;  // max over pairs of |z_m - z_k|
};

struct DominanceTable {
  std::vector<std::string> groups;
  std::vector<DominanceRow> rows;
  // Row that is best (ties allowed) on location, scale and robustness.
  std::optional<std::size_t> uniform_dominator;
  std::size_t selected = 0;
  std::vector<std::string> notes;
};

// For every form and ordered group pair (m, k), m != k, the score is
// z_m - z_k with z = (0.5 - mu)/sigma. Throws std::invalid_argument when a
// form lacks a fit in some group or a fit is degenerate.
DominanceTable dominance_table(
    std::span<const FitResult> fits,
    SelectionFallback fallback = SelectionFallback::kMeanVarianceRatio);

struct PPPoint {
  double empirical = 0.0;  // (i - 0.5)/n
  double fitted = 0.0;     // Phi((x_(i) - mu)/sigma)
};

struct PPCurve {
  std::vector<PPPoint> points;
  // Empirical coordinates where the curve crosses the diagonal.
  std::vector<double> crossings;
  // Crossing nearest 0.5; empty if the curve never crosses.
  std::optional<double> prevalence_estimate;
  // Signed trapezoid area of (fitted - empirical), with (0,0) and (1,1)
  // closing the curve. Positive when the fitted CDF lies above the diagonal.
  double net_gain = 0.0;
  std::vector<std::string> warnings;
};

// Throws std::invalid_argument for an empty sample or sigma <= 0. Fewer than
// ten values produce a warning.
PPCurve pp_plot(std::span<const double> values, double mu, double sigma);
PPCurve pp_plot(std::span<const double> values, const FitResult& fit);

struct CbTimeline {
  std::vector<int> cycles;
  std::vector<CbForm> forms;
  std::vector<std::vector<double>> mean_cb;  // [cycle][form]
  std::vector<std::size_t> run_counts;       // per cycle
  std::vector<std::string> warnings;
};

// Mean C_b per cycle and form over all boxes, cycles ascending.
CbTimeline cb_dominance_timeline(std::span<const RunRecord> runs,
                                 std::span<const CbForm> forms);
// Same over an explicit cycle list; cycles without runs are skipped with a
// warning.
CbTimeline cb_dominance_timeline(std::span<const RunRecord> runs,
                                 std::span<const CbForm> forms,
                                 std::span<const int> cycles);

// Full convergence analysis of a run table, per scope (all runs, then
// groups A, B, C).
struct ConvergeOptions {
  std::vector<double> alpha_grid{0.0, 0.25, 0.5, 0.75, 1.0};
  SelectionFallback fallback = SelectionFallback::kMeanVarianceRatio;
};

struct ScopeAnalysis {
  std::string scope;  // "all", "A", "B", "C"
  std::vector<FitResult> fits;
  DominanceTable dominance;
  CbForm selected;
  std::vector<double> selected_values;  // C_b of the selected form, all runs
  PPCurve curve;
};

struct ConvergeAnalysis {
  std::vector<ScopeAnalysis> scopes;
  std::vector<std::string> notes;  // scopes skipped and why
};

// Robustness groups are all cycles and the largest cycle in the table.
// A form whose fit is degenerate in some group is dropped from that scope
// with a note. Throws std::invalid_argument if the "all" scope cannot be
// analysed.
ConvergeAnalysis analyze_convergence(std::span<const RunRecord> runs,
                                     const ConvergeOptions& options);

}  // namespace landbayes

#endif  // LANDBAYES_CONVERGENCE_HPP_
