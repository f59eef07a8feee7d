#include "landbayes/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

#include "landbayes/format.hpp"

namespace landbayes {
namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

void check_unit(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " " + format_real(p) +
                                " outside [0,1]");
  }
}

}  // namespace

CbForm CbForm::asymmetric_normal(double alpha) {
  check_unit(alpha, "alpha");
  return {CbKind::kAsymmetricNormal, alpha};
}

std::string CbForm::kind_name() const {
  switch (kind) {
    case CbKind::kTriangular: return "triangular";
    case CbKind::kAdjustedNormal: return "adjusted_normal";
    case CbKind::kAsymmetricNormal: return "asymmetric_normal";
  }
  return "unknown";
}

std::string CbForm::label() const {
  if (kind == CbKind::kTriangular) return "triangular";
  return "alpha=" + format_real(kind == CbKind::kAdjustedNormal ? 0.0 : alpha);
}

double cb_value(double ppv, double npv, const CbForm& form) {
  check_unit(ppv, "ppv");
  check_unit(npv, "npv");
  const double gap = ppv - npv;
  switch (form.kind) {
    case CbKind::kTriangular:
      return 1.0 - std::abs(gap);
    case CbKind::kAdjustedNormal:
      return std::exp(-2.0 * gap * gap);
    case CbKind::kAsymmetricNormal: {
      const double shifted = gap - form.alpha;
      return std::exp(-2.0 * shifted * shifted);
    }
  }
  return 0.0;
}

std::vector<CbForm> asymmetric_forms(std::span<const double> alpha_grid) {
  std::vector<CbForm> forms;
  forms.reserve(alpha_grid.size());
  for (const double alpha : alpha_grid) {
    forms.push_back(CbForm::asymmetric_normal(alpha));
  }
  return forms;
}

NormalFit fit_normal_ml(std::span<const double> values) {
  if (values.size() < 2) {
    throw std::invalid_argument("normal fit needs at least two values");
  }
  // Identical values get an exact zero; summation rounding would otherwise
  // leave a spurious sigma near 1e-16.
  if (std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>()) ==
      values.end()) {
    return {values.front(), 0.0, true};
  }
  const auto n = static_cast<double>(values.size());
  const double mu = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (const double v : values) ss += (v - mu) * (v - mu);
  NormalFit fit{mu, std::sqrt(ss / n), false};
  fit.degenerate = !(fit.sigma > 0.0);
  return fit;
}

std::vector<RobustnessGroup> default_robustness_groups(int final_cycle) {
  return {
      {"all_cycles", [](int) { return true; }},
      {"final_cycles", [final_cycle](int cycle) { return cycle == final_cycle; }},
  };
}

std::vector<FitResult> fit_forms(std::span<const RunRecord> runs,
                                 std::span<const CbForm> forms,
                                 std::span<const RobustnessGroup> groups) {
  std::vector<FitResult> fits;
  fits.reserve(forms.size() * groups.size());
  std::vector<double> values;
  for (const CbForm& form : forms) {
    for (const RobustnessGroup& group : groups) {
      values.clear();
      for (const RunRecord& run : runs) {
        if (group.contains(run.cycle)) {
          values.push_back(cb_value(run.ppv, run.npv, form));
        }
      }
      if (values.size() < 2) {
        throw std::invalid_argument("robustness group '" + group.label +
                                    "' holds fewer than two runs");
      }
      const NormalFit fit = fit_normal_ml(values);
      fits.push_back({form, group.label, fit.mu, fit.sigma, values.size()});
    }
  }
  return fits;
}

DominanceTable dominance_table(std::span<const FitResult> fits,
                               SelectionFallback fallback) {
  DominanceTable table;
  std::vector<CbForm> forms;
  for (const FitResult& fit : fits) {
    if (std::find(table.groups.begin(), table.groups.end(), fit.group) ==
        table.groups.end()) {
      table.groups.push_back(fit.group);
    }
    if (std::find(forms.begin(), forms.end(), fit.form) == forms.end()) {
      forms.push_back(fit.form);
    }
  }
  if (forms.empty()) throw std::invalid_argument("no fits supplied");
  if (table.groups.size() < 2) {
    throw std::invalid_argument("dominance needs at least two robustness groups");
  }

  const std::size_t n_groups = table.groups.size();
  for (const CbForm& form : forms) {
    DominanceRow row;
    row.form = form;
    row.z.resize(n_groups);
    for (std::size_t g = 0; g < n_groups; ++g) {
      const auto it = std::find_if(fits.begin(), fits.end(), [&](const FitResult& f) {
        return f.form == form && f.group == table.groups[g];
      });
      if (it == fits.end()) {
        throw std::invalid_argument("missing fit for " + form.label() +
                                    " in group " + table.groups[g]);
      }
      if (!(it->sigma_hat > 0.0)) {
        throw std::invalid_argument("degenerate fit (sigma = 0) for " +
                                    form.label() + " in group " +
                                    table.groups[g]);
      }
      row.z[g] = (0.5 - it->mu_hat) / it->sigma_hat;
      row.location += std::abs(0.5 - it->mu_hat) / static_cast<double>(n_groups);
      row.scale += it->sigma_hat / static_cast<double>(n_groups);
    }
    for (std::size_t m = 0; m < n_groups; ++m) {
      for (std::size_t k = 0; k < n_groups; ++k) {
        if (m == k) continue;
        const double score = row.z[m] - row.z[k];
        row.scores.push_back({m, k, score});
        row.robustness = std::max(row.robustness, std::abs(score));
      }
    }
    table.rows.push_back(std::move(row));
  }

  for (std::size_t i = 0; i < table.rows.size() && !table.uniform_dominator; ++i) {
    const DominanceRow& a = table.rows[i];
    const bool dominates = std::all_of(
        table.rows.begin(), table.rows.end(), [&a](const DominanceRow& b) {
          return a.location <= b.location && a.scale <= b.scale &&
                 a.robustness <= b.robustness;
        });
    if (dominates) table.uniform_dominator = i;
  }

  if (table.uniform_dominator) {
    table.selected = *table.uniform_dominator;
    return table;
  }
  table.notes.emplace_back("no uniform dominator");
  const auto key = [fallback](const DominanceRow& row) {
    if (fallback == SelectionFallback::kLocation) return row.location;
    return std::accumulate(row.z.begin(), row.z.end(), 0.0) /
           static_cast<double>(row.z.size());
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    if (key(table.rows[i]) < key(table.rows[best])) best = i;
  }
  table.selected = best;
  table.notes.emplace_back(
      fallback == SelectionFallback::kLocation
          ? "selected by location criterion"
          : "selected by mean-variance ratio (0.5 - mu)/sigma");
  return table;
}

PPCurve pp_plot(std::span<const double> values, double mu, double sigma) {
  if (values.empty()) throw std::invalid_argument("P-P plot of an empty sample");
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("P-P plot needs a non-degenerate fit");
  }
  PPCurve curve;
  const std::size_t n = values.size();
  if (n < 10) {
    curve.warnings.push_back("only " + std::to_string(n) +
                             " values: P-P curve is coarse");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  curve.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    curve.points.push_back({p, normal_cdf((sorted[i] - mu) / sigma)});
  }

  for (std::size_t i = 0; i < n; ++i) {
    const PPPoint& a = curve.points[i];
    const double da = a.fitted - a.empirical;
    if (da == 0.0) {
      curve.crossings.push_back(a.empirical);
      continue;
    }
    if (i + 1 == n) break;
    const PPPoint& b = curve.points[i + 1];
    const double db = b.fitted - b.empirical;
    if (da * db < 0.0) {
      const double t = da / (da - db);
      curve.crossings.push_back(a.empirical + t * (b.empirical - a.empirical));
    }
  }
  if (!curve.crossings.empty()) {
    curve.prevalence_estimate = *std::min_element(
        curve.crossings.begin(), curve.crossings.end(),
        [](double a, double b) { return std::abs(a - 0.5) < std::abs(b - 0.5); });
  }

  double prev_p = 0.0;
  double prev_d = 0.0;
  for (const PPPoint& point : curve.points) {
    const double d = point.fitted - point.empirical;
    curve.net_gain += 0.5 * (point.empirical - prev_p) * (d + prev_d);
    prev_p = point.empirical;
    prev_d = d;
  }
  curve.net_gain += 0.5 * (1.0 - prev_p) * prev_d;
  return curve;
}

PPCurve pp_plot(std::span<const double> values, const FitResult& fit) {
  return pp_plot(values, fit.mu_hat, fit.sigma_hat);
}

CbTimeline cb_dominance_timeline(std::span<const RunRecord> runs,
                                 std::span<const CbForm> forms) {
  std::vector<int> cycles;
  for (const RunRecord& run : runs) cycles.push_back(run.cycle);
  std::sort(cycles.begin(), cycles.end());
  cycles.erase(std::unique(cycles.begin(), cycles.end()), cycles.end());
  return cb_dominance_timeline(runs, forms, cycles);
}

CbTimeline cb_dominance_timeline(std::span<const RunRecord> runs,
                                 std::span<const CbForm> forms,
                                 std::span<const int> cycles) {
  CbTimeline timeline;
  timeline.forms.assign(forms.begin(), forms.end());
  for (const int cycle : cycles) {
    std::vector<double> sums(forms.size(), 0.0);
    std::size_t count = 0;
    for (const RunRecord& run : runs) {
      if (run.cycle != cycle) continue;
      ++count;
      for (std::size_t f = 0; f < forms.size(); ++f) {
        sums[f] += cb_value(run.ppv, run.npv, forms[f]);
      }
    }
    if (count == 0) {
      timeline.warnings.push_back("cycle " + std::to_string(cycle) +
                                  " has no runs; skipped");
      continue;
    }
    for (double& s : sums) s /= static_cast<double>(count);
    timeline.cycles.push_back(cycle);
    timeline.mean_cb.push_back(std::move(sums));
    timeline.run_counts.push_back(count);
  }
  return timeline;
}

ConvergeAnalysis analyze_convergence(std::span<const RunRecord> runs,
                                     const ConvergeOptions& options) {
  if (runs.empty()) throw std::invalid_argument("empty run table");
  if (options.alpha_grid.empty()) throw std::invalid_argument("empty alpha grid");
  const int final_cycle =
      std::max_element(runs.begin(), runs.end(), [](const auto& a, const auto& b) {
        return a.cycle < b.cycle;
      })->cycle;
  const auto groups = default_robustness_groups(final_cycle);
  const auto forms = asymmetric_forms(options.alpha_grid);

  ConvergeAnalysis analysis;
  const std::vector<std::pair<std::string, std::optional<Pool>>> scopes = {
      {"all", std::nullopt}, {"A", Pool::kA}, {"B", Pool::kB}, {"C", Pool::kC}};
  for (const auto& [name, pool] : scopes) {
    std::vector<RunRecord> scoped;
    for (const RunRecord& run : runs) {
      if (!pool || run.group == *pool) scoped.push_back(run);
    }
    if (scoped.empty()) {
      analysis.notes.push_back("scope " + name + ": no runs, omitted");
      continue;
    }
    try {
      ScopeAnalysis scope;
      scope.scope = name;
      scope.fits = fit_forms(scoped, forms, groups);
      // A form whose C_b is constant in some group has no usable z score;
      // it leaves the comparison rather than sinking the whole scope.
      std::vector<CbForm> dropped;
      for (const FitResult& f : scope.fits) {
        if (!(f.sigma_hat > 0.0) &&
            std::find(dropped.begin(), dropped.end(), f.form) == dropped.end()) {
          dropped.push_back(f.form);
          analysis.notes.push_back("scope " + name + ": " + f.form.label() +
                                   " dropped, constant C_b in group " + f.group);
        }
      }
      std::erase_if(scope.fits, [&dropped](const FitResult& f) {
        return std::find(dropped.begin(), dropped.end(), f.form) != dropped.end();
      });
      if (scope.fits.empty()) {
        throw std::invalid_argument("every form has a degenerate fit");
      }
      scope.dominance = dominance_table(scope.fits, options.fallback);
      scope.selected = scope.dominance.rows[scope.dominance.selected].form;
      for (const RunRecord& run : scoped) {
        scope.selected_values.push_back(cb_value(run.ppv, run.npv, scope.selected));
      }
      const auto fit = std::find_if(
          scope.fits.begin(), scope.fits.end(), [&](const FitResult& f) {
            return f.form == scope.selected && f.group == groups.front().label;
          });
      scope.curve = pp_plot(scope.selected_values, *fit);
      analysis.scopes.push_back(std::move(scope));
    } catch (const std::invalid_argument& e) {
      if (!pool) throw;
      analysis.notes.push_back("scope " + name + ": " + e.what());
    }
  }
  return analysis;
}

}  // namespace landbayes
