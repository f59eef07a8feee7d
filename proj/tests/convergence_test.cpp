#include "landbayes/convergence.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"

namespace landbayes {
namespace {

std::vector<FitResult> two_group_fits(const std::vector<double>& alphas,
                                      const std::vector<std::pair<double, double>>& all,
                                      const std::vector<std::pair<double, double>>& last) {
  std::vector<FitResult> fits;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const auto form = CbForm::asymmetric_normal(alphas[i]);
    fits.push_back({form, "all_cycles", all[i].first, all[i].second, 100});
    fits.push_back({form, "final_cycles", last[i].first, last[i].second, 30});
  }
  return fits;
}

TEST(CbValue, Examples) {
  EXPECT_EQ(cb_value(0.4, 0.4, CbForm::adjusted_normal()), 1.0);
  EXPECT_EQ(cb_value(0.4, 0.4, CbForm::asymmetric_normal(0.0)), 1.0);
  EXPECT_EQ(cb_value(0.4, 0.4, CbForm::triangular()), 1.0);
  EXPECT_NEAR(cb_value(0.7, 0.3, CbForm::triangular()), 0.6, 1e-15);
  EXPECT_EQ(cb_value(0.5, 0.25, CbForm::asymmetric_normal(0.25)), 1.0);
  EXPECT_NEAR(cb_value(0.875, 0.125, CbForm::asymmetric_normal(0.25)),
              std::exp(-0.5), 1e-15);
  EXPECT_NEAR(std::exp(-0.5), 0.6065, 1e-4);
}

TEST(CbValue, NormalisationPeak) {
  EXPECT_NEAR(kHalfSdNormalPeak, 1.0 / (std::sqrt(2.0 * std::numbers::pi) * 0.5), 1e-15);
  EXPECT_NEAR(kHalfSdNormalPeak, 0.797885, 1e-6);
}

TEST(CbValue, Errors) {
  EXPECT_THROW(cb_value(1.1, 0.5, CbForm::triangular()), std::invalid_argument);
  EXPECT_THROW(cb_value(0.5, -0.1, CbForm::adjusted_normal()), std::invalid_argument);
  EXPECT_THROW(CbForm::asymmetric_normal(1.5), std::invalid_argument);
  EXPECT_THROW(CbForm::asymmetric_normal(-0.1), std::invalid_argument);
}

TEST(CbForm, Labels) {
  EXPECT_EQ(CbForm::triangular().label(), "triangular");
  EXPECT_EQ(CbForm::asymmetric_normal(0.25).label(), "alpha=0.25");
  EXPECT_EQ(asymmetric_forms(std::vector<double>{0, 0.5}).size(), 2u);
}

TEST(CbValueProperty, BoundsAndPeaks) {
  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double ppv = u(gen), npv = u(gen), alpha = u(gen);
    for (const auto& form : {CbForm::triangular(), CbForm::adjusted_normal(),
                             CbForm::asymmetric_normal(alpha)}) {
      const double v = cb_value(ppv, npv, form);
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    EXPECT_EQ(cb_value(ppv, npv, CbForm::adjusted_normal()),
              cb_value(ppv, npv, CbForm::asymmetric_normal(0.0)));
    EXPECT_EQ(cb_value(ppv, npv, CbForm::triangular()),
              cb_value(npv, ppv, CbForm::triangular()));
  }
}

TEST(CbValue, AsymmetryBreaksSymmetry) {
  const auto form = CbForm::asymmetric_normal(0.25);
  EXPECT_EQ(cb_value(0.6, 0.35, form), 1.0);
  EXPECT_LT(cb_value(0.35, 0.6, form), 1.0);
}

TEST(FitNormalMl, Examples) {
  const auto fit = fit_normal_ml(std::vector<double>{0.4, 0.5, 0.6});
  EXPECT_NEAR(fit.mu, 0.5, 1e-15);
  EXPECT_NEAR(fit.sigma, std::sqrt(0.02 / 3.0), 1e-15);
  EXPECT_NEAR(fit.sigma, 0.08165, 1e-5);
  EXPECT_FALSE(fit.degenerate);
  // 0.1 * 3 rounds, so a naive mean of {0.1, 0.1, 0.1} leaves sigma > 0.
  const auto tenths = fit_normal_ml(std::vector<double>(7, 0.1));
  EXPECT_EQ(tenths.mu, 0.1);
  EXPECT_EQ(tenths.sigma, 0.0);
  const auto flat = fit_normal_ml(std::vector<double>{0.7, 0.7, 0.7});
  EXPECT_EQ(flat.sigma, 0.0);
  EXPECT_TRUE(flat.degenerate);
  EXPECT_THROW(fit_normal_ml(std::vector<double>{0.1}), std::invalid_argument);
}

TEST(FitNormalMl, RecoversSeededNormal) {
  std::mt19937_64 gen(42);
  std::normal_distribution<double> n(0.55, 0.34);
  std::vector<double> xs(10000);
  for (auto& x : xs) x = n(gen);
  const auto fit = fit_normal_ml(xs);
  EXPECT_NEAR(fit.mu, 0.55, 0.01);
  EXPECT_NEAR(fit.sigma, 0.34, 0.01);
}

TEST(FitNormalMlProperty, MatchesGridSearch) {
  std::mt19937_64 gen(43);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> xs(2 + gen() % 49);
    for (auto& x : xs) x = u(gen);
    const auto fit = fit_normal_ml(xs);
    const auto grid = oracle::grid_search_normal(xs);
    EXPECT_LE(std::abs(fit.mu - grid.mu), grid.mu_step);
    EXPECT_LE(std::abs(fit.sigma - grid.sigma), grid.sigma_step);
  }
}

TEST(FitForms, OneFitPerFormAndGroup) {
  std::vector<RunRecord> runs;
  for (int b = 0; b < 5; ++b) {
    for (const int cycle : {10, 20}) {
      runs.push_back({b, Pool::kA, cycle, 0.5 + 0.05 * b, 0.3 + 0.01 * cycle});
    }
  }
  const auto forms = asymmetric_forms(std::vector<double>{0.0, 0.5});
  const auto groups = default_robustness_groups(20);
  const auto fits = fit_forms(runs, forms, groups);
  ASSERT_EQ(fits.size(), 4u);
  EXPECT_EQ(fits[0].group, "all_cycles");
  EXPECT_EQ(fits[0].n, 10u);
  EXPECT_EQ(fits[1].group, "final_cycles");
  EXPECT_EQ(fits[1].n, 5u);
  EXPECT_EQ(fits[2].form, forms[1]);
}

TEST(DominanceTable, ScoresAreAntisymmetric) {
  std::mt19937_64 gen(44);
  std::uniform_real_distribution<double> mu(0.2, 0.8), sd(0.05, 0.4);
  std::vector<FitResult> fits;
  for (const double a : {0.0, 0.5, 1.0}) {
    for (const char* g : {"g1", "g2", "g3"}) {
      fits.push_back({CbForm::asymmetric_normal(a), g, mu(gen), sd(gen), 10});
    }
  }
  const auto table = dominance_table(fits);
  for (const auto& row : table.rows) {
    ASSERT_EQ(row.scores.size(), 6u);
    for (const auto& s : row.scores) {
      const auto mirror = std::find_if(row.scores.begin(), row.scores.end(),
                                       [&](const PairScore& t) { return t.m == s.k && t.k == s.m; });
      ASSERT_NE(mirror, row.scores.end());
      EXPECT_EQ(s.score, -mirror->score);
    }
  }
}

TEST(DominanceTable, IdenticalFitsHaveZeroRobustness) {
  const auto fits = two_group_fits({0.0, 0.5}, {{0.6, 0.2}, {0.4, 0.3}},
                                   {{0.6, 0.2}, {0.45, 0.3}});
  const auto table = dominance_table(fits);
  EXPECT_EQ(table.rows[0].robustness, 0.0);
  EXPECT_GT(table.rows[1].robustness, 0.0);
}

TEST(DominanceTable, UniformDominatorWins) {
  const auto fits = two_group_fits({0.0, 0.25, 0.5}, {{0.7, 0.3}, {0.52, 0.1}, {0.4, 0.2}},
                                   {{0.75, 0.35}, {0.52, 0.1}, {0.3, 0.25}});
  const auto table = dominance_table(fits);
  ASSERT_TRUE(table.uniform_dominator.has_value());
  EXPECT_EQ(*table.uniform_dominator, 1u);
  EXPECT_EQ(table.selected, 1u);
}

TEST(DominanceTable, FallbacksWhenNoUniformDominator) {
  // Row 0 is closest to 0.5, row 1 has the most negative (0.5 - mu)/sigma.
  const auto fits = two_group_fits({0.0, 0.5}, {{0.55, 0.3}, {0.9, 0.2}},
                                   {{0.55, 0.3}, {0.95, 0.25}});
  const auto by_ratio = dominance_table(fits);
  EXPECT_FALSE(by_ratio.uniform_dominator.has_value());
  EXPECT_EQ(by_ratio.selected, 1u);
  const auto by_location = dominance_table(fits, SelectionFallback::kLocation);
  EXPECT_EQ(by_location.selected, 0u);
  EXPECT_FALSE(by_location.notes.empty());
}

TEST(DominanceTable, Errors) {
  auto fits = two_group_fits({0.0, 0.5}, {{0.5, 0.2}, {0.4, 0.3}}, {{0.5, 0.2}, {0.4, 0.3}});
  fits.pop_back();
  EXPECT_THROW(dominance_table(fits), std::invalid_argument);
  fits = two_group_fits({0.0}, {{0.5, 0.0}}, {{0.5, 0.2}});
  EXPECT_THROW(dominance_table(fits), std::invalid_argument);
  EXPECT_THROW(dominance_table({}), std::invalid_argument);
}

TEST(DominanceTable, PublishedLocationScaleEstimates) {
  // Location/scale estimates for the asymmetric forms across all cycles and
  // after the final cycle, as published for the reference study area.
  const std::vector<double> alphas{0.0, 0.25, 0.5, 0.75, 1.0};
  const auto fits = two_group_fits(
      alphas,
      {{.5985, .3027}, {.5571, .3411}, {.4764, .3740}, {.3651, .3685}, {.2443, .3092}},
      {{.5067, .3114}, {.5537, .3416}, {.5608, .3861}, {.5019, .4128}, {.3834, .3772}});
  const auto table = dominance_table(fits);
  const auto& row = table.rows[1];
  ASSERT_EQ(row.scores[0].m, 0u);
  const double want = (0.5 - .5571) / .3411 - (0.5 - .5537) / .3416;
  EXPECT_NEAR(row.scores[0].score, want, 1e-12);
  EXPECT_NEAR(row.scores[0].score, -0.0102, 5e-5);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (i != 1) EXPECT_LT(row.robustness, table.rows[i].robustness);
  }
}

TEST(PpPlot, ValuesAtFittedQuantilesLieOnDiagonal) {
  const double mu = 0.6, sigma = 0.2;
  std::vector<double> xs;
  for (int i = 0; i < 200; ++i) {
    xs.push_back(mu + sigma * oracle::normal_quantile((i + 0.5) / 200.0));
  }
  const auto curve = pp_plot(xs, mu, sigma);
  ASSERT_EQ(curve.points.size(), 200u);
  for (const auto& p : curve.points) EXPECT_NEAR(p.fitted, p.empirical, 1e-9);
  EXPECT_NEAR(curve.net_gain, 0.0, 1e-9);
  EXPECT_TRUE(curve.warnings.empty());
}

TEST(PpPlot, FittedAboveEmpiricalGivesPositiveGain) {
  std::vector<double> xs;
  for (int i = 0; i < 100; ++i) xs.push_back(0.5 + 0.2 * oracle::normal_quantile((i + 0.5) / 100.0));
  EXPECT_GT(pp_plot(xs, 0.4, 0.2).net_gain, 0.0);
  EXPECT_LT(pp_plot(xs, 0.6, 0.2).net_gain, 0.0);
}

TEST(PpPlot, CrossingNearestHalf) {
  // Heavier tails than the fit: the curve crosses the diagonal at the centre.
  std::vector<double> xs;
  for (int i = 0; i < 101; ++i) {
    const double z = oracle::normal_quantile((i + 0.5) / 101.0);
    xs.push_back(0.5 + 0.1 * z * (1.0 + 0.5 * std::abs(z)));
  }
  const auto curve = pp_plot(xs, 0.5, 0.1);
  ASSERT_TRUE(curve.prevalence_estimate.has_value());
  EXPECT_NEAR(*curve.prevalence_estimate, 0.5, 0.02);
}

TEST(PpPlotProperty, GainIndependentOfOrder) {
  std::mt19937_64 gen(45);
  std::normal_distribution<double> n(0.5, 0.2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> xs(50);
    for (auto& x : xs) x = n(gen);
    const double gain = pp_plot(xs, 0.45, 0.25).net_gain;
    std::shuffle(xs.begin(), xs.end(), gen);
    EXPECT_EQ(pp_plot(xs, 0.45, 0.25).net_gain, gain);
  }
}

TEST(PpPlot, SmallSampleWarns) {
  const std::vector<double> xs{0.1, 0.2, 0.3};
  const auto curve = pp_plot(xs, 0.2, 0.1);
  EXPECT_EQ(curve.points.size(), 3u);
  EXPECT_FALSE(curve.warnings.empty());
  EXPECT_THROW(pp_plot(std::vector<double>{}, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(pp_plot(xs, 0.2, 0.0), std::invalid_argument);
}

TEST(CbTimeline, SingleRunPerCycle) {
  const std::vector<RunRecord> runs{{0, Pool::kA, 10, 0.7, 0.3}, {0, Pool::kA, 20, 0.6, 0.4}};
  const std::vector<CbForm> forms{CbForm::triangular()};
  const auto t = cb_dominance_timeline(runs, forms);
  ASSERT_EQ(t.cycles, (std::vector<int>{10, 20}));
  EXPECT_NEAR(t.mean_cb[0][0], 0.6, 1e-15);
  EXPECT_NEAR(t.mean_cb[1][0], 0.8, 1e-15);
}

TEST(CbTimeline, EqualPredictiveValuesGiveOne) {
  std::vector<RunRecord> runs;
  for (int b = 0; b < 4; ++b) {
    for (const int c : {1, 2, 3}) runs.push_back({b, Pool::kB, c, 0.1 * (b + c), 0.1 * (b + c)});
  }
  const std::vector<CbForm> forms{CbForm::adjusted_normal(), CbForm::asymmetric_normal(0.0)};
  const auto t = cb_dominance_timeline(runs, forms);
  for (const auto& row : t.mean_cb) {
    for (const double v : row) EXPECT_EQ(v, 1.0);
  }
}

TEST(CbTimeline, PlantedDriftMatchesClosedForm) {
  // The gap shrinks from 0.6 to 0.1; each form's mean is exp(-2 (gap - a)^2).
  const std::vector<int> cycles{1, 2, 3, 4, 5, 6};
  std::vector<RunRecord> runs;
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    const double gap = 0.6 - 0.1 * i;
    for (int b = 0; b < 3; ++b) runs.push_back({b, Pool::kA, cycles[i], 0.45 + gap / 2, 0.45 - gap / 2});
  }
  const std::vector<double> alphas{0.0, 0.25, 0.5};
  const auto forms = asymmetric_forms(alphas);
  const auto t = cb_dominance_timeline(runs, forms);
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    const double gap = 0.6 - 0.1 * i;
    for (std::size_t f = 0; f < alphas.size(); ++f) {
      EXPECT_NEAR(t.mean_cb[i][f], std::exp(-2 * (gap - alphas[f]) * (gap - alphas[f])), 1e-12);
    }
    const auto best = std::max_element(t.mean_cb[i].begin(), t.mean_cb[i].end()) -
                      t.mean_cb[i].begin();
    const auto nearest = std::min_element(alphas.begin(), alphas.end(), [&](double a, double b) {
                           return std::abs(gap - a) < std::abs(gap - b);
                         }) - alphas.begin();
    EXPECT_EQ(best, nearest);
  }
}

TEST(CbTimeline, MissingCycleIsSkippedWithWarning) {
  const std::vector<RunRecord> runs{{0, Pool::kA, 10, 0.7, 0.3}};
  const std::vector<CbForm> forms{CbForm::triangular()};
  const std::vector<int> cycles{10, 20};
  const auto t = cb_dominance_timeline(runs, forms, cycles);
  EXPECT_EQ(t.cycles, std::vector<int>{10});
  EXPECT_EQ(t.warnings.size(), 1u);
}

TEST(AnalyzeConvergence, OmitsEmptyScopes) {
  std::mt19937_64 gen(46);
  std::uniform_real_distribution<double> u(0.2, 0.8);
  std::vector<RunRecord> runs;
  for (int b = 0; b < 12; ++b) {
    for (const int c : {100, 200}) {
      runs.push_back({b, b % 2 ? Pool::kA : Pool::kB, c, u(gen), u(gen)});
    }
  }
  const auto analysis = analyze_convergence(runs, {});
  ASSERT_EQ(analysis.scopes.size(), 3u);
  EXPECT_EQ(analysis.scopes[0].scope, "all");
  EXPECT_EQ(analysis.scopes[2].scope, "B");
  ASSERT_EQ(analysis.notes.size(), 1u);
  EXPECT_NE(analysis.notes[0].find("scope C"), std::string::npos);
  const auto& all = analysis.scopes[0];
  EXPECT_EQ(all.fits.size(), 10u);
  EXPECT_EQ(all.selected_values.size(), runs.size());
  EXPECT_EQ(all.selected, all.dominance.rows[all.dominance.selected].form);
}

TEST(AnalyzeConvergence, DropsFormsWithConstantCb) {
  // Final-cycle gaps of 0.4 and 0.6 sit symmetrically about 0.5, so only
  // the alpha = 0.5 form is constant in that group.
  std::vector<RunRecord> runs;
  for (int b = 0; b < 6; ++b) {
    runs.push_back({b, Pool::kA, 1, 0.4 + 0.05 * b, 0.3});
    runs.push_back({b, Pool::kA, 2, b % 2 ? 0.65 : 0.7, b % 2 ? 0.25 : 0.1});
  }
  const auto analysis = analyze_convergence(runs, {});
  const auto& all = analysis.scopes.front();
  EXPECT_EQ(all.fits.size(), 8u);
  for (const auto& f : all.fits) EXPECT_NE(f.form.alpha, 0.5);
  EXPECT_NE(all.selected.alpha, 0.5);
  bool noted = false;
  for (const auto& n : analysis.notes) noted |= n.find("alpha=0.5 dropped") != std::string::npos;
  EXPECT_TRUE(noted);
}

}  // namespace
}  // namespace landbayes
