// Independent reference computations used only by tests. Nothing here calls
// into the code paths being checked.
#ifndef LANDBAYES_TESTS_ORACLES_HPP_
#define LANDBAYES_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "landbayes/raster.hpp"

namespace landbayes::oracle {

struct Counts {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
};

// Per-cell (row, col) walk with explicit branches.
inline Counts brute_force_confusion(const BinaryGrid& sim, const BinaryGrid& obs) {
  Counts c;
  for (std::size_t r = 0; r < sim.rows(); ++r) {
    for (std::size_t col = 0; col < sim.cols(); ++col) {
      const Cell s = sim.at(r, col);
      const Cell o = obs.at(r, col);
      if (s == Cell::kExcluded) continue;
      if (o == Cell::kExcluded) continue;
      if (s == Cell::kOne && o == Cell::kOne) c.tp += 1;
      if (s == Cell::kOne && o == Cell::kZero) c.fp += 1;
      if (s == Cell::kZero && o == Cell::kOne) c.fn += 1;
      if (s == Cell::kZero && o == Cell::kZero) c.tn += 1;
    }
  }
  return c;
}

inline BinaryGrid random_binary(std::mt19937_64& gen, std::size_t rows,
                                std::size_t cols, double p_one,
                                double p_excluded) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Cell> cells(rows * cols);
  for (auto& c : cells) {
    const double x = u(gen);
    c = x < p_excluded ? Cell::kExcluded
                       : (x < p_excluded + p_one ? Cell::kOne : Cell::kZero);
  }
  GridInfo info;
  info.rows = rows;
  info.cols = cols;
  return BinaryGrid(info, std::move(cells));
}

// Simpson's rule on each interval between consecutive breakpoints. Exact for
// functions that are quadratic between breakpoints.
inline double integrate_piecewise_quadratic(const std::function<double(double)>& f,
                                            std::vector<double> breakpoints) {
  std::sort(breakpoints.begin(), breakpoints.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    if (b <= a) continue;
    total += (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
  }
  return total;
}

inline double composite_simpson(const std::function<double(double)>& f, double a,
                                double b, int panels) {
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

inline double normal_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

// Roots of N(mu1, s1) = N(mu2, s2) from the log-density quadratic.
inline std::vector<double> normal_crossings(double mu1, double s1, double mu2,
                                            double s2) {
  const double a = 1.0 / (2 * s2 * s2) - 1.0 / (2 * s1 * s1);
  const double b = mu1 / (s1 * s1) - mu2 / (s2 * s2);
  const double c = mu2 * mu2 / (2 * s2 * s2) - mu1 * mu1 / (2 * s1 * s1) +
                   std::log(s2 / s1);
  if (std::abs(a) < 1e-15) return {-c / b};
  const double disc = b * b - 4 * a * c;
  const double r = std::sqrt(disc);
  std::vector<double> roots{(-b - r) / (2 * a), (-b + r) / (2 * a)};
  std::sort(roots.begin(), roots.end());
  return roots;
}

struct GridFit {
  double mu = 0.0, sigma = 0.0, mu_step = 0.0, sigma_step = 0.0;
};

// Maximizes the normal log-likelihood over a steps x steps (mu, sigma) grid.
inline GridFit grid_search_normal(const std::vector<double>& xs, int steps = 200) {
  const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
  const double lo = *lo_it, hi = *hi_it;
  const double range = std::max(hi - lo, 1e-12);
  GridFit best;
  best.mu_step = range / (steps - 1);
  best.sigma_step = range / steps;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < steps; ++i) {
    const double mu = lo + i * best.mu_step;
    for (int j = 1; j <= steps; ++j) {
      const double sigma = j * best.sigma_step;
      double ll = -static_cast<double>(xs.size()) * std::log(sigma);
      for (const double x : xs) ll -= (x - mu) * (x - mu) / (2 * sigma * sigma);
      if (ll > best_ll) {
        best_ll = ll;
        best.mu = mu;
        best.sigma = sigma;
      }
    }
  }
  return best;
}

// Inverse standard normal CDF by bisection on erfc; test-only.
inline double normal_quantile(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace landbayes::oracle

#endif  // LANDBAYES_TESTS_ORACLES_HPP_
