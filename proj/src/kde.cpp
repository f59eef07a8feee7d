#include "landbayes/kde.hpp"

#include <algorithm>
#include <numeric>

#include "landbayes/kernels/kernels.hpp"

namespace landbayes {
namespace {

// Linear interpolation between order statistics (Hyndman-Fan type 7).
double quantile_sorted(std::span<const double> sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

double silverman_bandwidth(std::span<const double> samples) {
  const auto n = static_cast<double>(samples.size());
  if (samples.size() < 2) {
    throw std::invalid_argument("bandwidth needs at least two samples");
  }
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (const double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1.0));

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);

  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  if (!(spread > 0.0)) {
    throw std::invalid_argument(
        "all samples identical: bandwidth would be zero, pass one explicitly");
  }
  return 0.9 * spread * std::pow(n, -0.2);
}

KdeModel::KdeModel(std::vector<double> samples, double bandwidth)
    : samples_(std::move(samples)), bandwidth_(bandwidth) {
  if (samples_.size() < 2) {
    throw std::invalid_argument("density estimate needs at least two samples");
  }
  if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) {
    throw std::invalid_argument("bandwidth must be positive and finite");
  }
  for (const double x : samples_) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite sample");
  }
  const auto [mn, mx] = std::minmax_element(samples_.begin(), samples_.end());
  min_ = *mn;
  max_ = *mx;
}

double KdeModel::evaluate(double x) const {
  double sum = 0.0;
  for (const double sample : samples_) {
    sum += epanechnikov((x - sample) / bandwidth_);
  }
  return sum / (static_cast<double>(samples_.size()) * bandwidth_);
}

std::vector<double> KdeModel::evaluate(std::span<const double> xs) const {
  std::vector<double> out(xs.size());
  kernels::parallel::kde_evaluate(samples_, bandwidth_, xs, out);
  return out;
}

KdeModel fit_kde(std::vector<double> samples, std::optional<double> bandwidth) {
  if (samples.size() < 2) {
    throw std::invalid_argument("density estimate needs at least two samples");
  }
  const double h = bandwidth ? *bandwidth : silverman_bandwidth(samples);
  return KdeModel(std::move(samples), h);
}

Intersection density_intersection(const KdeModel& f_pos, const KdeModel& f_neg,
                                  double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("empty search interval");
  const auto diff = [&](double x) { return f_pos.evaluate(x) - f_neg.evaluate(x); };

  std::vector<double> xs(kIntersectionScanPoints);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    xs[k] = lo + (hi - lo) * static_cast<double>(k) /
                     static_cast<double>(xs.size() - 1);
  }
  const auto pos = f_pos.evaluate(xs);
  const auto neg = f_neg.evaluate(xs);

  Intersection result;
  std::size_t last = xs.size();  // index of the last nonzero-sign point
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const int s = sign(pos[k] - neg[k]);
    if (s == 0) continue;
    if (last != xs.size() && sign(pos[last] - neg[last]) == -s) {
      const int s_left = -s;
      // Upper edge of the region where the sign is still s_left.
      double a = xs[last], b = xs[k];
      while (b - a > kIntersectionTolerance / 4) {
        const double mid = 0.5 * (a + b);
        (sign(diff(mid)) == s_left ? a : b) = mid;
      }
      const double left_edge = 0.5 * (a + b);
      // Lower edge of the region where the sign is already s.
      a = xs[last];
      b = xs[k];
      while (b - a > kIntersectionTolerance / 4) {
        const double mid = 0.5 * (a + b);
        (sign(diff(mid)) == s ? b : a) = mid;
      }
      const double right_edge = 0.5 * (a + b);
      const double x = 0.5 * (left_edge + right_edge);
      result.crossings.push_back(
          {x, 0.5 * (f_pos.evaluate(x) + f_neg.evaluate(x))});
    }
    last = k;
  }
  if (result.crossings.empty()) throw NoCrossingError();

  const auto best = std::max_element(
      result.crossings.begin(), result.crossings.end(),
      [](const Crossing& a, const Crossing& b) { return a.density < b.density; });
  result.root = best->x;
  return result;
}

}  // namespace landbayes
