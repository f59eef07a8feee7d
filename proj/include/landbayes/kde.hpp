#ifndef LANDBAYES_KDE_HPP_
#define LANDBAYES_KDE_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace landbayes {

inline constexpr double kSqrt5 = 2.23606797749978969640917366873128;
inline constexpr double kEpanechnikovPeak = 3.0 / (4.0 * kSqrt5);

// Unit-variance Epanechnikov kernel, supported on [-sqrt(5), sqrt(5)].
inline double epanechnikov(double z) {
  if (z < -kSqrt5 || z > kSqrt5) return 0.0;
  // kSqrt5^2 / 5 rounds just above 1; keep the edge at zero.
  return std::max(0.0, kEpanechnikovPeak * (1.0 - z * z / 5.0));
}

// Silverman's rule of thumb, 0.9 * min(sd, IQR/1.34) * n^(-1/5), with the
// sample sd (n-1 divisor) and the linearly interpolated IQR. When the IQR is
// zero the sd alone is used. Throws if all samples are identical.
double silverman_bandwidth(std::span<const double> samples);

// Fixed-bandwidth Epanechnikov density estimate. Immutable once built.
class KdeModel {
 public:
  KdeModel(std::vector<double> samples, double bandwidth);

  std::span<const double> samples() const { return samples_; }
  double bandwidth() const { return bandwidth_; }
  std::size_t size() const { return samples_.size(); }

  double evaluate(double x) const;
  // Vectorized over xs with the OpenMP kernel.
  std::vector<double> evaluate(std::span<const double> xs) const;

  // Interval outside of which the density is exactly zero.
  double support_min() const { return min_ - kSqrt5 * bandwidth_; }
  double support_max() const { return max_ + kSqrt5 * bandwidth_; }

 private:
  std::vector<double> samples_;
  double bandwidth_;
  double min_;
  double max_;
};

// Needs at least two finite samples. Without a bandwidth, Silverman's rule
// is used.
KdeModel fit_kde(std::vector<double> samples,
                 std::optional<double> bandwidth = std::nullopt);

class NoCrossingError : public std::runtime_error {
 public:
  NoCrossingError() : std::runtime_error("densities do not cross in interval") {}
};

struct Crossing {
  double x = 0.0;
  double density = 0.0;  // common density value at the crossing
};

struct Intersection {
  double root = 0.0;
  std::vector<Crossing> crossings;  // every sign change found, ascending x
};

inline constexpr std::size_t kIntersectionScanPoints = 512;
inline constexpr double kIntersectionTolerance = 1e-6;

// Finds x in [lo, hi] with f_pos(x) = f_neg(x). The difference is scanned on
// 512 evenly spaced points and each sign change is refined by bisection to
// 1e-6. If the sign change spans a stretch where the difference is exactly
// zero (both densities vanish), the midpoint of that stretch is returned.
// With several crossings the one with the largest density wins.
// Throws NoCrossingError when the difference never changes sign.
Intersection density_intersection(const KdeModel& f_pos, const KdeModel& f_neg,
                                  double lo = 0.0, double hi = 1.0);

}  // namespace landbayes

#endif  // LANDBAYES_KDE_HPP_
