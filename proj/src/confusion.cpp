#include "landbayes/confusion.hpp"

#include <cmath>
#include <stdexcept>

#include "landbayes/kernels/kernels.hpp"

namespace landbayes {

ConfusionMatrix build_confusion(const BinaryGrid& sim, const BinaryGrid& obs) {
  if (!sim.info().same_shape(obs.info())) {
    throw std::invalid_argument("simulated and observed maps differ in shape");
  }
  const auto c = kernels::parallel::count_confusion(sim.cells(), obs.cells());
  ConfusionMatrix m{c.tp, c.fp, c.fn, c.tn};
  if (m.total() == 0) {
    throw std::invalid_argument("no cell is non-excluded in both maps");
  }
  return m;
}

AgreementRates agreement_rates(const ConfusionMatrix& m) {
  if (m.total() == 0) throw std::invalid_argument("empty confusion matrix");
  AgreementRates r;
  if (m.observed_positive() > 0) {
    r.sensitivity = static_cast<double>(m.tp) /
                    static_cast<double>(m.observed_positive());
  }
  if (m.observed_negative() > 0) {
    r.tn_rate = static_cast<double>(m.tn) /
                static_cast<double>(m.observed_negative());
  }
  r.specificity_std = r.tn_rate;
  const auto total = static_cast<double>(m.total());
  r.prevalence_observed = static_cast<double>(m.observed_positive()) / total;
  r.pcm = static_cast<double>(m.tp + m.tn) / total;
  return r;
}

std::optional<double> perfect_agreement_gap(const AgreementRates& rates) {
  if (!rates.sensitivity || !rates.tn_rate) return std::nullopt;
  return std::abs(*rates.sensitivity - *rates.tn_rate);
}

}  // namespace landbayes
