#include "mixkern/mixup.hpp"

#include <stdexcept>

#include "mixkern/errors.hpp"

namespace mixkern {

std::pair<std::vector<double>, double> mixup_pair(
    const std::vector<double>& x1, double y1, const std::vector<double>& x2,
    double y2, double eta) {
  if (x1.size() != x2.size())
    throw DimensionMismatch("mixup_pair: parents of different dimension");
  if (!(eta >= 0.0 && eta <= 1.0))
    throw EtaOutOfRange("mixup_pair: eta must be in [0,1]");
  std::vector<double> x(x1.size());
  for (std::size_t k = 0; k < x.size(); ++k)
    x[k] = (1.0 - eta) * x1[k] + eta * x2[k];
  return {std::move(x), (1.0 - eta) * y1 + eta * y2};
}

LabeledDataset augment(const LabeledDataset& base, const MixupConfig& cfg) {
  if (base.size() < 2)
    throw TooFewExamples("augment needs at least 2 base examples");
  for (double y : base.labels)
    if (y != 1.0 && y != -1.0)
      throw LabelDomainError("augment expects binary base labels in {-1,+1}");
  if (!(cfg.beta_a > 0.0 && cfg.beta_b > 0.0))
    throw std::invalid_argument("beta parameters must be > 0");

  LabeledDataset out = base;
  out.features.reserve(base.size() + cfg.count);
  out.labels.reserve(base.size() + cfg.count);
  Rng rng(cfg.seed);
  const std::size_t n = base.size();
  for (std::size_t k = 0; k < cfg.count; ++k) {
    const std::size_t i = rng.uniform_index(n);
    std::size_t j = rng.uniform_index(n - 1);
    if (j >= i) ++j;  // ordered pair, no self-pairing
    const double eta = rng.beta(cfg.beta_a, cfg.beta_b);
    auto [x, y] = mixup_pair(base.features[i], base.labels[i],
                             base.features[j], base.labels[j], eta);
    out.features.push_back(std::move(x));
    out.labels.push_back(y);
  }
  return out;
}

}  // namespace mixkern
