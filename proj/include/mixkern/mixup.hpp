#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mixkern/dataset.hpp"

namespace mixkern {

struct MixupConfig {
  std::size_t count = 0;   // synthetic examples to add
  double beta_a = 1.0;     // eta ~ Beta(beta_a, beta_b); (1,1) = uniform
  double beta_b = 1.0;
  std::uint64_t seed = 0;
};

// ((1-eta) x1 + eta x2, (1-eta) y1 + eta y2), eta in [0, 1].
std::pair<std::vector<double>, double> mixup_pair(
    const std::vector<double>& x1, double y1, const std::vector<double>& x2,
    double y2, double eta);

// Base examples followed by cfg.count synthetic ones, each from an ordered
// pair (i, j) drawn uniformly with i != j and eta ~ Beta(beta_a, beta_b).
// Deterministic given cfg.seed. Base labels must be binary {-1,+1}.
LabeledDataset augment(const LabeledDataset& base, const MixupConfig& cfg);

}  // namespace mixkern
