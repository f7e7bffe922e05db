#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace mixkern {

// Mann-Whitney AUROC: fraction of (positive, negative) pairs with
// score_pos > score_neg, ties counted 1/2. Labels are +-1; throws
// DegenerateLabels when one class is absent. Dispatches between the
// definitional pair count (small) and the O(m log m) rank formula.
double auroc(std::span<const double> scores, std::span<const double> labels);

// Both routes exposed so tests can equate them.
double auroc_pairwise(std::span<const double> scores,
                      std::span<const double> labels);
double auroc_by_ranks(std::span<const double> scores,
                      std::span<const double> labels);

struct CVPlan {
  enum class Scheme { kLeaveOneOut, kKFold };
  Scheme scheme = Scheme::kLeaveOneOut;
  std::size_t k = 2;  // KFold only, >= 2
  std::uint64_t seed = 0;
};

using FoldSplit = std::pair<std::vector<std::size_t>, std::vector<std::size_t>>;

// (train indices, test indices) per fold; folds partition [n].
std::vector<FoldSplit> cv_folds(std::size_t n, const CVPlan& plan);

}  // namespace mixkern
