#include "mixkern/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "mixkern/errors.hpp"
#include "mixkern/rng.hpp"

namespace mixkern {

namespace {

void count_classes(std::span<const double> labels, std::size_t& pos,
                   std::size_t& neg) {
  pos = neg = 0;
  for (double y : labels) {
    if (y > 0.0) ++pos;
    else ++neg;
  }
  if (pos == 0 || neg == 0)
    throw DegenerateLabels("auroc needs at least one example of each class");
}

}  // namespace

double auroc_pairwise(std::span<const double> scores,
                      std::span<const double> labels) {
  std::size_t pos, neg;
  count_classes(labels, pos, neg);
  double wins = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] <= 0.0) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] > 0.0) continue;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / (static_cast<double>(pos) * static_cast<double>(neg));
}

double auroc_by_ranks(std::span<const double> scores,
                      std::span<const double> labels) {
  std::size_t pos, neg;
  count_classes(labels, pos, neg);
  const std::size_t m = scores.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Midranks over tie groups.
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < m) {
    std::size_t j = i;
    while (j + 1 < m && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (std::size_t k = i; k <= j; ++k)
      if (labels[order[k]] > 0.0) rank_sum_pos += midrank;
    i = j + 1;
  }
  const double p = static_cast<double>(pos), q = static_cast<double>(neg);
  return (rank_sum_pos - p * (p + 1.0) / 2.0) / (p * q);
}

double auroc(std::span<const double> scores, std::span<const double> labels) {
  std::size_t pos, neg;
  count_classes(labels, pos, neg);
  if (pos * neg <= 250000) return auroc_pairwise(scores, labels);
  return auroc_by_ranks(scores, labels);
}

std::vector<FoldSplit> cv_folds(std::size_t n, const CVPlan& plan) {
  if (n < 2) throw std::invalid_argument("cv_folds needs n >= 2");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);

  std::vector<std::vector<std::size_t>> tests;
  if (plan.scheme == CVPlan::Scheme::kLeaveOneOut) {
    tests.reserve(n);
    for (std::size_t i = 0; i < n; ++i) tests.push_back({i});
  } else {
    if (plan.k < 2 || plan.k > n)
      throw std::invalid_argument("k-fold needs 2 <= k <= n");
    Rng rng(plan.seed);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const std::size_t j = i + rng.uniform_index(n - i);
      std::swap(idx[i], idx[j]);
    }
    tests.resize(plan.k);
    const std::size_t base = n / plan.k, extra = n % plan.k;
    std::size_t at = 0;
    for (std::size_t f = 0; f < plan.k; ++f) {
      const std::size_t sz = base + (f < extra ? 1 : 0);
      tests[f].assign(idx.begin() + at, idx.begin() + at + sz);
      at += sz;
    }
  }

  std::vector<FoldSplit> folds;
  folds.reserve(tests.size());
  std::vector<char> in_test(n);
  for (auto& t : tests) {
    std::fill(in_test.begin(), in_test.end(), 0);
    for (std::size_t i : t) in_test[i] = 1;
    std::vector<std::size_t> train;
    train.reserve(n - t.size());
    for (std::size_t i = 0; i < n; ++i)
      if (!in_test[i]) train.push_back(i);
    folds.emplace_back(std::move(train), std::move(t));
  }
  return folds;
}

}  // namespace mixkern
