#include <doctest.h>

#include <cmath>

#include "mixkern/checks.hpp"
#include "mixkern/errors.hpp"
#include "mixkern/mixup.hpp"

using namespace mixkern;

TEST_CASE("mixup_pair endpoints and midpoint") {
  const std::vector<double> x1{0.0, 0.0}, x2{2.0, 4.0};
  auto [xa, ya] = mixup_pair(x1, 1.0, x2, -1.0, 0.0);
  CHECK(xa == x1);
  CHECK(ya == 1.0);
  auto [xb, yb] = mixup_pair(x1, 1.0, x2, -1.0, 1.0);
  CHECK(xb == x2);
  CHECK(yb == -1.0);
  auto [xm, ym] = mixup_pair(x1, 1.0, x2, -1.0, 0.5);
  CHECK(xm == std::vector<double>{1.0, 2.0});
  CHECK(ym == 0.0);
  CHECK_THROWS_AS(mixup_pair(x1, 1.0, {1.0}, -1.0, 0.5), DimensionMismatch);
  CHECK_THROWS_AS(mixup_pair(x1, 1.0, x2, -1.0, 1.5), EtaOutOfRange);
  CHECK_THROWS_AS(mixup_pair(x1, 1.0, x2, -1.0, -0.1), EtaOutOfRange);
}

TEST_CASE("augment size, label range and validation") {
  const LabeledDataset base = checks::two_gaussians(23, 3, 2.0, 5);
  MixupConfig cfg;
  cfg.count = 0;
  cfg.seed = 9;
  const LabeledDataset same = augment(base, cfg);
  CHECK(same.size() == base.size());
  CHECK(same.features == base.features);
  CHECK(same.labels == base.labels);

  cfg.count = 50;
  const LabeledDataset aug = augment(base, cfg);
  CHECK(aug.size() == 73);
  for (double y : aug.labels) CHECK(std::abs(y) <= 1.0);
  // the base prefix is untouched
  for (std::size_t i = 0; i < base.size(); ++i)
    CHECK(aug.labels[i] == base.labels[i]);

  LabeledDataset tiny;
  tiny.features = {{1.0}};
  tiny.labels = {1.0};
  CHECK_THROWS_AS(augment(tiny, cfg), TooFewExamples);
  LabeledDataset fractional = base;
  fractional.labels[0] = 0.25;
  CHECK_THROWS_AS(augment(fractional, cfg), LabelDomainError);
}

TEST_CASE("synthetic points lie on the segment between their parents") {
  const LabeledDataset base = checks::two_gaussians(40, 4, 1.5, 11);
  MixupConfig cfg;
  cfg.count = 500;
  cfg.seed = 21;
  const LabeledDataset aug = augment(base, cfg);
  // feature-wise bounding box of the whole base set contains each synthetic
  // point (a necessary segment condition checkable without the pair ids)
  std::vector<double> lo(base.dim(), 1e300), hi(base.dim(), -1e300);
  for (const auto& x : base.features)
    for (std::size_t k = 0; k < x.size(); ++k) {
      lo[k] = std::min(lo[k], x[k]);
      hi[k] = std::max(hi[k], x[k]);
    }
  for (std::size_t i = base.size(); i < aug.size(); ++i)
    for (std::size_t k = 0; k < base.dim(); ++k) {
      CHECK(aug.features[i][k] >= lo[k] - 1e-12);
      CHECK(aug.features[i][k] <= hi[k] + 1e-12);
    }
}

TEST_CASE("synthetic labels re-derive the mixing weight") {
  // with distinct parent labels, eta = (1 - y_new)/2 when parents are (+1,-1)
  // or (1 + y_new)/2 when (-1,+1); verify the feature combination uses the
  // same eta by checking collinearity against both parents
  const LabeledDataset base = checks::two_gaussians(30, 2, 3.0, 13);
  MixupConfig cfg;
  cfg.count = 300;
  cfg.seed = 31;
  const LabeledDataset aug = augment(base, cfg);
  std::size_t verified = 0;
  for (std::size_t s = base.size(); s < aug.size(); ++s) {
    const auto& xs = aug.features[s];
    const double ys = aug.labels[s];
    // find a parent pair (i, j) consistent with this synthetic point
    bool found = false;
    for (std::size_t i = 0; i < base.size() && !found; ++i) {
      for (std::size_t j = 0; j < base.size() && !found; ++j) {
        if (i == j) continue;
        if (base.labels[i] == base.labels[j]) continue;
        const double eta = (ys - base.labels[i]) /
                           (base.labels[j] - base.labels[i]);
        if (eta < -1e-9 || eta > 1.0 + 1e-9) continue;
        bool match = true;
        for (std::size_t k = 0; k < xs.size(); ++k) {
          const double want =
              (1.0 - eta) * base.features[i][k] + eta * base.features[j][k];
          if (std::abs(want - xs[k]) > 1e-9) { match = false; break; }
        }
        if (match) { found = true; ++verified; }
      }
    }
    // same-label pairs produce y = +-1 and cannot be re-derived; skip them
    if (std::abs(ys) == 1.0) continue;
    CHECK(found);
  }
  CHECK(verified > 100);
}

TEST_CASE("augment is deterministic given the seed") {
  const LabeledDataset base = checks::two_gaussians(25, 3, 2.0, 17);
  MixupConfig cfg;
  cfg.count = 80;
  cfg.seed = 777;
  const LabeledDataset a = augment(base, cfg);
  const LabeledDataset b = augment(base, cfg);
  CHECK(a.features == b.features);
  CHECK(a.labels == b.labels);
  cfg.seed = 778;
  const LabeledDataset c = augment(base, cfg);
  CHECK(a.features != c.features);
}

TEST_CASE("beta draws have the right mean") {
  Rng rng(99);
  SUBCASE("uniform eta for (1,1)") {
    double sum = 0.0;
    for (int k = 0; k < 100000; ++k) sum += rng.beta(1.0, 1.0);
    CHECK(std::abs(sum / 100000 - 0.5) < 0.01);
  }
  SUBCASE("skewed (2,5)") {
    double sum = 0.0;
    for (int k = 0; k < 100000; ++k) sum += rng.beta(2.0, 5.0);
    CHECK(std::abs(sum / 100000 - 2.0 / 7.0) < 0.01);
  }
  SUBCASE("shape below one (0.5, 0.5)") {
    double sum = 0.0;
    for (int k = 0; k < 100000; ++k) {
      const double b = rng.beta(0.5, 0.5);
      CHECK(b >= 0.0);
      CHECK(b <= 1.0);
      sum += b;
    }
    CHECK(std::abs(sum / 100000 - 0.5) < 0.01);
  }
}
