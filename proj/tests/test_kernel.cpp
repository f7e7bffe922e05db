#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "mixkern/errors.hpp"
#include "mixkern/kernel.hpp"
#include "mixkern/rng.hpp"

using namespace mixkern;

namespace {

std::vector<std::vector<double>> random_points(Rng& rng, std::size_t n,
                                               std::size_t d) {
  std::vector<std::vector<double>> xs(n, std::vector<double>(d));
  for (auto& x : xs)
    for (auto& v : x) v = rng.normal();
  return xs;
}

}  // namespace

TEST_CASE("kernel evaluations") {
  const std::vector<double> a{1.0, 2.0}, b{3.0, -1.0};
  CHECK(kernel_eval(KernelSpec::rbf(0.7), a, a) == doctest::Approx(1.0));
  CHECK(kernel_eval(KernelSpec::linear(), a, b) == doctest::Approx(1.0));
  const std::vector<double> e1{1.0, 0.0};
  CHECK(kernel_eval(KernelSpec::polynomial(2, 1.0), e1, e1) == doctest::Approx(4.0));
  // rbf convention: exp(-|x-x'|^2 / (2 sigma^2))
  CHECK(kernel_eval(KernelSpec::rbf(2.0), a, b) ==
        doctest::Approx(std::exp(-(4.0 + 9.0) / 8.0)));
  const std::vector<double> c3{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(kernel_eval(KernelSpec::linear(), a, c3), DimensionMismatch);
  CHECK_THROWS(KernelSpec::rbf(0.0));
  CHECK_THROWS(KernelSpec::polynomial(0, 1.0));
  CHECK_THROWS(KernelSpec::polynomial(2, -1.0));
}

TEST_CASE("gram diagonal and R_mx") {
  const std::vector<std::vector<double>> pts{{3.0, 4.0}};
  CHECK(gram_diag(KernelSpec::linear(), pts)[0] == doctest::Approx(25.0));
  CHECK(gram_diag(KernelSpec::polynomial(2, 0.0), {{1.0, 1.0}})[0] ==
        doctest::Approx(4.0));
  Rng rng(1);
  const auto xs = random_points(rng, 7, 3);
  const Gram g(KernelSpec::rbf(1.3), xs, true);
  for (std::size_t i = 0; i < xs.size(); ++i)
    CHECK(g.diag(i) == doctest::Approx(1.0));
  CHECK(g.r_max() == doctest::Approx(1.0));
  const Gram gl(KernelSpec::linear(), {{3.0, 4.0}, {0.1, 0.0}}, false);
  CHECK(gl.r_max() == doctest::Approx(5.0));
  CHECK(r_max(gram_diag(KernelSpec::linear(), {{3.0, 4.0}, {0.1, 0.0}})) ==
        doctest::Approx(5.0));
}

TEST_CASE("gram matrices are positive semidefinite") {
  Rng rng(2);
  const std::vector<KernelSpec> kernels{KernelSpec::rbf(0.9),
                                        KernelSpec::polynomial(3, 0.5),
                                        KernelSpec::linear()};
  for (const auto& spec : kernels) {
    const auto xs = random_points(rng, 15, 4);
    const Gram g(spec, xs, true);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> v(xs.size());
      for (auto& e : v) e = rng.normal();
      double quad = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
          quad += v[i] * v[j] * g.at(i, j);
      CHECK(quad >= -1e-8);
    }
  }
}

TEST_CASE("cached and on-demand gram agree") {
  Rng rng(3);
  const auto xs = random_points(rng, 10, 3);
  const Gram cached(KernelSpec::rbf(1.1), xs, true);
  const Gram lazy(KernelSpec::rbf(1.1), xs, false);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j)
      CHECK(cached.at(i, j) == lazy.at(i, j));
  std::vector<double> acc1(xs.size(), 0.0), acc2(xs.size(), 0.0);
  cached.add_scaled_row(4, 0.7, acc1);
  lazy.add_scaled_row(4, 0.7, acc2);
  for (std::size_t j = 0; j < xs.size(); ++j)
    CHECK(acc1[j] == doctest::Approx(acc2[j]).epsilon(1e-15));
}

TEST_CASE("predict is linear in the coefficients") {
  Rng rng(4);
  DualModel m;
  m.kernel = KernelSpec::rbf(1.0);
  m.anchors = random_points(rng, 6, 2);
  m.coeffs.assign(6, 0.0);
  m.scale = 0.25;
  const auto x = random_points(rng, 1, 2)[0];
  CHECK(predict(m, x) == 0.0);

  for (auto& c : m.coeffs) c = rng.normal();
  DualModel doubled = m;
  for (auto& c : doubled.coeffs) c *= 2.0;
  for (int k = 0; k < 20; ++k) {
    const auto xq = random_points(rng, 1, 2)[0];
    CHECK(predict(doubled, xq) == doctest::Approx(2.0 * predict(m, xq)));
  }

  // single anchor: f(x) = scale * c * k(x1, x)
  DualModel one;
  one.kernel = KernelSpec::linear();
  one.anchors = {{2.0, 0.0}};
  one.coeffs = {1.5};
  one.scale = 1.0 / 0.3;
  CHECK(predict(one, std::vector<double>{1.0, 1.0}) ==
        doctest::Approx(1.5 * 2.0 / 0.3));
}

TEST_CASE("rkhs norm: double sum, cached scores and quadratic-form bound") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    DualModel m;
    m.kernel = KernelSpec::rbf(1.4);
    m.anchors = random_points(rng, 8, 3);
    m.coeffs.resize(8);
    for (auto& c : m.coeffs) c = rng.normal();
    m.scale = 0.1 + rng.uniform_open01();

    const double direct = rkhs_norm_sq(m);
    CHECK(direct >= 0.0);
    // against scale * sum_j c_j f(anchor_j)
    std::vector<double> scores(8);
    for (std::size_t j = 0; j < 8; ++j) scores[j] = predict(m, m.anchors[j]);
    const double via_scores = rkhs_norm_sq_from_scores(m, scores);
    CHECK(std::abs(direct - via_scores) <=
          1e-12 * std::max(1.0, std::abs(direct)));
  }

  // zero coefficients and the single-anchor unit case
  DualModel z;
  z.kernel = KernelSpec::rbf(1.0);
  z.anchors = random_points(rng, 3, 2);
  z.coeffs.assign(3, 0.0);
  z.scale = 1.0;
  CHECK(rkhs_norm_sq(z) == 0.0);
  DualModel one;
  one.kernel = KernelSpec::rbf(1.0);
  one.anchors = {{0.3, -0.7}};
  one.coeffs = {1.0};
  one.scale = 1.0;
  CHECK(rkhs_norm_sq(one) == doctest::Approx(1.0));

  // parallelogram-style bound of the quadratic form
  DualModel a = z, b = z;
  a.coeffs = {1.0, -0.5, 0.25};
  b.coeffs = {-0.2, 0.9, 0.4};
  DualModel sum = z;
  sum.coeffs = {0.8, 0.4, 0.65};
  CHECK(rkhs_norm_sq(sum) <= 2.0 * rkhs_norm_sq(a) + 2.0 * rkhs_norm_sq(b) + 1e-12);
}

TEST_CASE("incremental score maintenance is exact") {
  Rng rng(6);
  const auto xs = random_points(rng, 12, 3);
  const Gram g(KernelSpec::rbf(0.8), xs, true);
  DualModel m;
  m.kernel = KernelSpec::rbf(0.8);
  m.anchors = xs;
  m.coeffs.assign(12, 0.0);
  for (auto& c : m.coeffs) c = rng.normal();
  m.scale = 0.5;

  std::vector<double> scores(12);
  for (std::size_t j = 0; j < 12; ++j) scores[j] = predict(m, xs[j]);

  const std::size_t i = 7;
  const double delta = 0.37;
  m.coeffs[i] += delta;
  std::vector<double> incr = scores;
  g.add_scaled_row(i, m.scale * delta, incr);
  for (std::size_t j = 0; j < 12; ++j)
    CHECK(predict(m, xs[j]) == doctest::Approx(incr[j]).epsilon(1e-13));
}

TEST_CASE("model serialization round-trips") {
  Rng rng(7);
  for (const KernelSpec& spec :
       {KernelSpec::rbf(1.25), KernelSpec::polynomial(3, 0.5),
        KernelSpec::linear()}) {
    DualModel m;
    m.kernel = spec;
    m.anchors = random_points(rng, 5, 4);
    m.coeffs.resize(5);
    for (auto& c : m.coeffs) c = rng.normal() * 1e3;
    m.scale = 1.0 / 3.0;
    m.lambda = 0.0123456789012345678;
    const std::string path = "/tmp/mixkern_model_test.txt";
    save_model(m, path);
    const DualModel r = load_model(path);
    CHECK(r.kernel.kind == m.kernel.kind);
    CHECK(r.kernel.width == m.kernel.width);
    CHECK(r.kernel.degree == m.kernel.degree);
    CHECK(r.kernel.offset == m.kernel.offset);
    CHECK(r.scale == m.scale);
    CHECK(r.lambda == m.lambda);
    REQUIRE(r.anchors.size() == m.anchors.size());
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK(r.coeffs[j] == m.coeffs[j]);
      for (std::size_t k = 0; k < 4; ++k)
        CHECK(r.anchors[j][k] == m.anchors[j][k]);
    }
    std::remove(path.c_str());
  }
}
