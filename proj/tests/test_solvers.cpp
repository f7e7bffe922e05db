#include <doctest.h>

#include <cmath>

#include "mixkern/checks.hpp"
#include "mixkern/errors.hpp"
#include "mixkern/mixup.hpp"
#include "mixkern/solvers.hpp"

using namespace mixkern;

namespace {

Problem gaussian_mixup_problem(std::size_t n_base, std::size_t n_mix,
                               std::uint64_t seed, double lambda_over_n = 1.0) {
  MixupConfig cfg;
  cfg.count = n_mix;
  cfg.seed = seed + 1;
  Problem p;
  p.data = augment(checks::two_gaussians(n_base, 2, 3.0, seed), cfg);
  p.loss = LossSpec::bce();
  p.kernel = KernelSpec::rbf(1.5);
  p.lambda = lambda_over_n / static_cast<double>(p.data.size());
  return p;
}

SolverState state_for(const Problem& p, std::uint64_t seed) {
  return make_state(p.data.size(),
                    1.0 / (p.lambda * static_cast<double>(p.data.size())), seed);
}

// Rebuild the score cache after the test poked alpha directly (resync would
// rightly trip its drift assertion on such a state).
void init_scores(SolverState& st, const Gram& gram, double unit) {
  std::fill(st.scores.begin(), st.scores.end(), 0.0);
  for (std::size_t i = 0; i < st.alpha.size(); ++i)
    if (st.alpha[i] != 0.0)
      gram.add_scaled_row(i, unit * st.alpha[i], st.scores);
}

}  // namespace

TEST_CASE("naive step: zero direction is a no-op") {
  Rng rng(1);
  Problem p = checks::random_problem(rng, 10, 20, 0.5, LossSpec::bce());
  Gram gram(p.kernel, p.data.features, true);
  SolverState st = state_for(p, 3);
  // alpha_i = u at the current scores (all zero) makes q vanish
  const std::size_t i = 2;
  st.alpha[i] = -mixup_loss_grad(p.loss, 0.0, p.data.labels[i]);
  const auto before_alpha = st.alpha;
  const auto before_scores = st.scores;
  const StepQuantities sq = sdca_naive_step(st, p, gram, i, 1e-10);
  CHECK(sq.q == 0.0);
  CHECK(st.alpha == before_alpha);
  CHECK(st.scores == before_scores);
}

TEST_CASE("naive step: eta clamps to 1 and jumps to u when s_bar ~ 1") {
  Problem p;
  p.data = checks::two_gaussians(8, 2, 2.0, 5);
  p.loss = LossSpec::bce();
  p.kernel = KernelSpec::rbf(1.0);
  p.lambda = 100.0;  // lambda n gamma >> K_ii
  Gram gram(p.kernel, p.data.features, true);
  SolverState st = make_state(8, 1.0 / (p.lambda * 8.0), 1);
  const std::size_t i = 0;
  const double u = -mixup_loss_grad(p.loss, 0.0, p.data.labels[i]);
  const StepQuantities sq = sdca_naive_step(st, p, gram, i, 1e-12);
  CHECK(sq.s_bar > 0.999);
  CHECK(st.alpha[i] == doctest::Approx(u).epsilon(1e-12));
}

TEST_CASE("single SDCA steps never decrease the exact dual") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const LossSpec loss =
        trial % 3 == 0   ? LossSpec::bce()
        : trial % 3 == 1 ? LossSpec::smoothed_hinge(0.5)
                         : LossSpec::quadratic_hinge(0.8);
    Problem p = checks::random_problem(rng, 8, 30, 0.5, loss);
    const std::size_t n = p.data.size();
    Gram gram(p.kernel, p.data.features, true);
    SolverState st = state_for(p, rng.next_u64());
    GridAuxCache aux(loss, n, 4.0);
    SolverOptions opt;
    // advance a few mixed steps first so states are generic
    for (int warm = 0; warm < 5; ++warm)
      sdca_approx_step(st, p, gram, st.rng.uniform_index(n), aux, opt);
    resync_scores(st, p, gram, SolverVariant::kApprox, nullptr);

    const double before = dual_naive(p, st.alpha, 1e-10);
    const std::size_t i = st.rng.uniform_index(n);
    if (trial % 2 == 0)
      sdca_naive_step(st, p, gram, i, 1e-10);
    else
      sdca_approx_step(st, p, gram, i, aux, opt);
    const double after = dual_naive(p, st.alpha, 1e-10);
    CHECK(after >= before - 1e-9);
  }
}

TEST_CASE("grid aux: shape, endpoints, symmetry and level residual") {
  const LossSpec bce = LossSpec::bce();
  for (std::size_t n : {5ul, 37ul, 120ul}) {
    const GridSearchAux aux = build_grid_aux(bce, 0.3, n);
    CHECK(aux.grid_pos.size() == n + 1);
    CHECK(aux.grid_neg.size() == n + 1);
    CHECK(aux.grid_pos.front() == doctest::Approx(std::exp(-4.0)).epsilon(1e-14));
    CHECK(aux.grid_pos.back() == doctest::Approx(aux.b_upper).epsilon(1e-12));
    CHECK(aux.grid_neg.front() == doctest::Approx(aux.b_lower).epsilon(1e-12));
    CHECK(aux.grid_neg.back() == doctest::Approx(-std::exp(-4.0)).epsilon(1e-14));
    const double level = static_cast<double>(n) * loss_value(bce, 0.0);
    CHECK(std::abs(mixup_loss_value(bce, aux.b_upper, 0.3) - level) <= 1e-6);
    CHECK(std::abs(mixup_loss_value(bce, aux.b_lower, 0.3) - level) <= 1e-6);
    for (std::size_t k = 1; k < aux.grid_pos.size(); ++k)
      CHECK(aux.grid_pos[k] > aux.grid_pos[k - 1]);
  }
  // even blend: symmetric level set
  const GridSearchAux sym = build_grid_aux(bce, 0.0, 50);
  CHECK(sym.b_upper == doctest::Approx(-sym.b_lower).epsilon(1e-9));
  CHECK(sym.alpha_diamond == doctest::Approx(0.0));
}

TEST_CASE("find_f_tilde: fallback, boundary tie, and the coefficient bound") {
  const LossSpec bce = LossSpec::bce();
  const GridSearchAux aux = build_grid_aux(bce, 0.0, 40);

  // alpha at the gradient center: positive branch, every BCE grid point
  // fails the strict inequality, fallback zeta = 0
  double zeta = -1.0;
  const double z = 0.7, alpha = 0.0;
  const double f = find_f_tilde(bce, 0.0, z, alpha, aux, false,
                                GridScan::kBinary, &zeta);
  CHECK(zeta == 0.0);
  CHECK(f == doctest::Approx(mixup_loss_value(bce, z, 0.0) + alpha * z -
                             loss_value(bce, 0.0)));

  // smoothed hinge has flat gradients near 0, so the tie picks the smallest
  // nonnegative grid point and stays finite
  const LossSpec smh = LossSpec::smoothed_hinge(0.5);
  const GridSearchAux aux_smh = build_grid_aux(smh, 0.0, 40);
  double zeta_smh = -1.0;
  const double f_smh = find_f_tilde(smh, 0.0, 0.4, 0.0, aux_smh, false,
                                    GridScan::kBinary, &zeta_smh);
  CHECK(zeta_smh == doctest::Approx(std::exp(-4.0)));
  CHECK(std::isfinite(f_smh));

  // the grid coefficient never exceeds the exact one (1000 random draws),
  // under both selection rules and both scan modes
  Rng rng(11);
  for (int k = 0; k < 1000; ++k) {
    const double y = 1.8 * (rng.uniform_open01() - 0.5);
    const double zz = 6.0 * (rng.uniform_open01() - 0.5);
    const double c1 = 0.5 * (1.0 + y), c2 = 0.5 * (1.0 - y);
    const double ai = (-c2 + 1e-9) + (c1 + c2 - 2e-9) * rng.uniform_open01();
    const GridSearchAux a2 = build_grid_aux(bce, y, 64);
    const double f_van =
        mixup_loss_value(bce, zz, y) +
        mixup_conjugate(bce, -ai, y, 1e-10).value() + ai * zz;
    const double f_bin =
        find_f_tilde(bce, y, zz, ai, a2, false, GridScan::kBinary);
    const double f_lin =
        find_f_tilde(bce, y, zz, ai, a2, false, GridScan::kLinear);
    const double f_tight_bin =
        find_f_tilde(bce, y, zz, ai, a2, true, GridScan::kBinary);
    const double f_tight_lin =
        find_f_tilde(bce, y, zz, ai, a2, true, GridScan::kLinear);
    CHECK(f_bin == f_lin);                     // scan parity, same selection
    CHECK(std::abs(f_tight_bin - f_tight_lin) <= 1e-12);
    CHECK(f_bin <= f_van + 1e-8);
    CHECK(f_tight_bin <= f_van + 1e-8);
    CHECK(f_tight_bin >= f_bin - 1e-12);       // tight mode is never worse
  }
}

TEST_CASE("approx step: binary labels reproduce the naive step exactly") {
  Rng rng(13);
  Problem p;
  p.data = checks::two_gaussians(20, 3, 2.0, 17);
  p.loss = LossSpec::bce();
  p.kernel = KernelSpec::rbf(1.2);
  p.lambda = 0.05;
  Gram gram(p.kernel, p.data.features, true);
  SolverOptions opt;
  GridAuxCache aux(p.loss, 20, 4.0);

  SolverState a = state_for(p, 23), b = state_for(p, 23);
  for (int t = 0; t < 200; ++t) {
    const std::size_t i = rng.uniform_index(20);
    sdca_naive_step(a, p, gram, i, 1e-12);
    sdca_approx_step(b, p, gram, i, aux, opt);
  }
  // identical in exact arithmetic; near convergence q ~ 0 and the shared
  // coefficient is formed by cancellation, so allow rounding-level drift
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(std::abs(a.alpha[i] - b.alpha[i]) <= 1e-9);
    CHECK(std::abs(a.scores[i] - b.scores[i]) <= 1e-9);
  }
}

TEST_CASE("approx step: eta formula honors the inner max branch") {
  Rng rng(19);
  Problem p = gaussian_mixup_problem(30, 30, 29);
  const std::size_t n = p.data.size();
  Gram gram(p.kernel, p.data.features, true);
  GridAuxCache aux(p.loss, n, 4.0);
  SolverOptions opt;
  SolverState st = state_for(p, 31);
  int max_branch_hits = 0;
  for (int t = 0; t < 400; ++t) {
    const std::size_t i = st.rng.uniform_index(n);
    const double alpha_before = st.alpha[i];
    const StepQuantities sq = sdca_approx_step(st, p, gram, i, aux, opt);
    if (sq.q == 0.0) continue;
    const double gq2 = p.loss.gamma_sm * sq.q * sq.q;
    const double ratio = (sq.f + 0.5 * gq2) / gq2;
    const double eta = std::min(1.0, sq.s_bar * std::max(1.0, ratio));
    CHECK(std::abs(st.alpha[i] - (alpha_before + sq.q * eta)) <= 1e-12);
    if (ratio < 1.0) ++max_branch_hits;  // eta = s_bar
  }
  // the guard branch must actually occur on fractional-label data
  CHECK(max_branch_hits > 0);
}

TEST_CASE("decomp step: weight-one coordinate is a vanilla base-loss step") {
  Problem p;
  p.data.features = {{0.4, -0.2}, {1.0, 0.3}};
  p.data.labels = {0.0, 0.0};  // each splits into two weight-1 copies
  p.loss = LossSpec::bce();
  p.kernel = KernelSpec::rbf(1.0);
  p.lambda = 0.25;
  const DecomposedProblem dp = decompose(p);
  REQUIRE(dp.n_tilde == 4);
  for (double w : dp.weights) CHECK(w == 1.0);

  Gram gram(p.kernel, p.data.features, true);
  SolverOptions opt;
  SolverState st = make_state(4, 1.0 / (p.lambda * 4.0), 3);
  const StepQuantities sq = sdca_decomp_step(st, dp, gram, 1, opt);

  // hand-computed vanilla step on phi0 with N = 4 effective examples
  const double u = -loss_grad(p.loss, 0.0);
  const double lng = p.lambda * 4.0 * p.loss.gamma_sm;
  const double s_bar = lng / (gram.diag(1) + lng);
  const double f = loss_value(p.loss, 0.0) + 0.0;  // conjugate(0) = 0
  const double eta =
      std::min(1.0, s_bar * (f + 0.5 * p.loss.gamma_sm * u * u) /
                        (p.loss.gamma_sm * u * u));
  CHECK(sq.u == doctest::Approx(u));
  CHECK(sq.s_bar == doctest::Approx(s_bar));
  CHECK(st.alpha[1] == doctest::Approx(u * eta).epsilon(1e-12));
}

TEST_CASE("decomp steps never decrease the rearranged dual") {
  Rng rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const LossSpec loss =
        trial % 2 == 0 ? LossSpec::bce() : LossSpec::smoothed_hinge(0.4);
    Problem p = checks::random_problem(rng, 8, 30, 0.5, loss);
    const DecomposedProblem dp = decompose(p);
    Gram gram(p.kernel, p.data.features, true);
    SolverOptions opt;
    opt.decomp_uniform_gamma = trial % 3 == 0;
    SolverState st = make_state(
        dp.n_tilde, 1.0 / (p.lambda * static_cast<double>(dp.norm_count)),
        rng.next_u64());
    for (int warm = 0; warm < 5; ++warm)
      sdca_decomp_step(st, dp, gram, st.rng.uniform_index(dp.n_tilde), opt);
    const double before = dual_decomp(dp, st.alpha);
    sdca_decomp_step(st, dp, gram, st.rng.uniform_index(dp.n_tilde), opt);
    const double after = dual_decomp(dp, st.alpha);
    CHECK(after >= before - 1e-9);
  }
}

TEST_CASE("all-binary labels: decomposition and approx reach the same primal") {
  Problem p;
  p.data = checks::two_gaussians(60, 2, 2.5, 41);
  p.loss = LossSpec::bce();
  p.kernel = KernelSpec::rbf(1.3);
  p.lambda = 1.0 / 60.0;
  TrainBudget budget{3000, 1e-9, 1};
  const TrainResult a = train(p, SolverVariant::kApprox, budget, {}, 5);
  const TrainResult d = train(p, SolverVariant::kDecomp, budget, {}, 6);
  REQUIRE(a.trace.converged);
  REQUIRE(d.trace.converged);
  CHECK(a.trace.rows.back().primal ==
        doctest::Approx(d.trace.rows.back().primal).epsilon(1e-6));
}

TEST_CASE("sgd step algebra") {
  Problem p;
  p.data = checks::two_gaussians(10, 2, 2.0, 43);
  p.loss = LossSpec::bce();
  p.kernel = KernelSpec::rbf(1.0);
  p.lambda = 0.5;
  Gram gram(p.kernel, p.data.features, true);

  SUBCASE("eta lambda = 1 zeroes prior coefficients") {
    SolverState st = make_state(10, 1.0, 7);
    for (auto& c : st.alpha) c = 1.0;
    init_scores(st, gram, 1.0);
    const double z4 = st.scores[4];
    sgd_step(st, p, gram, 4, 2.0);  // eta * lambda = 1
    for (std::size_t j = 0; j < 10; ++j) {
      if (j == 4) continue;
      CHECK(st.alpha[j] == 0.0);
    }
    CHECK(st.alpha[4] ==
          doctest::Approx(-2.0 * mixup_loss_grad(p.loss, z4, p.data.labels[4]))
              .epsilon(1e-9));
  }

  SUBCASE("flat loss region gives a pure shrinkage step") {
    Problem q = p;
    q.loss = LossSpec::quadratic_hinge(0.5);
    SolverState st = make_state(10, 1.0, 7);
    // drive every score deep into the flat region s > 1 of the +1 class:
    // use labels +1 and coefficients making f large positive
    for (auto& y : q.data.labels) y = 1.0;
    for (auto& c : st.alpha) c = 10.0;
    init_scores(st, gram, 1.0);
    REQUIRE(st.scores[3] > 1.0);
    const auto before = st.alpha;
    sgd_step(st, q, gram, 3, 0.1);
    const double shrink = 1.0 - 0.1 * q.lambda;
    for (std::size_t j = 0; j < 10; ++j)
      CHECK(st.alpha[j] == doctest::Approx(before[j] * shrink));
  }

  SUBCASE("primal decreases over an epoch for a small step size") {
    int descents = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      Problem q = gaussian_mixup_problem(20, 10, 47 + seed);
      TrainBudget budget{1, 1e-12, 1};
      SolverOptions opt;
      opt.sgd_eta = 1e-3;
      const TrainResult r = train(q, SolverVariant::kSgd, budget, opt, seed);
      const double before = r.trace.rows.front().primal;
      const double after = r.trace.rows.back().primal;
      if (after < before) ++descents;
    }
    CHECK(descents >= 3);  // median over 5 seeds decreases
  }
}

TEST_CASE("train rejects bad budgets and option combinations") {
  Problem p = gaussian_mixup_problem(10, 5, 53);
  CHECK_THROWS_AS(train(p, SolverVariant::kApprox, {0, 1e-5, 1}, {}, 1),
                  ConfigError);
  CHECK_THROWS_AS(train(p, SolverVariant::kApprox, {10, 0.0, 1}, {}, 1),
                  ConfigError);
  CHECK_THROWS_AS(train(p, SolverVariant::kSgd, {10, 1e-5, 1}, {}, 1),
                  ConfigError);
}

TEST_CASE("all three variants reach a 1e-5 gap on separable mixup data") {
  Problem p = gaussian_mixup_problem(100, 100, 59);
  TrainBudget budget{5000, 1e-5, 1};
  for (SolverVariant v : {SolverVariant::kNaive, SolverVariant::kApprox,
                          SolverVariant::kDecomp}) {
    const TrainResult r = train(p, v, budget, {}, 61);
    CHECK(r.trace.converged);
    CHECK(r.trace.rows.back().gap <= 1e-5);
    // the trace's dual column never decreases
    for (std::size_t t = 1; t < r.trace.rows.size(); ++t)
      CHECK(r.trace.rows[t].dual >= r.trace.rows[t - 1].dual - 1e-9);
  }
}

TEST_CASE("epoch cap marks the run as not converged") {
  Problem p = gaussian_mixup_problem(40, 20, 67);
  TrainBudget budget{2, 1e-12, 1};
  const TrainResult r = train(p, SolverVariant::kApprox, budget, {}, 3);
  CHECK_FALSE(r.trace.converged);
  CHECK(r.trace.rows.back().epoch == 2);
}

TEST_CASE("score cache stays consistent with the model") {
  Rng rng(71);
  Problem p = gaussian_mixup_problem(25, 15, 73);
  const std::size_t n = p.data.size();
  Gram gram(p.kernel, p.data.features, true);
  GridAuxCache aux(p.loss, n, 4.0);
  SolverOptions opt;
  SolverState st = state_for(p, 79);
  for (int t = 0; t < 3 * static_cast<int>(n); ++t)
    sdca_approx_step(st, p, gram, st.rng.uniform_index(n), aux, opt);
  // recompute from alpha and compare
  std::vector<double> fresh(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (st.alpha[i] != 0.0)
      gram.add_scaled_row(i, st.model_scale * st.alpha[i], fresh);
  for (std::size_t j = 0; j < n; ++j)
    CHECK(std::abs(fresh[j] - st.scores[j]) <= 1e-8);
}

TEST_CASE("feasibility is preserved along the trajectory") {
  Rng rng(83);
  for (const LossSpec& loss :
       {LossSpec::bce(), LossSpec::smoothed_hinge(0.5),
        LossSpec::quadratic_hinge(0.6)}) {
    Problem p = checks::random_problem(rng, 20, 40, 0.5, loss);
    const std::size_t n = p.data.size();
    Gram gram(p.kernel, p.data.features, true);
    GridAuxCache aux(loss, n, 4.0);
    SolverOptions opt;
    SolverState st = state_for(p, 89);
    for (int t = 0; t < 4 * static_cast<int>(n); ++t) {
      const std::size_t i = st.rng.uniform_index(n);
      sdca_approx_step(st, p, gram, i, aux, opt);
      CHECK(mixup_conjugate(loss, -st.alpha[i], p.data.labels[i], 1e-8)
                .is_finite());
    }
  }
}

TEST_CASE("expected dual improvement clears the geometric-decrease rate") {
  // For each variant, the mean per-step dual improvement over an epoch,
  // averaged over 20 seeds, must reach beta * max(h_P, h_D) measured
  // against a high-precision reference (aggregate form, factor 1.05).
  Problem p = gaussian_mixup_problem(20, 10, 97);
  const std::size_t n = p.data.size();
  Gram gram(p.kernel, p.data.features, true);
  const double r2 = gram.r_max() * gram.r_max();

  TrainBudget ref_budget{5000, 1e-11, 1};
  const TrainResult ref = train(p, SolverVariant::kApprox, ref_budget, {}, 1);
  REQUIRE(ref.trace.converged);
  const double primal_star = ref.trace.rows.back().primal;
  const double dual_star = ref.trace.rows.back().dual;

  SUBCASE("approx variant") {
    const double beta =
        1.0 / (static_cast<double>(n) +
               r2 / (p.lambda * p.loss.gamma_sm));
    double mean_impr = 0.0, mean_bound = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      GridAuxCache aux(p.loss, n, 4.0);
      SolverOptions opt;
      SolverState st = state_for(p, 100 + seed);
      double dual_prev = dual_naive(p, st.alpha, 1e-10);
      for (std::size_t t = 0; t < n; ++t) {
        const double primal =
            primal_risk_from_scores(p, st.scores, [&] {
              double s = 0.0;
              for (std::size_t j = 0; j < n; ++j) s += st.alpha[j] * st.scores[j];
              return st.model_scale * s;
            }());
        const double h_p = primal - primal_star;
        const double h_d = dual_star - dual_prev;
        mean_bound += beta * std::max(h_p, h_d);
        sdca_approx_step(st, p, gram, st.rng.uniform_index(n), aux, opt);
        const double dual_now = dual_naive(p, st.alpha, 1e-10);
        mean_impr += dual_now - dual_prev;
        dual_prev = dual_now;
      }
    }
    CHECK(mean_impr >= mean_bound / 1.05);
  }

  SUBCASE("decomposition variant") {
    const double beta =
        1.0 / (2.0 * static_cast<double>(n) +
               2.0 * r2 / (p.lambda * p.loss.gamma_sm));
    const DecomposedProblem dp = decompose(p);
    TrainBudget refd_budget{5000, 1e-11, 1};
    const TrainResult refd =
        train(p, SolverVariant::kDecomp, refd_budget, {}, 2);
    REQUIRE(refd.trace.converged);
    const double dual_star_d = refd.trace.rows.back().dual;

    std::vector<std::size_t> base_coord(n, 0);
    for (std::size_t j = 0; j < dp.n_tilde; ++j)
      base_coord[dp.anchor_map[j]] = j;

    double mean_impr = 0.0, mean_bound = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      SolverOptions opt;
      SolverState st = make_state(
          dp.n_tilde, 1.0 / (p.lambda * static_cast<double>(dp.norm_count)),
          200 + seed);
      double dual_prev = dual_decomp(dp, st.alpha);
      for (std::size_t t = 0; t < dp.n_tilde; ++t) {
        std::vector<double> base_scores(n);
        for (std::size_t i = 0; i < n; ++i)
          base_scores[i] = dp.signs[base_coord[i]] * st.scores[base_coord[i]];
        double norm = 0.0;
        for (std::size_t j = 0; j < dp.n_tilde; ++j)
          norm += st.alpha[j] * st.scores[j];
        norm *= st.model_scale;
        const double primal = primal_risk_from_scores(p, base_scores, norm);
        const double h_p = primal - primal_star;
        const double h_d = dual_star_d - dual_prev;
        mean_bound += beta * std::max(h_p, h_d);
        sdca_decomp_step(st, dp, gram, st.rng.uniform_index(dp.n_tilde), opt);
        const double dual_now = dual_decomp(dp, st.alpha);
        mean_impr += dual_now - dual_prev;
        dual_prev = dual_now;
      }
    }
    CHECK(mean_impr >= mean_bound / 1.05);
  }
}

TEST_CASE("grid scan modes produce identical training runs") {
  Problem p = gaussian_mixup_problem(30, 30, 101);
  TrainBudget budget{40, 1e-7, 1};
  SolverOptions bin, lin;
  bin.grid_scan = GridScan::kBinary;
  lin.grid_scan = GridScan::kLinear;
  const TrainResult a = train(p, SolverVariant::kApprox, budget, bin, 7);
  const TrainResult b = train(p, SolverVariant::kApprox, budget, lin, 7);
  REQUIRE(a.trace.rows.size() == b.trace.rows.size());
  for (std::size_t t = 0; t < a.trace.rows.size(); ++t) {
    CHECK(a.trace.rows[t].dual == b.trace.rows[t].dual);
    CHECK(a.trace.rows[t].primal == b.trace.rows[t].primal);
  }
}

TEST_CASE("grid-bound audit mode accepts a full training run") {
  Problem p = gaussian_mixup_problem(20, 20, 103);
  SolverOptions opt;
  opt.audit_grid_bound = true;
  TrainBudget budget{30, 1e-8, 1};
  CHECK_NOTHROW(train(p, SolverVariant::kApprox, budget, opt, 11));
  opt.tight_zeta = true;
  CHECK_NOTHROW(train(p, SolverVariant::kApprox, budget, opt, 11));
}

TEST_CASE("tight-zeta converges at least as fast on the dual") {
  Problem p = gaussian_mixup_problem(40, 40, 107);
  TrainBudget budget{15, 1e-12, 1};
  SolverOptions plain, tight;
  tight.tight_zeta = true;
  const TrainResult a = train(p, SolverVariant::kApprox, budget, plain, 13);
  const TrainResult b = train(p, SolverVariant::kApprox, budget, tight, 13);
  CHECK(b.trace.rows.back().dual >= a.trace.rows.back().dual - 1e-9);
}
