#include "mixkern/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mixkern/solvers.hpp"

namespace mixkern::checks {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ConjugateGridOracle::ConjugateGridOracle(const LossSpec& loss, double lo,
                                         double hi, double step)
    : lo_(lo), step_(step) {
  const std::size_t m = static_cast<std::size_t>((hi - lo) / step) + 1;
  phi_.resize(m);
  for (std::size_t k = 0; k < m; ++k)
    phi_[k] = loss_value(loss, lo + static_cast<double>(k) * step);
}

double ConjugateGridOracle::eval(double a) const {
  double best = -kInf;
  double zeta = lo_;
  for (std::size_t k = 0; k < phi_.size(); ++k, zeta += step_) {
    const double v = a * zeta - phi_[k];
    if (v > best) best = v;
  }
  return best;
}

double mixup_conjugate_direct_oracle(const LossSpec& loss, double a, double y,
                                     double lo, double hi, double step) {
  double best = -kInf;
  for (double zeta = lo; zeta <= hi; zeta += step)
    best = std::max(best, a * zeta - mixup_loss_value(loss, zeta, y));
  return best;
}

double infconv_grid_oracle(const LossSpec& loss, double a, double y,
                           double step) {
  const double alpha = -a;
  const auto iv = mixup_conjugate_argmin_bounds(loss, alpha, y);
  if (!iv) return kInf;
  const double c1 = 0.5 * (1.0 + y), c2 = 0.5 * (1.0 - y);
  double lo = iv->lo;
  const double hi = iv->hi;
  if (!std::isfinite(lo)) {
    // Quadratic conjugates: the unconstrained minimizer of
    // u + g u^2/(2 c1) + (u - a) + g (u - a)^2/(2 c2) locates the window.
    const double g = loss.gamma_sm;
    const double u_star = (g * a / c2 - 2.0) / (g * (1.0 / c1 + 1.0 / c2));
    lo = std::min(u_star, hi) - 2.0;
  }
  const Interval dom = conjugate_domain(loss);
  const auto conj = [&](double arg) {
    arg = std::min(std::max(arg, dom.lo), dom.hi);
    return conjugate_value(loss, arg).value();
  };
  double best = kInf;
  const std::size_t m = static_cast<std::size_t>((hi - lo) / step) + 1;
  for (std::size_t k = 0; k <= m; ++k) {
    const double u = std::min(lo + static_cast<double>(k) * step, hi);
    best = std::min(best, c1 * conj(u / c1) + c2 * conj((u - a) / c2));
  }
  return best;
}

double central_difference(double (*fn)(double, const void*), const void* ctx,
                          double x, double h) {
  return (fn(x + h, ctx) - fn(x - h, ctx)) / (2.0 * h);
}

LabeledDataset two_gaussians(std::size_t n, std::size_t dim, double separation,
                             std::uint64_t seed) {
  Rng rng(seed);
  LabeledDataset ds;
  ds.features.reserve(n);
  ds.labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double label = (i % 2 == 0) ? 1.0 : -1.0;
    std::vector<double> x(dim);
    for (std::size_t k = 0; k < dim; ++k) x[k] = rng.normal();
    x[0] += label * 0.5 * separation;
    ds.features.push_back(std::move(x));
    ds.labels.push_back(label);
  }
  return ds;
}

Problem random_problem(Rng& rng, std::size_t n_lo, std::size_t n_hi,
                       double frac_share, const LossSpec& loss,
                       double lambda_over_n) {
  const std::size_t n = n_lo + rng.uniform_index(n_hi - n_lo + 1);
  const std::size_t dim = 2 + rng.uniform_index(3);
  Problem p;
  p.loss = loss;
  p.kernel = KernelSpec::rbf(1.0 + 2.0 * rng.uniform_open01());
  p.lambda = lambda_over_n / static_cast<double>(n);
  p.data.features.reserve(n);
  p.data.labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(dim);
    for (std::size_t k = 0; k < dim; ++k) x[k] = rng.normal();
    double y;
    if (rng.uniform_open01() < frac_share)
      y = 2.0 * rng.uniform_open01() - 1.0;  // fractional in (-1, 1)
    else
      y = rng.uniform_open01() < 0.5 ? -1.0 : 1.0;
    x[0] += y;  // correlate features with labels a little
    p.data.features.push_back(std::move(x));
    p.data.labels.push_back(y);
  }
  return p;
}

double random_feasible_alpha(Rng& rng, const LossSpec& loss, double y) {
  const Interval dom = conjugate_domain(loss);
  double lo, hi;
  if (y == 1.0) { lo = -dom.hi; hi = -dom.lo; }
  else if (y == -1.0) { lo = dom.lo; hi = dom.hi; }
  else {
    const double c1 = 0.5 * (1.0 + y), c2 = 0.5 * (1.0 - y);
    lo = c2 * dom.lo - c1 * dom.hi;
    hi = c2 * dom.hi - c1 * dom.lo;
  }
  lo = std::max(lo, -3.0);
  hi = std::min(hi, 3.0);
  return lo + (hi - lo) * rng.uniform_open01();
}

namespace {

std::vector<LossSpec> suite_losses() {
  return {LossSpec::bce(), LossSpec::smoothed_hinge(0.5),
          LossSpec::quadratic_hinge(0.7)};
}

double sample_conj_arg(Rng& rng, const LossSpec& loss) {
  if (loss.kind == LossKind::kQuadraticHinge)
    return -10.0 * rng.uniform_open01();
  return -1e-6 - (1.0 - 2e-6) * rng.uniform_open01();
}

double mixup_value_adapter(double s, const void* ctx) {
  const auto* pr = static_cast<const std::pair<const LossSpec*, double>*>(ctx);
  return mixup_loss_value(*pr->first, s, pr->second);
}

}  // namespace

SuiteResult check_conjugate_oracle(std::uint64_t seed, std::size_t per_loss) {
  Rng rng(seed);
  double worst = 0.0;
  for (const LossSpec& loss : suite_losses()) {
    ConjugateGridOracle oracle(loss);
    for (std::size_t k = 0; k < per_loss; ++k) {
      const double a = sample_conj_arg(rng, loss);
      const double closed = conjugate_value(loss, a).value();
      worst = std::max(worst, std::abs(closed - oracle.eval(a)));
    }
  }
  return {"conjugate-grid-oracle", worst <= 1e-5, worst,
          "max |closed form - grid sup|"};
}

SuiteResult check_gradients(std::uint64_t seed, std::size_t samples) {
  Rng rng(seed);
  double worst = 0.0;
  const double h = 1e-5;
  for (const LossSpec& loss : suite_losses()) {
    // Central differences straddling a gradient kink are meaningless; keep
    // sample points away from them.
    std::vector<double> kinks;
    if (loss.kind == LossKind::kSmoothedHinge)
      kinks = {1.0, -1.0, 1.0 - loss.gamma_sm, loss.gamma_sm - 1.0};
    else if (loss.kind == LossKind::kQuadraticHinge)
      kinks = {1.0, -1.0};
    for (std::size_t k = 0; k < samples; ++k) {
      double s, y;
      for (;;) {
        s = 8.0 * (rng.uniform_open01() - 0.5);
        y = 2.0 * rng.uniform_open01() - 1.0;
        bool clear = true;
        for (double kk : kinks)
          if (std::abs(s - kk) < 1e-3) clear = false;
        if (clear) break;
      }
      const std::pair<const LossSpec*, double> ctx{&loss, y};
      const double fd = central_difference(&mixup_value_adapter, &ctx, s, h);
      const double an = mixup_loss_grad(loss, s, y);
      worst = std::max(worst, std::abs(an - fd) / std::max(1.0, std::abs(an)));
    }
  }
  return {"finite-difference-gradients", worst <= 1e-6, worst,
          "max rel err of mixup gradient vs central difference"};
}

SuiteResult check_fenchel_young(std::uint64_t seed, std::size_t samples) {
  Rng rng(seed);
  double worst_gap = 0.0;   // violation of the inequality (should be <= 1e-9)
  double worst_eq = 0.0;    // residual at a = grad
  for (const LossSpec& loss : suite_losses()) {
    for (std::size_t k = 0; k < samples; ++k) {
      const double s = 10.0 * (rng.uniform_open01() - 0.5);
      const double a = sample_conj_arg(rng, loss);
      const double lhs = loss_value(loss, s) + conjugate_value(loss, a).value();
      worst_gap = std::max(worst_gap, a * s - lhs);
      const double g = loss_grad(loss, s);
      const double eq = loss_value(loss, s) + conjugate_value(loss, g).value() -
                        g * s;
      worst_eq = std::max(worst_eq, std::abs(eq));
    }
  }
  const bool pass = worst_gap <= 1e-9 && worst_eq <= 1e-6;
  return {"fenchel-young", pass, std::max(worst_gap, worst_eq),
          "max inequality violation / equality residual"};
}

SuiteResult check_grid_bound(std::uint64_t seed, std::size_t min_steps) {
  Rng rng(seed);
  double worst = -kInf;
  std::size_t audited = 0;
  SolverOptions opt;
  while (audited < min_steps) {
    const Problem p = random_problem(rng, 20, 100, 0.4, LossSpec::bce());
    const std::size_t n = p.data.size();
    Gram gram(p.kernel, p.data.features, true);
    SolverState st = make_state(n, 1.0 / (p.lambda * static_cast<double>(n)),
                                rng.next_u64());
    GridAuxCache aux(p.loss, n, 4.0);
    for (std::size_t t = 0; t < 3 * n && audited < min_steps + n; ++t) {
      const std::size_t i = st.rng.uniform_index(n);
      const double y = p.data.labels[i];
      if (std::abs(y) < 1.0) {
        const double f_tilde = find_f_tilde(p.loss, y, st.scores[i],
                                            st.alpha[i], aux.get(y),
                                            opt.tight_zeta, opt.grid_scan);
        const double f_van =
            mixup_loss_value(p.loss, st.scores[i], y) +
            mixup_conjugate(p.loss, -st.alpha[i], y, 1e-10).value() +
            st.alpha[i] * st.scores[i];
        worst = std::max(worst, f_tilde - f_van);
        ++audited;
      }
      sdca_approx_step(st, p, gram, i, aux, opt);
    }
  }
  return {"grid-bound-audit", worst <= 1e-8, worst,
          "max (grid coefficient - exact coefficient) over " +
              std::to_string(audited) + " steps"};
}

SuiteResult check_decomposition_identity(std::uint64_t seed,
                                         std::size_t instances) {
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t k = 0; k < instances; ++k) {
    const LossSpec loss = suite_losses()[k % 3];
    const Problem p = random_problem(rng, 5, 30, 0.5, loss);
    const std::size_t n = p.data.size();
    DualModel model;
    model.kernel = p.kernel;
    model.lambda = p.lambda;
    model.anchors = p.data.features;
    model.scale = 1.0 / (p.lambda * static_cast<double>(n));
    model.coeffs.resize(n);
    for (auto& c : model.coeffs) c = 2.0 * rng.uniform_open01() - 1.0;

    const double base_risk = primal_risk(p, model);
    // Rearranged form, computed from the decomposition metadata alone.
    const DecomposedProblem dp = decompose(p);
    double loss_sum = 0.0;
    for (std::size_t j = 0; j < dp.n_tilde; ++j) {
      const double fx = predict(model, p.data.features[dp.anchor_map[j]]);
      loss_sum += dp.weights[j] * loss_value(loss, dp.signs[j] * fx);
    }
    const double rearranged = 0.5 * p.lambda * rkhs_norm_sq(model) +
                              loss_sum / static_cast<double>(dp.norm_count);
    worst = std::max(worst, std::abs(base_risk - rearranged) /
                                std::max(1.0, std::abs(base_risk)));
  }
  return {"decomposition-identity", worst <= 1e-10, worst,
          "max rel err between base and rearranged risk"};
}

SuiteResult check_weak_duality(std::uint64_t seed, std::size_t instances) {
  Rng rng(seed);
  double worst = -kInf;
  for (std::size_t k = 0; k < instances; ++k) {
    const LossSpec loss = suite_losses()[k % 3];
    const Problem p = random_problem(rng, 5, 25, 0.5, loss);
    const std::size_t n = p.data.size();

    std::vector<double> alpha(n);
    for (std::size_t i = 0; i < n; ++i)
      alpha[i] = random_feasible_alpha(rng, loss, p.data.labels[i]);
    DualModel model;
    model.kernel = p.kernel;
    model.lambda = p.lambda;
    model.anchors = p.data.features;
    model.coeffs = alpha;
    model.scale = 1.0 / (p.lambda * static_cast<double>(n));
    worst = std::max(worst, dual_naive(p, alpha, 1e-10) - primal_risk(p, model));

    const DecomposedProblem dp = decompose(p);
    std::vector<double> alpha_t(dp.n_tilde);
    for (std::size_t j = 0; j < dp.n_tilde; ++j)
      alpha_t[j] = dp.weights[j] * rng.uniform_open01();
    DualModel model_t;
    model_t.kernel = p.kernel;
    model_t.lambda = p.lambda;
    model_t.anchors.reserve(dp.n_tilde);
    model_t.coeffs.reserve(dp.n_tilde);
    for (std::size_t j = 0; j < dp.n_tilde; ++j) {
      model_t.anchors.push_back(p.data.features[dp.anchor_map[j]]);
      model_t.coeffs.push_back(alpha_t[j] * dp.signs[j]);
    }
    model_t.scale = 1.0 / (p.lambda * static_cast<double>(dp.norm_count));
    worst = std::max(worst, dual_decomp(dp, alpha_t) - primal_risk(p, model_t));
  }
  return {"weak-duality", worst <= 1e-8, worst,
          "max (dual - primal) over random feasible points"};
}

std::vector<SuiteResult> run_all_suites(std::uint64_t seed) {
  return {check_conjugate_oracle(seed),
          check_gradients(seed + 1),
          check_fenchel_young(seed + 2),
          check_grid_bound(seed + 3),
          check_decomposition_identity(seed + 4),
          check_weak_duality(seed + 5)};
}

}  // namespace mixkern::checks
