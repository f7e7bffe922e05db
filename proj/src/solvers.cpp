#include "mixkern/solvers.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "mixkern/errors.hpp"

namespace mixkern {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Feasible alpha interval for a naive/approx coordinate: -alpha must stay in
// dom(phi_mup*(.; y)). Updates are convex combinations of in-domain points,
// so only rounding can push one outside; steps clamp back onto it.
Interval naive_alpha_bounds(const LossSpec& loss, double y) {
  const Interval dom = conjugate_domain(loss);
  if (y == 1.0) return {-dom.hi, -dom.lo};
  if (y == -1.0) return {dom.lo, dom.hi};
  // Nonempty infimal-convolution interval requires
  // c2 dom.lo - c1 dom.hi <= alpha <= c2 dom.hi - c1 dom.lo.
  const double c1 = 0.5 * (1.0 + y), c2 = 0.5 * (1.0 - y);
  return {c2 * dom.lo - c1 * dom.hi, c2 * dom.hi - c1 * dom.lo};
}

double clamp(double v, const Interval& iv) {
  return std::min(std::max(v, iv.lo), iv.hi);
}

double infinity_guard(const ExtReal& v, const char* what) {
  if (!v.is_finite()) throw std::logic_error(std::string(what) + " left the conjugate domain");
  return v.value();
}

// eta of the parabola vertex projected onto [0, 1]; q != 0. The exact
// coefficient satisfies f >= gamma q^2 / 2, so the lower clamp only fires
// when q ~ 0 and f is pure cancellation noise.
double vanilla_eta(double f, double gamma, double q, double s_bar) {
  const double gq2 = gamma * q * q;
  return std::min(1.0, std::max(0.0, s_bar * (f + 0.5 * gq2) / gq2));
}

}  // namespace

SolverState make_state(std::size_t ncoords, double model_scale,
                       std::uint64_t seed) {
  SolverState st{std::vector<double>(ncoords, 0.0),
                 std::vector<double>(ncoords, 0.0), 0, Rng(seed), model_scale};
  return st;
}

StepQuantities sdca_naive_step(SolverState& st, const Problem& p,
                               const Gram& gram, std::size_t i, double tol) {
  const double y = p.data.labels[i];
  const double gamma = p.loss.gamma_sm;
  const double n = static_cast<double>(p.data.size());

  StepQuantities sq;
  sq.z = st.scores[i];
  sq.u = -mixup_loss_grad(p.loss, sq.z, y);
  sq.q = sq.u - st.alpha[i];
  sq.k_ii = gram.diag(i);
  const double lng = p.lambda * n * gamma;
  sq.s_bar = lng / (sq.k_ii + lng);
  sq.f = mixup_loss_value(p.loss, sq.z, y) +
         infinity_guard(mixup_conjugate(p.loss, -st.alpha[i], y, tol),
                        "naive step") +
         st.alpha[i] * sq.z;
  ++st.iter;
  if (sq.q == 0.0) return sq;

  const double eta = vanilla_eta(sq.f, gamma, sq.q, sq.s_bar);
  const double delta = sq.q * eta;
  st.alpha[i] = clamp(st.alpha[i] + delta, naive_alpha_bounds(p.loss, y));
  gram.add_scaled_row(i, st.model_scale * delta, st.scores);
  return sq;
}

GridSearchAux build_grid_aux(const LossSpec& loss, double y, std::size_t n,
                             double offset) {
  assert(std::abs(y) < 1.0);
  if (n == 0) throw std::invalid_argument("grid needs n >= 1");
  const double level = static_cast<double>(n) * loss_value(loss, 0.0);

  // One side of the level set {zeta : phi_mup(zeta; y) <= level}; the mixup
  // loss grows without bound in both directions for |y| < 1.
  const auto level_bound = [&](double direction) {
    double w = 1.0;
    int guard = 0;
    while (mixup_loss_value(loss, direction * w, y) <= level) {
      w *= 2.0;
      if (++guard > 400)
        throw std::logic_error("degenerate level set: unbounded side");
    }
    double lo = 0.0, hi = w;  // phi(lo*dir) <= level < phi(hi*dir)
    for (int it = 0; it < 200 && hi - lo > 1e-8; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mixup_loss_value(loss, direction * mid, y) <= level) lo = mid;
      else hi = mid;
    }
    return direction * 0.5 * (lo + hi);
  };

  GridSearchAux aux;
  aux.b_upper = std::max(level_bound(1.0), 1e-300);
  aux.b_lower = std::min(level_bound(-1.0), -1e-300);
  aux.alpha_diamond = -mixup_loss_grad(loss, 0.0, y);

  const std::size_t m = n;
  aux.grid_pos.resize(m + 1);
  aux.grid_neg.resize(m + 1);
  const double lp = offset + std::log(aux.b_upper);
  const double ln = offset + std::log(-aux.b_lower);
  for (std::size_t k = 0; k <= m; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(m);
    aux.grid_pos[k] = std::exp(t * lp - offset);
    aux.grid_neg[k] = -std::exp(t * ln - offset);
  }
  std::sort(aux.grid_pos.begin(), aux.grid_pos.end());
  std::sort(aux.grid_neg.begin(), aux.grid_neg.end());

  aux.neg_grad_pos.resize(m + 1);
  aux.neg_grad_neg.resize(m + 1);
  aux.value_pos.resize(m + 1);
  aux.value_neg.resize(m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    aux.neg_grad_pos[k] = -mixup_loss_grad(loss, aux.grid_pos[k], y);
    aux.neg_grad_neg[k] = -mixup_loss_grad(loss, aux.grid_neg[k], y);
    aux.value_pos[k] = mixup_loss_value(loss, aux.grid_pos[k], y);
    aux.value_neg[k] = mixup_loss_value(loss, aux.grid_neg[k], y);
  }
  aux.value_at_zero = mixup_loss_value(loss, 0.0, y);
  return aux;
}

const GridSearchAux& GridAuxCache::get(double y) {
  auto it = cache_.find(y);
  if (it == cache_.end())
    it = cache_.emplace(y, build_grid_aux(loss_, y, n_, offset_)).first;
  return it->second;
}

void GridAuxCache::build_index(const std::vector<double>& labels) {
  by_example_.assign(labels.size(), nullptr);
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (std::abs(labels[i]) < 1.0) by_example_[i] = &get(labels[i]);
}

double find_f_tilde(const LossSpec& loss, double y, double z, double alpha_i,
                    const GridSearchAux& aux, bool tight, GridScan scan,
                    double* zeta_out) {
  const double phi_z = mixup_loss_value(loss, z, y);
  // F at grid slot k: phi_z - grad[k] zeta[k] + alpha_i z - value[k];
  // the fallback zeta = 0 uses the tabulated center quantities.
  double zeta = 0.0;
  double a_tilde = aux.alpha_diamond;
  double phi_zeta = aux.value_at_zero;

  if (aux.alpha_diamond < alpha_i) {
    // zeta <= 0 with -grad(zeta) <= alpha_i: true on a suffix of the
    // ascending negative grid (the tabulated -grad is nonincreasing).
    const auto& g = aux.grid_neg;
    const auto& gr = aux.neg_grad_neg;
    const auto& vl = aux.value_neg;
    std::size_t cut;
    if (scan == GridScan::kBinary) {
      cut = static_cast<std::size_t>(
          std::partition_point(gr.begin(), gr.end(),
                               [&](double v) { return v > alpha_i; }) -
          gr.begin());
    } else {
      cut = g.size();
      for (std::size_t k = 0; k < g.size(); ++k)
        if (gr[k] <= alpha_i) { cut = k; break; }
    }
    if (cut < g.size()) {
      std::size_t k;
      if (!tight) {
        k = g.size() - 1;  // the max of the satisfying set
      } else if (scan == GridScan::kBinary) {
        k = cut;  // boundary point; maximizes the coefficient
      } else {
        k = cut;
        double best = phi_z - gr[k] * g[k] + alpha_i * z - vl[k];
        for (std::size_t j = cut + 1; j < g.size(); ++j) {
          const double f = phi_z - gr[j] * g[j] + alpha_i * z - vl[j];
          if (f > best) { best = f; k = j; }
        }
      }
      zeta = g[k];
      a_tilde = gr[k];
      phi_zeta = vl[k];
    }
  } else {
    // zeta >= 0 with -grad(zeta) >= alpha_i: true on a prefix of the
    // ascending positive grid.
    const auto& g = aux.grid_pos;
    const auto& gr = aux.neg_grad_pos;
    const auto& vl = aux.value_pos;
    std::size_t cut;
    if (scan == GridScan::kBinary) {
      cut = static_cast<std::size_t>(
          std::partition_point(gr.begin(), gr.end(),
                               [&](double v) { return v >= alpha_i; }) -
          gr.begin());
    } else {
      cut = 0;
      for (std::size_t k = 0; k < g.size(); ++k) {
        if (gr[k] >= alpha_i) cut = k + 1;
        else break;
      }
    }
    if (cut > 0) {
      std::size_t k;
      if (!tight) {
        k = 0;  // the min of the satisfying set
      } else if (scan == GridScan::kBinary) {
        k = cut - 1;
      } else {
        k = 0;
        double best = phi_z - gr[0] * g[0] + alpha_i * z - vl[0];
        for (std::size_t j = 1; j < cut; ++j) {
          const double f = phi_z - gr[j] * g[j] + alpha_i * z - vl[j];
          if (f > best) { best = f; k = j; }
        }
      }
      zeta = g[k];
      a_tilde = gr[k];
      phi_zeta = vl[k];
    }
  }
  if (zeta_out) *zeta_out = zeta;
  return phi_z - a_tilde * zeta + alpha_i * z - phi_zeta;
}

StepQuantities sdca_approx_step(SolverState& st, const Problem& p,
                                const Gram& gram, std::size_t i,
                                GridAuxCache& aux, const SolverOptions& opt) {
  const double y = p.data.labels[i];
  const double gamma = p.loss.gamma_sm;
  const double n = static_cast<double>(p.data.size());

  StepQuantities sq;
  sq.z = st.scores[i];
  sq.u = -mixup_loss_grad(p.loss, sq.z, y);
  sq.q = sq.u - st.alpha[i];
  sq.k_ii = gram.diag(i);
  const double lng = p.lambda * n * gamma;
  sq.s_bar = lng / (sq.k_ii + lng);

  if (y == 1.0 || y == -1.0) {
    // Closed form: the conjugate of the mixup loss is phi0* itself.
    const double conj = infinity_guard(
        conjugate_value(p.loss, y == 1.0 ? -st.alpha[i] : st.alpha[i]),
        "approx step (binary label)");
    sq.f = mixup_loss_value(p.loss, sq.z, y) + conj + st.alpha[i] * sq.z;
  } else {
    const GridSearchAux* ga = aux.indexed(i);
    sq.f = find_f_tilde(p.loss, y, sq.z, st.alpha[i], ga ? *ga : aux.get(y),
                        opt.tight_zeta, opt.grid_scan);
#ifndef NDEBUG
    const bool audit = true;  // every step self-checks in debug builds
#else
    const bool audit = opt.audit_grid_bound;
#endif
    if (audit) {
      const double f_van =
          mixup_loss_value(p.loss, sq.z, y) +
          infinity_guard(mixup_conjugate(p.loss, -st.alpha[i], y, 1e-10),
                         "grid-bound audit") +
          st.alpha[i] * sq.z;
      if (sq.f > f_van + 1e-8)
        throw std::logic_error("grid coefficient exceeded the exact one");
    }
  }
  ++st.iter;
  if (sq.q == 0.0) return sq;

  const double gq2 = gamma * sq.q * sq.q;
  const double eta =
      std::min(1.0, sq.s_bar * std::max(1.0, (sq.f + 0.5 * gq2) / gq2));
  const double delta = sq.q * eta;
  st.alpha[i] = clamp(st.alpha[i] + delta, naive_alpha_bounds(p.loss, y));
  gram.add_scaled_row(i, st.model_scale * delta, st.scores);
  return sq;
}

StepQuantities sdca_decomp_step(SolverState& st, const DecomposedProblem& dp,
                                const Gram& gram, std::size_t j,
                                const SolverOptions& opt) {
  const double w = dp.weights[j];
  const LossSpec& loss = dp.base.loss;
  const double gamma_j =
      opt.decomp_uniform_gamma ? 0.5 * loss.gamma_sm : loss.gamma_sm / w;
  const double count = static_cast<double>(dp.norm_count);

  StepQuantities sq;
  sq.z = st.scores[j];
  sq.u = -w * loss_grad(loss, sq.z);
  sq.q = sq.u - st.alpha[j];
  sq.k_ii = gram.diag(dp.anchor_map[j]);
  const double lng = dp.base.lambda * count * gamma_j;
  sq.s_bar = lng / (sq.k_ii + lng);
  const DecomposedLoss dl{w, loss};
  sq.f = w * loss_value(loss, sq.z) +
         infinity_guard(decomposed_conjugate(dl, -st.alpha[j]), "decomp step") +
         st.alpha[j] * sq.z;
  ++st.iter;
  if (sq.q == 0.0) return sq;

  const double eta = vanilla_eta(sq.f, gamma_j, sq.q, sq.s_bar);
  const double delta = sq.q * eta;
  // dom((w phi0)*) = w dom(phi0*); -alpha must stay inside it.
  const Interval dom = conjugate_domain(loss);
  st.alpha[j] = clamp(st.alpha[j] + delta, {-w * dom.hi, -w * dom.lo});
  // Signed scores: z_k <- z_k + scale * delta * sigma_j sigma_k K(a_j, a_k).
  const double base = st.model_scale * delta * dp.signs[j];
  const double* row = gram.row(dp.anchor_map[j]);
  if (row) {
    for (std::size_t k = 0; k < st.scores.size(); ++k)
      st.scores[k] += base * dp.signs[k] * row[dp.anchor_map[k]];
  } else {
    const auto& pts = gram.points();
    const auto& xi = pts[dp.anchor_map[j]];
    for (std::size_t k = 0; k < st.scores.size(); ++k)
      st.scores[k] += base * dp.signs[k] *
                      kernel_eval(dp.base.kernel, xi, pts[dp.anchor_map[k]]);
  }
  return sq;
}

void sgd_step(SolverState& st, const Problem& p, const Gram& gram,
              std::size_t i, double eta) {
  const double z = st.scores[i];
  const double g = mixup_loss_grad(p.loss, z, p.data.labels[i]);
  const double shrink = 1.0 - eta * p.lambda;
  for (double& s : st.scores) s *= shrink;
  for (double& c : st.alpha) c *= shrink;
  if (g != 0.0) {
    gram.add_scaled_row(i, -eta * g, st.scores);
    st.alpha[i] -= eta * g;
  }
  ++st.iter;
}

void resync_scores(SolverState& st, const Problem& p, const Gram& gram,
                   SolverVariant variant, const DecomposedProblem* dp) {
  std::vector<double> fresh(st.scores.size(), 0.0);
  if (variant == SolverVariant::kDecomp) {
    // Fold the signed coordinate weights per base point first, then one
    // accumulation pass per base point with a nonzero coefficient.
    const std::size_t n = p.data.size();
    std::vector<double> coeff(n, 0.0);
    for (std::size_t j = 0; j < st.alpha.size(); ++j)
      coeff[dp->anchor_map[j]] += st.alpha[j] * dp->signs[j];
    std::vector<double> fbase(n, 0.0);
    for (std::size_t b = 0; b < n; ++b)
      if (coeff[b] != 0.0)
        gram.add_scaled_row(b, st.model_scale * coeff[b], fbase);
    for (std::size_t k = 0; k < fresh.size(); ++k)
      fresh[k] = dp->signs[k] * fbase[dp->anchor_map[k]];
  } else {
    const double unit = variant == SolverVariant::kSgd ? 1.0 : st.model_scale;
    for (std::size_t i = 0; i < st.alpha.size(); ++i) {
      if (st.alpha[i] == 0.0) continue;
      gram.add_scaled_row(i, unit * st.alpha[i], fresh);
    }
  }
#ifndef NDEBUG
  for (std::size_t k = 0; k < fresh.size(); ++k)
    assert(std::abs(fresh[k] - st.scores[k]) <= 1e-8);
#endif
  st.scores = std::move(fresh);
}

namespace {

// Dual values reusing the synced score cache for the norm term:
// |f|^2 = scale * sum_j alpha_j z_j (z signed for the decomposition).
double cached_norm_sq(const SolverState& st) {
  double s = 0.0;
  for (std::size_t j = 0; j < st.alpha.size(); ++j)
    s += st.alpha[j] * st.scores[j];
  return st.model_scale * s;
}

double dual_naive_cached(const Problem& p, const SolverState& st, double tol) {
  double conj_sum = 0.0;
  for (std::size_t i = 0; i < st.alpha.size(); ++i) {
    const ExtReal c =
        mixup_conjugate(p.loss, -st.alpha[i], p.data.labels[i], tol);
    if (!c.is_finite()) return -std::numeric_limits<double>::infinity();
    conj_sum += c.value();
  }
  return -0.5 * p.lambda * cached_norm_sq(st) -
         conj_sum / static_cast<double>(p.data.size());
}

double dual_decomp_cached(const DecomposedProblem& dp, const SolverState& st) {
  double conj_sum = 0.0;
  for (std::size_t j = 0; j < st.alpha.size(); ++j) {
    const ExtReal c =
        decomposed_conjugate({dp.weights[j], dp.base.loss}, -st.alpha[j]);
    if (!c.is_finite()) return -std::numeric_limits<double>::infinity();
    conj_sum += c.value();
  }
  return -0.5 * dp.base.lambda * cached_norm_sq(st) -
         conj_sum / static_cast<double>(dp.norm_count);
}

}  // namespace

TrainResult train(const Problem& p, SolverVariant variant,
                  const TrainBudget& budget, const SolverOptions& opt,
                  std::uint64_t seed, double ref_primal, bool record_wall) {
  if (budget.epochs < 1) throw ConfigError("budget.epochs must be >= 1");
  if (!(budget.gap_threshold > 0.0))
    throw ConfigError("gap threshold must be > 0");
  if (variant == SolverVariant::kSgd && !(opt.sgd_eta > 0.0))
    throw ConfigError("SGD requires a positive step size");
  if (p.data.size() == 0) throw ConfigError("empty dataset");
  if (!(p.lambda > 0.0)) throw ConfigError("lambda must be > 0");

  const std::size_t n = p.data.size();
  // Setup excluded from the measured wall: gram construction, rearrangement,
  // grid precomputation.
  Gram gram(p.kernel, p.data.features, opt.gram_cache);
  DecomposedProblem dp;
  const bool is_decomp = variant == SolverVariant::kDecomp;
  if (is_decomp) dp = decompose(p);
  const std::size_t ncoords = is_decomp ? dp.n_tilde : n;
  double model_scale = 1.0;
  if (variant == SolverVariant::kNaive || variant == SolverVariant::kApprox)
    model_scale = 1.0 / (p.lambda * static_cast<double>(n));
  else if (is_decomp)
    model_scale = 1.0 / (p.lambda * static_cast<double>(dp.norm_count));

  SolverState st = make_state(ncoords, model_scale, seed);
  GridAuxCache aux(p.loss, opt.grid_points ? opt.grid_points : n,
                   opt.grid_offset);
  if (variant == SolverVariant::kApprox) aux.build_index(p.data.labels);

  // Some coordinate with anchor i exists for every base example.
  std::vector<std::size_t> base_coord;
  if (is_decomp) {
    base_coord.assign(n, 0);
    for (std::size_t j = 0; j < dp.n_tilde; ++j)
      base_coord[dp.anchor_map[j]] = j;
  }

  RunTrace trace;
  const auto snap_clock = [] { return std::chrono::steady_clock::now(); };
  const auto seconds = [](auto from, auto to) {
    return std::chrono::duration<double>(to - from).count();
  };

  std::vector<double> base_scores(n, 0.0);
  const auto take_snapshot = [&](std::size_t epoch) {
    const auto t0 = snap_clock();
    const double norm_sq = cached_norm_sq(st);
    if (is_decomp) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = base_coord[i];
        base_scores[i] = dp.signs[j] * st.scores[j];
      }
    } else {
      std::copy(st.scores.begin(), st.scores.end(), base_scores.begin());
    }
    const double primal = primal_risk_from_scores(p, base_scores, norm_sq);
    double dual = kNan;
    if (variant == SolverVariant::kNaive || variant == SolverVariant::kApprox)
      dual = dual_naive_cached(p, st, opt.conj_tol);
    else if (is_decomp)
      dual = dual_decomp_cached(dp, st);
    double gap;
    if (variant == SolverVariant::kSgd)
      gap = std::isnan(ref_primal) ? kNan : primal - ref_primal;
    else
      gap = primal - dual;
    trace.snapshot_seconds += seconds(t0, snap_clock());
    const double wall =
        record_wall ? trace.solver_seconds + trace.snapshot_seconds : 0.0;
    trace.rows.push_back({epoch, wall, primal, dual, gap, st.iter});
    return gap;
  };

  take_snapshot(0);
  for (std::size_t epoch = 1; epoch <= budget.epochs; ++epoch) {
    const auto t0 = snap_clock();
    for (std::size_t s = 0; s < ncoords; ++s) {
      const std::size_t i = st.rng.uniform_index(ncoords);
      switch (variant) {
        case SolverVariant::kNaive:
          sdca_naive_step(st, p, gram, i, opt.conj_tol);
          break;
        case SolverVariant::kApprox:
          sdca_approx_step(st, p, gram, i, aux, opt);
          break;
        case SolverVariant::kDecomp:
          sdca_decomp_step(st, dp, gram, i, opt);
          break;
        case SolverVariant::kSgd:
          sgd_step(st, p, gram, i, opt.sgd_eta);
          break;
      }
    }
    resync_scores(st, p, gram, variant, is_decomp ? &dp : nullptr);
    trace.solver_seconds += seconds(t0, snap_clock());

    if (epoch % budget.snapshot_every == 0 || epoch == budget.epochs) {
      const double gap = take_snapshot(epoch);
      if (!std::isnan(gap) && gap <= budget.gap_threshold) {
        trace.converged = true;
        break;
      }
    }
  }

  DualModel model;
  model.kernel = p.kernel;
  model.lambda = p.lambda;
  if (is_decomp) {
    model.anchors = p.data.features;
    model.coeffs.assign(n, 0.0);
    for (std::size_t j = 0; j < dp.n_tilde; ++j)
      model.coeffs[dp.anchor_map[j]] += dp.signs[j] * st.alpha[j];
    model.scale = model_scale;
  } else {
    model.anchors = p.data.features;
    model.coeffs = st.alpha;
    model.scale = model_scale;
  }
  return {std::move(model), std::move(trace)};
}

}  // namespace mixkern
