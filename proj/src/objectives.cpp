#include "mixkern/objectives.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mixkern {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

DecomposedProblem decompose(const Problem& p) {
  const std::size_t n = p.data.size();
  DecomposedProblem dp;
  dp.base = p;
  dp.norm_count = 2 * n;
  for (std::size_t i = 0; i < 2 * n; ++i) {
    const std::size_t base_idx = i < n ? i : i - n;
    const double sign = i < n ? 1.0 : -1.0;
    const double y_ext = sign * p.data.labels[base_idx];
    const double w = 1.0 + y_ext;
    if (w <= 0.0) continue;
    dp.index_set.push_back(i);
    dp.signs.push_back(sign);
    dp.weights.push_back(w);
    dp.anchor_map.push_back(base_idx);
  }
  dp.n_tilde = dp.index_set.size();
  return dp;
}

double primal_risk(const Problem& p, const DualModel& model) {
  const std::size_t n = p.data.size();
  double loss_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    loss_sum += mixup_loss_value(p.loss, predict(model, p.data.features[i]),
                                 p.data.labels[i]);
  return 0.5 * p.lambda * rkhs_norm_sq(model) + loss_sum / static_cast<double>(n);
}

double primal_risk_from_scores(const Problem& p, std::span<const double> scores,
                               double norm_sq) {
  const std::size_t n = p.data.size();
  double loss_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    loss_sum += mixup_loss_value(p.loss, scores[i], p.data.labels[i]);
  return 0.5 * p.lambda * norm_sq + loss_sum / static_cast<double>(n);
}

double naive_norm_sq(const Problem& p, std::span<const double> alpha) {
  const std::size_t n = p.data.size();
  const double scale = 1.0 / (p.lambda * static_cast<double>(n));
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (alpha[j] == 0.0) continue;
      s += alpha[i] * alpha[j] *
           kernel_eval(p.kernel, p.data.features[i], p.data.features[j]);
    }
  }
  return scale * scale * s;
}

double dual_naive(const Problem& p, std::span<const double> alpha, double tol) {
  const std::size_t n = p.data.size();
  if (alpha.size() != n) throw std::invalid_argument("dual_naive: alpha size != n");
  double conj_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const ExtReal c = mixup_conjugate(p.loss, -alpha[i], p.data.labels[i], tol);
    if (!c.is_finite()) return kNegInf;
    conj_sum += c.value();
  }
  return -0.5 * p.lambda * naive_norm_sq(p, alpha) -
         conj_sum / static_cast<double>(n);
}

double decomp_norm_sq(const DecomposedProblem& dp, std::span<const double> alpha) {
  const auto& data = dp.base.data;
  const double scale =
      1.0 / (dp.base.lambda * static_cast<double>(dp.norm_count));
  double s = 0.0;
  for (std::size_t a = 0; a < dp.n_tilde; ++a) {
    if (alpha[a] == 0.0) continue;
    for (std::size_t b = 0; b < dp.n_tilde; ++b) {
      if (alpha[b] == 0.0) continue;
      s += alpha[a] * dp.signs[a] * alpha[b] * dp.signs[b] *
           kernel_eval(dp.base.kernel, data.features[dp.anchor_map[a]],
                       data.features[dp.anchor_map[b]]);
    }
  }
  return scale * scale * s;
}

double dual_decomp(const DecomposedProblem& dp, std::span<const double> alpha) {
  if (alpha.size() != dp.n_tilde)
    throw std::invalid_argument("dual_decomp: alpha size != n_tilde");
  double conj_sum = 0.0;
  for (std::size_t a = 0; a < dp.n_tilde; ++a) {
    const DecomposedLoss dl{dp.weights[a], dp.base.loss};
    const ExtReal c = decomposed_conjugate(dl, -alpha[a]);
    if (!c.is_finite()) return kNegInf;
    conj_sum += c.value();
  }
  return -0.5 * dp.base.lambda * decomp_norm_sq(dp, alpha) -
         conj_sum / static_cast<double>(dp.norm_count);
}

ObjectiveSnapshot snapshot(const Problem& p, const DualModel& model,
                           double dual_value, std::size_t epoch, double t) {
  ObjectiveSnapshot s;
  s.primal = primal_risk(p, model);
  s.dual = dual_value;
  s.gap = s.primal - s.dual;
  s.epoch = epoch;
  s.wall_seconds = t;
  return s;
}

}  // namespace mixkern
