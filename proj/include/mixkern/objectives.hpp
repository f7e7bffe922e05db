#pragma once

#include <span>
#include <vector>

#include "mixkern/dataset.hpp"
#include "mixkern/kernel.hpp"
#include "mixkern/losses.hpp"

namespace mixkern {

struct Problem {
  LabeledDataset data;
  LossSpec loss = LossSpec::bce();
  KernelSpec kernel = KernelSpec::linear();
  double lambda = 1.0;
};

// Rearranged risk: each example splits into a +1 copy with weight (1+y) and
// a -1 copy with weight (1-y); zero-weight copies are dropped from the index
// set. The rearranged loss sum is normalized by norm_count = 2n (the count
// including dropped zero-weight terms), which keeps the rearranged risk
// identical to the base risk for every label mix. n_tilde = |index_set| is
// the number of free dual coordinates.
struct DecomposedProblem {
  Problem base;
  std::vector<std::size_t> index_set;   // indices into [2n]
  std::vector<double> signs;            // sigma_j, +-1, per kept coordinate
  std::vector<double> weights;          // 1 + y_j in (0, 2]
  std::vector<std::size_t> anchor_map;  // kept coordinate -> base example
  std::size_t n_tilde = 0;
  std::size_t norm_count = 0;           // 2n
};

DecomposedProblem decompose(const Problem& p);

// (lambda/2) |f|^2 + (1/n) sum_i phi_mup(f(x_i); y_i).
double primal_risk(const Problem& p, const DualModel& model);
// Same from cached per-example scores and a precomputed |f|^2.
double primal_risk_from_scores(const Problem& p, std::span<const double> scores,
                               double norm_sq);

// Naive dual D0(alpha) = -(lambda/2)|f_alpha|^2 - (1/n) sum_i
// phi_mup*(-alpha_i; y_i); -inf when some -alpha_i is out of domain.
// tol is the infimal-convolution search tolerance.
double dual_naive(const Problem& p, std::span<const double> alpha, double tol);

// Rearranged dual over the kept coordinates; closed-form conjugates only.
double dual_decomp(const DecomposedProblem& dp, std::span<const double> alpha);

// |f_alpha|^2 for the naive parameterization f = (1/(lambda n)) sum alpha_i k(x_i,.)
double naive_norm_sq(const Problem& p, std::span<const double> alpha);
double decomp_norm_sq(const DecomposedProblem& dp, std::span<const double> alpha);

struct ObjectiveSnapshot {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;  // primal - dual
  std::size_t epoch = 0;
  double wall_seconds = 0.0;
};

ObjectiveSnapshot snapshot(const Problem& p, const DualModel& model,
                           double dual_value, std::size_t epoch, double t);

}  // namespace mixkern
