#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "mixkern/objectives.hpp"
#include "mixkern/rng.hpp"

namespace mixkern {

enum class SolverVariant { kNaive, kApprox, kDecomp, kSgd };
enum class GridScan { kBinary, kLinear };

struct SolverOptions {
  // Tolerance of the golden-section search inside the naive solver's
  // conjugate and the dual evaluated at snapshots.
  double conj_tol = 1e-10;
  // Grid-point selection for the approximate coefficient: false = the
  // min/max selection rules as stated; true = keep the satisfying grid
  // point maximizing the coefficient (tighter bound, same guarantee).
  bool tight_zeta = false;
  GridScan grid_scan = GridScan::kBinary;
  // Use the uniform gamma_sm/2 strong-convexity constant for decomposition
  // coordinates instead of the tight per-coordinate gamma_sm/(1+y).
  bool decomp_uniform_gamma = false;
  std::size_t grid_points = 0;  // grid intervals; 0 = dataset size
  double grid_offset = 4.0;     // exponent offset of the log-spaced grids
  double sgd_eta = 0.0;         // required for the SGD variant
  bool gram_cache = true;
  // Cross-check the grid coefficient against the numeric conjugate at every
  // approx step (expensive; test harness use).
  bool audit_grid_bound = false;
};

struct TrainBudget {
  std::size_t epochs = 5000;
  double gap_threshold = 1e-5;
  std::size_t snapshot_every = 1;
};

struct TraceRow {
  std::size_t epoch = 0;
  double wall_seconds = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  std::size_t n_steps = 0;
};

struct RunTrace {
  std::vector<TraceRow> rows;
  bool converged = false;
  double solver_seconds = 0.0;
  double snapshot_seconds = 0.0;
};

// Dual vector with cached scores z_j. For naive/approx, scores[j] = f(x_j);
// for decomposition, scores[j] = sigma_j f(x_j) over kept coordinates; for
// SGD, alpha holds the primal expansion coefficients and model_scale = 1.
struct SolverState {
  std::vector<double> alpha;
  std::vector<double> scores;
  std::size_t iter = 0;
  Rng rng;
  double model_scale = 1.0;
};

SolverState make_state(std::size_t ncoords, double model_scale,
                       std::uint64_t seed);

struct StepQuantities {
  double z = 0.0;
  double u = 0.0;
  double q = 0.0;
  double k_ii = 0.0;
  double s_bar = 0.0;
  double f = 0.0;  // parabola coefficient (exact or grid lower bound)
};

// Log-spaced grids and level-set bounds for one fractional label value,
// with the blend's gradient and value tabulated at every grid point so hot
// steps read instead of re-deriving them.
struct GridSearchAux {
  double b_lower = 0.0;  // inf of the level set, < 0
  double b_upper = 0.0;  // sup of the level set, > 0
  std::vector<double> grid_pos;  // ascending, n+1 points
  std::vector<double> grid_neg;  // ascending, n+1 points
  std::vector<double> neg_grad_pos;  // -grad phi_mup at grid_pos, nonincreasing
  std::vector<double> neg_grad_neg;  // -grad phi_mup at grid_neg, nonincreasing
  std::vector<double> value_pos;     // phi_mup at grid_pos
  std::vector<double> value_neg;     // phi_mup at grid_neg
  double value_at_zero = 0.0;        // phi_mup(0; y) = phi0(0)
  double alpha_diamond = 0.0;        // -grad phi_mup(0; y)
};

// Level bounds by doubling bracket + bisection to 1e-8; grids with exactly
// n+1 points each. |y| < 1.
GridSearchAux build_grid_aux(const LossSpec& loss, double y, std::size_t n,
                             double offset = 4.0);

// Grid lower bound for the parabola coefficient at state (z, alpha_i);
// falls back to zeta = 0 when no grid point satisfies the branch
// inequality. Never exceeds the exact coefficient.
double find_f_tilde(const LossSpec& loss, double y, double z, double alpha_i,
                    const GridSearchAux& aux, bool tight, GridScan scan,
                    double* zeta_out = nullptr);

// Per-run cache of GridSearchAux keyed by label value, optionally indexed
// by example so hot steps avoid the map lookup.
class GridAuxCache {
 public:
  GridAuxCache(const LossSpec& loss, std::size_t n, double offset)
      : loss_(loss), n_(n), offset_(offset) {}
  const GridSearchAux& get(double y);

  // Precomputes per-example aux pointers (null for binary labels).
  void build_index(const std::vector<double>& labels);
  const GridSearchAux* indexed(std::size_t i) const {
    return i < by_example_.size() ? by_example_[i] : nullptr;
  }

 private:
  LossSpec loss_;
  std::size_t n_;
  double offset_;
  std::map<double, GridSearchAux> cache_;
  std::vector<const GridSearchAux*> by_example_;
};

// One coordinate step of each variant. The gram is over the base features.
StepQuantities sdca_naive_step(SolverState& st, const Problem& p,
                               const Gram& gram, std::size_t i, double tol);
StepQuantities sdca_approx_step(SolverState& st, const Problem& p,
                                const Gram& gram, std::size_t i,
                                GridAuxCache& aux, const SolverOptions& opt);
StepQuantities sdca_decomp_step(SolverState& st, const DecomposedProblem& dp,
                                const Gram& gram, std::size_t j,
                                const SolverOptions& opt);
void sgd_step(SolverState& st, const Problem& p, const Gram& gram,
              std::size_t i, double eta);

// Recompute all cached scores from alpha (done once per epoch; in debug
// builds asserts the incremental cache drifted by at most 1e-8).
void resync_scores(SolverState& st, const Problem& p, const Gram& gram,
                   SolverVariant variant, const DecomposedProblem* dp);

struct TrainResult {
  DualModel model;
  RunTrace trace;
};

// Runs epochs of uniformly random coordinate picks from alpha = 0, taking a
// snapshot every snapshot_every epochs, until the duality gap certificate
// reaches budget.gap_threshold or epochs are exhausted. For SGD the gap
// column holds primal - ref_primal when a reference is supplied (NaN
// otherwise) since SGD carries no dual certificate. record_wall controls
// whether trace rows carry measured seconds (off by default so traces are
// bitwise reproducible).
TrainResult train(const Problem& p, SolverVariant variant,
                  const TrainBudget& budget, const SolverOptions& opt,
                  std::uint64_t seed,
                  double ref_primal = std::numeric_limits<double>::quiet_NaN(),
                  bool record_wall = false);

}  // namespace mixkern
