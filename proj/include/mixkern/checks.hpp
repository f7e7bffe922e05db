#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mixkern/objectives.hpp"
#include "mixkern/rng.hpp"

namespace mixkern::checks {

// Oracles in this module are deliberately independent of the closed-form /
// search paths they validate: conjugates by dense grid maximization of the
// defining sup, infimal convolutions by brute-force grid minimization,
// derivatives by central differences.

// max over zeta in [lo, hi] step h of (a zeta - phi0(zeta)); loss values are
// precomputed once so batches of evaluation points stay cheap.
class ConjugateGridOracle {
 public:
  ConjugateGridOracle(const LossSpec& loss, double lo = -50.0, double hi = 50.0,
                      double step = 1e-4);
  double eval(double a) const;

 private:
  double lo_, step_;
  std::vector<double> phi_;
};

// Direct-definition oracle for the mixup conjugate: sup of a zeta -
// phi_mup(zeta; y) over a dense zeta grid.
double mixup_conjugate_direct_oracle(const LossSpec& loss, double a, double y,
                                     double lo = -50.0, double hi = 50.0,
                                     double step = 1e-3);

// Brute-force u-grid minimization of the infimal convolution for |y| < 1.
// Unbounded feasible intervals (quadratic hinge) are windowed around the
// analytic minimizer of the quadratic objective.
double infconv_grid_oracle(const LossSpec& loss, double a, double y,
                           double step = 1e-5);

double central_difference(double (*fn)(double, const void*), const void* ctx,
                          double x, double h);

// Synthetic data: two isotropic gaussians at +-separation/2 along the first
// axis, labels -1/+1, balanced.
LabeledDataset two_gaussians(std::size_t n, std::size_t dim, double separation,
                             std::uint64_t seed);

// Random small problem for property checks: gaussian blob features, labels a
// mix of binary and uniform fractional values (at least frac_share
// fractional), RBF kernel, lambda = lambda_over_n / n.
Problem random_problem(Rng& rng, std::size_t n_lo, std::size_t n_hi,
                       double frac_share, const LossSpec& loss,
                       double lambda_over_n = 1.0);

// Uniform draw from the feasible alpha interval of coordinate i of the
// naive dual (clipped to [-3, 3] when unbounded).
double random_feasible_alpha(Rng& rng, const LossSpec& loss, double y);

struct SuiteResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;
  std::string detail;
};

SuiteResult check_conjugate_oracle(std::uint64_t seed, std::size_t per_loss = 200);
SuiteResult check_gradients(std::uint64_t seed, std::size_t samples = 1000);
SuiteResult check_fenchel_young(std::uint64_t seed, std::size_t samples = 1000);
SuiteResult check_grid_bound(std::uint64_t seed, std::size_t min_steps = 1000);
SuiteResult check_decomposition_identity(std::uint64_t seed,
                                         std::size_t instances = 50);
SuiteResult check_weak_duality(std::uint64_t seed, std::size_t instances = 40);

std::vector<SuiteResult> run_all_suites(std::uint64_t seed);

}  // namespace mixkern::checks
