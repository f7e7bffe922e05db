#pragma once

#include <cassert>
#include <limits>
#include <optional>

namespace mixkern {

// Value in R ∪ {+inf}. Conjugates return this so that out-of-domain
// arguments are an explicit branch for callers, never a large float that
// silently corrupts a step size.
class ExtReal {
 public:
  static ExtReal finite(double v) { return ExtReal(v, true); }
  static ExtReal infinity() { return ExtReal(0.0, false); }

  bool is_finite() const { return finite_; }
  // Finite value; calling on the infinite variant is a bug.
  double value() const {
    assert(finite_);
    return v_;
  }
  // Finite value, or IEEE +inf for the infinite variant (for sums where
  // propagation is wanted).
  double value_or_inf() const {
    return finite_ ? v_ : std::numeric_limits<double>::infinity();
  }

 private:
  ExtReal(double v, bool finite) : v_(v), finite_(finite) {}
  double v_;
  bool finite_;
};

struct Interval {
  double lo;
  double hi;  // lo <= hi; lo may be -inf
};

enum class LossKind { kBce, kSmoothedHinge, kQuadraticHinge };

// A base loss phi0 together with its smoothness constant: phi0 is
// (1/gamma_sm)-smooth, equivalently the conjugate phi0* is gamma_sm-strongly
// convex on its effective domain.
struct LossSpec {
  LossKind kind;
  double gamma_sm;

  // gamma is fixed at 4 for BCE: sup phi0'' = 1/4.
  static LossSpec bce() { return {LossKind::kBce, 4.0}; }
  static LossSpec smoothed_hinge(double gamma);  // gamma in (0,1)
  static LossSpec quadratic_hinge(double gamma); // gamma > 0
};

// One term of the rearranged risk: weight * phi0 with weight = 1 + y > 0.
struct DecomposedLoss {
  double weight;
  LossSpec base;
};

double loss_value(const LossSpec& loss, double s);
double loss_grad(const LossSpec& loss, double s);

// Effective domain of phi0*: [-1, 0] for BCE and smoothed hinge,
// (-inf, 0] for the quadratic hinge.
Interval conjugate_domain(const LossSpec& loss);

// phi0*(a) = sup_z (a z - phi0(z)); closed form for all three losses.
ExtReal conjugate_value(const LossSpec& loss, double a);

// phi_mup(s; y) = (1+y)/2 phi0(s) + (1-y)/2 phi0(-s), y in [-1, 1].
double mixup_loss_value(const LossSpec& loss, double s, double y);
double mixup_loss_grad(const LossSpec& loss, double s, double y);

// Feasible u-interval of the infimal convolution computing
// phi_mup*(-alpha; y): both scaled conjugate arguments must be in-domain.
// Empty intersection -> nullopt (the conjugate is then +inf). |y| < 1.
std::optional<Interval> mixup_conjugate_argmin_bounds(const LossSpec& loss,
                                                      double alpha, double y);

// phi_mup*(a; y). For |y| = 1 the closed form of phi0* (no search); for
// |y| < 1 the infimal convolution
//   inf_u (1+y)/2 phi0*(2u/(1+y)) + (1-y)/2 phi0*(2(u-a)/(1-y))
// minimized by golden section over the feasible interval to absolute
// accuracy ~tol.
ExtReal mixup_conjugate(const LossSpec& loss, double a, double y, double tol);

// (w phi0)*(a) = w phi0*(a / w); constant time.
ExtReal decomposed_conjugate(const DecomposedLoss& d, double a);

// Golden-section minimizer of a convex objective on [lo, hi]; returns the
// best sampled value and (optionally) its location. Used by the infimal
// convolution and exposed for tests.
double golden_section_min(double lo, double hi, double tol,
                          double (*fn)(double, const void*), const void* ctx,
                          double* argmin = nullptr);

}  // namespace mixkern
