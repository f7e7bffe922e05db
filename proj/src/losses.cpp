#include "mixkern/losses.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace mixkern {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

LossSpec LossSpec::smoothed_hinge(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("smoothed hinge needs gamma_sm in (0,1)");
  return {LossKind::kSmoothedHinge, gamma};
}

LossSpec LossSpec::quadratic_hinge(double gamma) {
  if (!(gamma > 0.0))
    throw std::invalid_argument("quadratic hinge needs gamma_sm > 0");
  return {LossKind::kQuadraticHinge, gamma};
}

double loss_value(const LossSpec& loss, double s) {
  switch (loss.kind) {
    case LossKind::kBce:
      // log(1 + e^-s) without overflow on either side
      return s >= 0.0 ? std::log1p(std::exp(-s)) : -s + std::log1p(std::exp(s));
    case LossKind::kSmoothedHinge: {
      const double g = loss.gamma_sm;
      if (s < 1.0 - g) return 1.0 - s - 0.5 * g;
      if (s < 1.0) return (1.0 - s) * (1.0 - s) / (2.0 * g);
      return 0.0;
    }
    case LossKind::kQuadraticHinge: {
      const double m = 1.0 - s;
      return m > 0.0 ? m * m / (2.0 * loss.gamma_sm) : 0.0;
    }
  }
  return 0.0;
}

double loss_grad(const LossSpec& loss, double s) {
  switch (loss.kind) {
    case LossKind::kBce: {
      if (s >= 0.0) {
        const double t = std::exp(-s);
        return -t / (1.0 + t);
      }
      return -1.0 / (1.0 + std::exp(s));
    }
    case LossKind::kSmoothedHinge: {
      const double g = loss.gamma_sm;
      if (s < 1.0 - g) return -1.0;
      if (s < 1.0) return (s - 1.0) / g;
      return 0.0;
    }
    case LossKind::kQuadraticHinge:
      return s < 1.0 ? -(1.0 - s) / loss.gamma_sm : 0.0;
  }
  return 0.0;
}

Interval conjugate_domain(const LossSpec& loss) {
  if (loss.kind == LossKind::kQuadraticHinge) return {-kInf, 0.0};
  return {-1.0, 0.0};
}

ExtReal conjugate_value(const LossSpec& loss, double a) {
  switch (loss.kind) {
    case LossKind::kBce:
      if (a < -1.0 || a > 0.0) return ExtReal::infinity();
      // Legendre transform of log(1+e^-s); endpoints by limit, 0 log 0 := 0.
      return ExtReal::finite(xlogx(-a) + xlogx(1.0 + a));
    case LossKind::kSmoothedHinge:
      if (a < -1.0 || a > 0.0) return ExtReal::infinity();
      return ExtReal::finite(a + 0.5 * loss.gamma_sm * a * a);
    case LossKind::kQuadraticHinge:
      if (a > 0.0) return ExtReal::infinity();
      return ExtReal::finite(a + 0.5 * loss.gamma_sm * a * a);
  }
  return ExtReal::infinity();
}

double mixup_loss_value(const LossSpec& loss, double s, double y) {
  return 0.5 * (1.0 + y) * loss_value(loss, s) +
         0.5 * (1.0 - y) * loss_value(loss, -s);
}

double mixup_loss_grad(const LossSpec& loss, double s, double y) {
  return 0.5 * (1.0 + y) * loss_grad(loss, s) -
         0.5 * (1.0 - y) * loss_grad(loss, -s);
}

std::optional<Interval> mixup_conjugate_argmin_bounds(const LossSpec& loss,
                                                      double alpha, double y) {
  assert(std::abs(y) < 1.0);
  const double c1 = 0.5 * (1.0 + y);
  const double c2 = 0.5 * (1.0 - y);
  const Interval dom = conjugate_domain(loss);
  // u/c1 in dom  and  (alpha + u)/c2 in dom
  const double lo = std::max(c1 * dom.lo, c2 * dom.lo - alpha);
  const double hi = std::min(c1 * dom.hi, c2 * dom.hi - alpha);
  if (lo > hi) return std::nullopt;
  return Interval{lo, hi};
}

namespace {

struct InfConvCtx {
  const LossSpec* loss;
  double inv_c1;  // 1 / ((1+y)/2)
  double inv_c2;
  double c1, c2;
  double alpha;  // conjugate evaluated at -alpha
  double dom_lo, dom_hi;
};

// Scaled conjugate argument snapped onto the domain when floating point
// rounding pushes it out at a feasible-interval endpoint.
double clamped_conj(const LossSpec& loss, double arg, double lo, double hi) {
  if (arg < lo) arg = lo;
  if (arg > hi) arg = hi;
  return conjugate_value(loss, arg).value();
}

double infconv_objective(double u, const void* raw) {
  const auto& c = *static_cast<const InfConvCtx*>(raw);
  const double a1 = u * c.inv_c1;
  const double a2 = (c.alpha + u) * c.inv_c2;
  return c.c1 * clamped_conj(*c.loss, a1, c.dom_lo, c.dom_hi) +
         c.c2 * clamped_conj(*c.loss, a2, c.dom_lo, c.dom_hi);
}

}  // namespace

double golden_section_min(double lo, double hi, double tol,
                          double (*fn)(double, const void*), const void* ctx,
                          double* argmin) {
  static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double best_x = a, best_f = fn(a, ctx);
  const double fb = fn(b, ctx);
  if (fb < best_f) { best_f = fb; best_x = b; }
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = fn(c, ctx);
  double fd = fn(d, ctx);
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    if (fc <= fd) {
      b = d; d = c; fd = fc;
      c = b - kInvPhi * (b - a);
      fc = fn(c, ctx);
    } else {
      a = c; c = d; fc = fd;
      d = a + kInvPhi * (b - a);
      fd = fn(d, ctx);
    }
    if (fc < best_f) { best_f = fc; best_x = c; }
    if (fd < best_f) { best_f = fd; best_x = d; }
  }
  if (argmin) *argmin = best_x;
  return best_f;
}

ExtReal mixup_conjugate(const LossSpec& loss, double a, double y, double tol) {
  assert(tol > 0.0);
  // Non-interpolated labels: phi_mup(s; 1) = phi0(s), phi_mup(s; -1) = phi0(-s).
  if (y == 1.0) return conjugate_value(loss, a);
  if (y == -1.0) return conjugate_value(loss, -a);

  const double alpha = -a;
  const auto iv = mixup_conjugate_argmin_bounds(loss, alpha, y);
  if (!iv) return ExtReal::infinity();

  const Interval dom = conjugate_domain(loss);
  InfConvCtx ctx{&loss,
                 2.0 / (1.0 + y),
                 2.0 / (1.0 - y),
                 0.5 * (1.0 + y),
                 0.5 * (1.0 - y),
                 alpha,
                 dom.lo,
                 dom.hi};

  double lo = iv->lo;
  const double hi = iv->hi;
  if (!std::isfinite(lo)) {
    // Unbounded below (quadratic hinge): bracket by doubling leftwards.
    // The objective grows quadratically, so the bracket is found quickly.
    double w = 1.0;
    double f_prev = infconv_objective(hi - w, &ctx);
    int k = 0;
    while (k < 120) {
      const double f_next = infconv_objective(hi - 2.0 * w, &ctx);
      if (f_next >= f_prev) break;
      f_prev = f_next;
      w *= 2.0;
      ++k;
    }
    lo = hi - 2.0 * w;
  }
  if (hi - lo <= tol)
    return ExtReal::finite(std::min(infconv_objective(lo, &ctx),
                                    infconv_objective(hi, &ctx)));
  return ExtReal::finite(
      golden_section_min(lo, hi, tol, &infconv_objective, &ctx));
}

ExtReal decomposed_conjugate(const DecomposedLoss& d, double a) {
  assert(d.weight > 0.0);
  const ExtReal inner = conjugate_value(d.base, a / d.weight);
  if (!inner.is_finite()) return ExtReal::infinity();
  return ExtReal::finite(d.weight * inner.value());
}

}  // namespace mixkern
