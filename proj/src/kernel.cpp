#include "mixkern/kernel.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mixkern/errors.hpp"

namespace mixkern {

KernelSpec KernelSpec::rbf(double width) {
  if (!(width > 0.0)) throw std::invalid_argument("rbf width must be > 0");
  return {KernelKind::kRbf, width, 1, 0.0};
}

KernelSpec KernelSpec::polynomial(int degree, double offset) {
  if (degree < 1) throw std::invalid_argument("polynomial degree must be >= 1");
  if (offset < 0.0) throw std::invalid_argument("polynomial offset must be >= 0");
  return {KernelKind::kPolynomial, 1.0, degree, offset};
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> x2) {
  if (x.size() != x2.size())
    throw DimensionMismatch("kernel_eval: vectors of different dimension");
  switch (spec.kind) {
    case KernelKind::kRbf: {
      double d2 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - x2[i];
        d2 += d * d;
      }
      return std::exp(-d2 / (2.0 * spec.width * spec.width));
    }
    case KernelKind::kPolynomial:
      return std::pow(dot(x, x2) + spec.offset, spec.degree);
    case KernelKind::kLinear:
      return dot(x, x2);
  }
  return 0.0;
}

std::vector<double> gram_diag(const KernelSpec& spec,
                              const std::vector<std::vector<double>>& xs) {
  std::vector<double> d(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) d[i] = kernel_eval(spec, xs[i], xs[i]);
  return d;
}

double r_max(std::span<const double> diag) {
  double m = 0.0;
  for (double v : diag) m = std::max(m, std::sqrt(v));
  return m;
}

Gram::Gram(const KernelSpec& spec, std::vector<std::vector<double>> points,
           bool cache_full)
    : spec_(spec), points_(std::move(points)), cached_(cache_full) {
  const std::size_t n = points_.size();
  diag_.resize(n);
  if (cached_) {
    full_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const double v = kernel_eval(spec_, points_[i], points_[j]);
        full_[i * n + j] = v;
        full_[j * n + i] = v;
      }
    }
    for (std::size_t i = 0; i < n; ++i) diag_[i] = full_[i * n + i];
  } else {
    for (std::size_t i = 0; i < n; ++i)
      diag_[i] = kernel_eval(spec_, points_[i], points_[i]);
  }
  for (double v : diag_) r_max_ = std::max(r_max_, std::sqrt(v));
}

double Gram::at(std::size_t i, std::size_t j) const {
  if (cached_) return full_[i * points_.size() + j];
  return kernel_eval(spec_, points_[i], points_[j]);
}

void Gram::add_scaled_row(std::size_t i, double factor,
                          std::span<double> out) const {
  const std::size_t n = points_.size();
  if (cached_) {
    const double* row = full_.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) out[j] += factor * row[j];
  } else {
    for (std::size_t j = 0; j < n; ++j)
      out[j] += factor * kernel_eval(spec_, points_[i], points_[j]);
  }
}

double predict(const DualModel& model, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t j = 0; j < model.anchors.size(); ++j)
    s += model.coeffs[j] * kernel_eval(model.kernel, model.anchors[j], x);
  return model.scale * s;
}

double rkhs_norm_sq(const DualModel& model) {
  const std::size_t m = model.anchors.size();
  double s = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    s += model.coeffs[j] * model.coeffs[j] *
         kernel_eval(model.kernel, model.anchors[j], model.anchors[j]);
    for (std::size_t k = j + 1; k < m; ++k)
      s += 2.0 * model.coeffs[j] * model.coeffs[k] *
           kernel_eval(model.kernel, model.anchors[j], model.anchors[k]);
  }
  return model.scale * model.scale * s;
}

double rkhs_norm_sq_from_scores(const DualModel& model,
                                std::span<const double> anchor_scores) {
  double s = 0.0;
  for (std::size_t j = 0; j < model.coeffs.size(); ++j)
    s += model.coeffs[j] * anchor_scores[j];
  return model.scale * s;
}

namespace {

void put_double(std::FILE* f, double v) { std::fprintf(f, "%.17g", v); }

}  // namespace

void save_model(const DualModel& model, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open model file for writing: " + path);
  switch (model.kernel.kind) {
    case KernelKind::kRbf:
      std::fprintf(f, "kernel rbf\n");
      std::fprintf(f, "rbf_width ");
      put_double(f, model.kernel.width);
      std::fprintf(f, "\n");
      break;
    case KernelKind::kPolynomial:
      std::fprintf(f, "kernel poly\n");
      std::fprintf(f, "poly_degree %d\n", model.kernel.degree);
      std::fprintf(f, "poly_offset ");
      put_double(f, model.kernel.offset);
      std::fprintf(f, "\n");
      break;
    case KernelKind::kLinear:
      std::fprintf(f, "kernel linear\n");
      break;
  }
  std::fprintf(f, "lambda ");
  put_double(f, model.lambda);
  std::fprintf(f, "\nscale ");
  put_double(f, model.scale);
  std::fprintf(f, "\nanchors %zu\n", model.anchors.size());
  std::fprintf(f, "dim %zu\n", model.anchors.empty() ? 0 : model.anchors[0].size());
  for (std::size_t j = 0; j < model.anchors.size(); ++j) {
    put_double(f, model.coeffs[j]);
    for (double v : model.anchors[j]) {
      std::fputc(' ', f);
      put_double(f, v);
    }
    std::fputc('\n', f);
  }
  std::fclose(f);
}

DualModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  DualModel model;
  std::string key;
  std::size_t n_anchors = 0, dim = 0;
  bool have_counts = false;
  while (!have_counts && (in >> key)) {
    if (key == "kernel") {
      std::string kind;
      in >> kind;
      if (kind == "rbf") model.kernel.kind = KernelKind::kRbf;
      else if (kind == "poly") model.kernel.kind = KernelKind::kPolynomial;
      else if (kind == "linear") model.kernel.kind = KernelKind::kLinear;
      else throw std::runtime_error("unknown kernel kind in model file: " + kind);
    } else if (key == "rbf_width") {
      in >> model.kernel.width;
    } else if (key == "poly_degree") {
      in >> model.kernel.degree;
    } else if (key == "poly_offset") {
      in >> model.kernel.offset;
    } else if (key == "lambda") {
      in >> model.lambda;
    } else if (key == "scale") {
      in >> model.scale;
    } else if (key == "anchors") {
      in >> n_anchors;
    } else if (key == "dim") {
      in >> dim;
      have_counts = true;
    } else {
      throw std::runtime_error("unknown model file key: " + key);
    }
  }
  if (!in) throw std::runtime_error("truncated model file header: " + path);
  model.anchors.resize(n_anchors, std::vector<double>(dim));
  model.coeffs.resize(n_anchors);
  for (std::size_t j = 0; j < n_anchors; ++j) {
    in >> model.coeffs[j];
    for (std::size_t k = 0; k < dim; ++k) in >> model.anchors[j][k];
  }
  if (!in) throw std::runtime_error("truncated model file body: " + path);
  return model;
}

}  // namespace mixkern
