#pragma once

#include <span>
#include <string>
#include <vector>

namespace mixkern {

enum class KernelKind { kRbf, kPolynomial, kLinear };

struct KernelSpec {
  KernelKind kind = KernelKind::kLinear;
  double width = 1.0;   // RBF: k(x,x') = exp(-|x-x'|^2 / (2 width^2))
  int degree = 1;       // polynomial: (<x,x'> + offset)^degree
  double offset = 0.0;

  static KernelSpec rbf(double width);
  static KernelSpec polynomial(int degree, double offset);
  static KernelSpec linear() { return {KernelKind::kLinear, 1.0, 1, 0.0}; }
};

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> x2);

std::vector<double> gram_diag(const KernelSpec& spec,
                              const std::vector<std::vector<double>>& xs);

// R_mx = max_i sqrt(K_ii).
double r_max(std::span<const double> diag);

// Kernel evaluations against a fixed point set, with an optional
// precomputed full Gram matrix (O(n^2) memory). The diagonal is always
// precomputed; R_mx = max_i sqrt(K_ii).
class Gram {
 public:
  Gram(const KernelSpec& spec, std::vector<std::vector<double>> points,
       bool cache_full);

  std::size_t size() const { return points_.size(); }
  double at(std::size_t i, std::size_t j) const;
  double diag(std::size_t i) const { return diag_[i]; }
  const std::vector<double>& diag() const { return diag_; }
  double r_max() const { return r_max_; }
  const std::vector<std::vector<double>>& points() const { return points_; }

  // out[j] += factor * K(i, j) for all j.
  void add_scaled_row(std::size_t i, double factor, std::span<double> out) const;

  // Row pointer when the full matrix is cached, nullptr otherwise.
  const double* row(std::size_t i) const {
    return cached_ ? full_.data() + i * points_.size() : nullptr;
  }

 private:
  KernelSpec spec_;
  std::vector<std::vector<double>> points_;
  std::vector<double> diag_;
  std::vector<double> full_;  // row-major when cached
  double r_max_ = 0.0;
  bool cached_;
};

// f(x) = scale * sum_j coeffs[j] k(anchors[j], x).
struct DualModel {
  KernelSpec kernel;
  std::vector<std::vector<double>> anchors;
  std::vector<double> coeffs;
  double scale = 1.0;
  double lambda = 1.0;
};

double predict(const DualModel& model, std::span<const double> x);

// |f|^2 in the RKHS: scale^2 sum_{j,k} c_j c_k k(x_j, x_k).
double rkhs_norm_sq(const DualModel& model);
// Same quantity from cached anchor scores z_j = f(anchors[j]).
double rkhs_norm_sq_from_scores(const DualModel& model,
                                std::span<const double> anchor_scores);

void save_model(const DualModel& model, const std::string& path);
DualModel load_model(const std::string& path);

}  // namespace mixkern
