#pragma once

#include <cstdint>

namespace mixkern {

// Counter-based deterministic generator (splitmix64 over an advancing
// counter). All randomness in the library flows through this so that runs
// reproduce bitwise across platforms; std:: distributions are never used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : counter_(seed) {}

  std::uint64_t next_u64();

  // Uniform in [0, n), n >= 1. Multiply-high mapping, bias < 2^-64.
  std::uint64_t uniform_index(std::uint64_t n);

  // Uniform in the open interval (0, 1).
  double uniform_open01();

  // Standard normal via Box-Muller.
  double normal();

  // Gamma(shape) with unit scale, Marsaglia-Tsang; shape > 0.
  double gamma(double shape);

  // Beta(a, b) from two gamma draws.
  double beta(double a, double b);

  // Deterministic child stream keyed by an id.
  Rng derive(std::uint64_t stream_id) const;

 private:
  std::uint64_t counter_;
};

}  // namespace mixkern
