#pragma once

// Deterministic random primitives. mt19937_64 has a fully specified output
// sequence, but the <random> distributions on top of it are
// implementation-defined — two standard libraries given the same seed may
// disagree. Every stochastic path in this library therefore goes through
// the hand-rolled mappings below, so a seed pins byte-identical output on
// any conforming toolchain.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

#include "drsaf/types.hpp"

namespace drsaf {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via the Marsaglia polar method. Avoids sin/cos, whose
  // library implementations differ in the last ulp across platforms.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  // Index draw proportional to nonnegative weights (need not be
  // normalized); a plain CDF walk.
  std::size_t categorical(std::span<const double> weights) {
    if (weights.empty())
      throw Error(ErrorCode::InvalidConfig, "categorical draw needs weights");
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0))
      throw Error(ErrorCode::InvalidConfig,
                  "categorical weights must have positive sum");
    double x = uniform() * total;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      x -= weights[i];
      if (x < 0.0) return i;
    }
    return weights.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace drsaf
