#pragma once

// Shared test utilities: seeded random generators for groups and configs,
// plus independent reference implementations (different algorithms than the
// library's) for medians and moments.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "drsaf/drsaf.hpp"

namespace testutil {

// Random valid reward config spanning the legal parameter space, including
// zero alphas/deltas.
inline drsaf::RewardConfig random_config(drsaf::Rng& rng) {
  drsaf::RewardConfig cfg;
  cfg.acc_reward = 0.5 + 1.5 * rng.uniform();
  cfg.alpha1 = 0.5 * rng.uniform();
  cfg.alpha2 = 0.5 * rng.uniform();
  cfg.delta_comp = 0.9 * cfg.acc_reward * rng.uniform();
  cfg.delta_ext = 0.9 * cfg.acc_reward * rng.uniform();
  cfg.gamma = -0.002 * rng.uniform();
  cfg.cfrb_threshold = 0.6 + 0.4 * rng.uniform();
  cfg.cirb_threshold = 0.4 * rng.uniform();
  if (cfg.cirb_threshold >= cfg.cfrb_threshold)
    cfg.cirb_threshold = cfg.cfrb_threshold / 2.0;
  drsaf::validate_config(cfg);
  return cfg;
}

// Random group with k in [2, 32]: arbitrary lengths, correctness with a
// per-group bias (so all-correct and all-incorrect groups occur), and all
// three tag values.
inline drsaf::RolloutGroup random_group(drsaf::Rng& rng) {
  drsaf::RolloutGroup g;
  g.problem_id = "p" + std::to_string(static_cast<int>(rng.uniform() * 1e6));
  const std::size_t k = 2 + static_cast<std::size_t>(rng.uniform() * 31.0);
  const double q = rng.uniform();  // correctness bias for this group
  for (std::size_t i = 0; i < k; ++i) {
    drsaf::RolloutSample s;
    s.length = static_cast<std::int64_t>(rng.uniform() * 4000.0);
    s.correct = rng.bernoulli(q);
    const double t = rng.uniform();
    s.aware_tag = t < 1.0 / 3 ? drsaf::AwareTag::CFRB
                : t < 2.0 / 3 ? drsaf::AwareTag::PFRB
                              : drsaf::AwareTag::ABSENT;
    g.samples.push_back(s);
  }
  return g;
}

// Reference median via nth_element (the library sorts instead).
inline double oracle_median(std::vector<std::int64_t> v) {
  const std::size_t n = v.size();
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (n % 2 == 1) return static_cast<double>(*mid);
  auto lower = std::max_element(v.begin(), mid);
  return (static_cast<double>(*lower) + static_cast<double>(*mid)) / 2.0;
}

// Reference mean/std at extended precision.
inline std::pair<double, double> oracle_stats(const std::vector<double>& v) {
  long double sum = 0.0L;
  for (double x : v) sum += x;
  const long double mean = sum / static_cast<long double>(v.size());
  long double sq = 0.0L;
  for (double x : v) sq += (x - mean) * (x - mean);
  const long double var = sq / static_cast<long double>(v.size());
  return {static_cast<double>(mean),
          static_cast<double>(std::sqrt(static_cast<double>(var)))};
}

}  // namespace testutil
