#pragma once

// Reward terms. The effective reward of a sample is
//   R_eff = R_acc + R_len + R_aware
// where R_aware pays for a boundary tag that matches the side of the CFRB
// threshold the group landed on, and R_len pays for compression inside CFRB
// or extension inside CIRB. The static baseline R = R_acc + gamma * length
// is kept for comparison runs.

#include <vector>

#include "drsaf/boundary.hpp"
#include "drsaf/types.hpp"

namespace drsaf {

struct RewardBreakdown {
  double r_acc = 0.0;
  double r_aware = 0.0;
  double r_len = 0.0;
  double r_eff = 0.0;
};

inline double reward_acc(const RolloutSample& sample, const RewardConfig& cfg) {
  return sample.correct ? cfg.acc_reward : 0.0;
}

// +alpha1 when the tag agrees with the group's side of the CFRB threshold
// (CFRB tag on accuracy >= threshold, PFRB tag below it); -alpha2 for any
// other tag, including a missing one.
inline double reward_aware(const RolloutSample& sample,
                           const ClassificationResult& cls,
                           const RewardConfig& cfg) {
  const bool group_is_cfrb = cls.accuracy >= cfg.cfrb_threshold;
  const bool matched = group_is_cfrb ? sample.aware_tag == AwareTag::CFRB
                                     : sample.aware_tag == AwareTag::PFRB;
  return matched ? cfg.alpha1 : -cfg.alpha2;
}

// delta_comp for staying at or under the threshold inside CFRB, delta_ext
// for pushing past it inside CIRB (an exploration bonus, paid regardless of
// correctness), zero everywhere else — PFRB leaves length unshaped.
inline double reward_len(const RolloutSample& sample,
                         const ClassificationResult& cls,
                         const RewardConfig& cfg) {
  const double len = static_cast<double>(sample.length);
  if (cls.boundary == BoundaryClass::CFRB && len <= cls.len_threshold)
    return cfg.delta_comp;
  if (cls.boundary == BoundaryClass::CIRB && len > cls.len_threshold)
    return cfg.delta_ext;
  return 0.0;
}

// Per-sample breakdowns in input order, against a precomputed
// classification of the same group.
inline std::vector<RewardBreakdown> reward_eff(const RolloutGroup& group,
                                               const ClassificationResult& cls,
                                               const RewardConfig& cfg) {
  std::vector<RewardBreakdown> out;
  out.reserve(group.samples.size());
  for (const RolloutSample& s : group.samples) {
    RewardBreakdown b;
    b.r_acc = reward_acc(s, cfg);
    b.r_aware = reward_aware(s, cls, cfg);
    b.r_len = reward_len(s, cls, cfg);
    b.r_eff = b.r_acc + b.r_aware + b.r_len;
    out.push_back(b);
  }
  return out;
}

inline std::vector<RewardBreakdown> reward_eff(const RolloutGroup& group,
                                               const RewardConfig& cfg) {
  return reward_eff(group, classify(group, cfg), cfg);
}

// Static-baseline reward: correctness plus a linear length term. gamma is
// normally negative (a per-token penalty).
inline double reward_static(const RolloutSample& sample,
                            const RewardConfig& cfg) {
  return reward_acc(sample, cfg) + cfg.gamma * static_cast<double>(sample.length);
}

}  // namespace drsaf
