#pragma once

// Boundary classification: a group's empirical accuracy places its problem
// in CFRB / PFRB / CIRB, and the median correct length defines the
// compression threshold used by the length reward.

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "drsaf/types.hpp"

namespace drsaf {

struct ClassificationResult {
  double accuracy = 0.0;
  BoundaryClass boundary = BoundaryClass::PFRB;
  double len_threshold = 0.0;
  bool used_fallback = false;  // true when no correct sample existed
};

// Fraction of correct samples in [0, 1].
inline double group_accuracy(const RolloutGroup& group) {
  if (group.samples.empty())
    throw Error(ErrorCode::EmptyGroup,
                "group '" + group.problem_id + "' has no samples");
  std::size_t correct = 0;
  for (const RolloutSample& s : group.samples) correct += s.correct ? 1 : 0;
  return static_cast<double>(correct) /
         static_cast<double>(group.samples.size());
}

// Median response length of the correct samples (even count -> midpoint of
// the two central values). When the group has no correct sample the
// threshold falls back to the mean length of all samples; the flag in the
// returned pair reports which path was taken.
inline std::pair<double, bool> length_threshold(const RolloutGroup& group) {
  if (group.samples.empty())
    throw Error(ErrorCode::EmptyGroup,
                "group '" + group.problem_id + "' has no samples");
  std::vector<std::int64_t> lens;
  lens.reserve(group.samples.size());
  for (const RolloutSample& s : group.samples)
    if (s.correct) lens.push_back(s.length);

  if (lens.empty()) {
    double sum = 0.0;
    for (const RolloutSample& s : group.samples)
      sum += static_cast<double>(s.length);
    return {sum / static_cast<double>(group.samples.size()), true};
  }

  std::sort(lens.begin(), lens.end());
  const std::size_t n = lens.size();
  if (n % 2 == 1) return {static_cast<double>(lens[n / 2]), false};
  return {(static_cast<double>(lens[n / 2 - 1]) +
           static_cast<double>(lens[n / 2])) /
              2.0,
          false};
}

// Accuracy at or above cfrb_threshold is CFRB; strictly below
// cirb_threshold is CIRB; everything between is PFRB.
inline ClassificationResult classify(const RolloutGroup& group,
                                     const RewardConfig& cfg) {
  ClassificationResult out;
  out.accuracy = group_accuracy(group);
  if (out.accuracy >= cfg.cfrb_threshold) {
    out.boundary = BoundaryClass::CFRB;
  } else if (out.accuracy < cfg.cirb_threshold) {
    out.boundary = BoundaryClass::CIRB;
  } else {
    out.boundary = BoundaryClass::PFRB;
  }
  const auto [threshold, fallback] = length_threshold(group);
  out.len_threshold = threshold;
  out.used_fallback = fallback;
  return out;
}

}  // namespace drsaf
