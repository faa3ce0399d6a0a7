#pragma once

// Group-relative advantages. VANILLA normalizes against the group mean;
// PRESERVED normalizes against a truncated mean clamped to the worst
// correct reward, which keeps every correct sample's advantage >= 0 while
// leaving the scale (the untruncated standard deviation) untouched.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "drsaf/rewards.hpp"
#include "drsaf/types.hpp"

namespace drsaf {

enum class AdvantageMode { VANILLA, PRESERVED };

// Two published forms of the truncated mean disagree: taking the max of the
// group mean and the worst correct reward can push the baseline above a
// correct sample's reward and give it negative advantage. Only MIN satisfies
// the preservation guarantee; MAX is retained as a diagnostic so the
// discrepancy stays demonstrable.
enum class TruncationVariant { MIN, MAX };

struct GroupStats {
  double mean = 0.0;
  double std_dev = 0.0;  // population form, divisor k
};

inline GroupStats group_stats(std::span<const double> rewards) {
  if (rewards.size() < 2)
    throw Error(ErrorCode::TooFewSamples,
                "group statistics need at least 2 rewards, got " +
                    std::to_string(rewards.size()));
  const double k = static_cast<double>(rewards.size());
  double sum = 0.0;
  for (double r : rewards) sum += r;
  const double mean = sum / k;
  double sq = 0.0;
  for (double r : rewards) sq += (r - mean) * (r - mean);
  return {mean, std::sqrt(sq / k)};
}

inline std::vector<double> advantage_vanilla(std::span<const double> rewards,
                                             const RewardConfig& cfg) {
  const GroupStats st = group_stats(rewards);
  std::vector<double> out;
  out.reserve(rewards.size());
  for (double r : rewards)
    out.push_back((r - st.mean) / (st.std_dev + cfg.epsilon));
  return out;
}

// Baseline for PRESERVED mode: the group mean clamped against the minimum
// reward among correct samples. With no correct sample it degenerates to
// the plain mean.
inline double truncated_mean(std::span<const double> rewards,
                             std::span<const std::size_t> correct_idx,
                             TruncationVariant variant = TruncationVariant::MIN) {
  const double mean = group_stats(rewards).mean;
  if (correct_idx.empty()) return mean;
  double min_correct = rewards[correct_idx.front()];
  for (std::size_t i : correct_idx)
    min_correct = std::min(min_correct, rewards[i]);
  return variant == TruncationVariant::MIN ? std::min(mean, min_correct)
                                           : std::max(mean, min_correct);
}

inline std::vector<double> advantage_preserved(
    std::span<const double> rewards, std::span<const std::size_t> correct_idx,
    const RewardConfig& cfg,
    TruncationVariant variant = TruncationVariant::MIN) {
  const GroupStats st = group_stats(rewards);
  const double baseline = truncated_mean(rewards, correct_idx, variant);
  std::vector<double> out;
  out.reserve(rewards.size());
  for (double r : rewards)
    out.push_back((r - baseline) / (st.std_dev + cfg.epsilon));
  return out;
}

inline std::vector<std::size_t> correct_indices(const RolloutGroup& group) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < group.samples.size(); ++i)
    if (group.samples[i].correct) idx.push_back(i);
  return idx;
}

// Full pipeline for one group: validate, classify, score, normalize.
inline AdvantageResult score_group(const RolloutGroup& group,
                                   const RewardConfig& cfg,
                                   AdvantageMode mode) {
  validate_group(group);
  const ClassificationResult cls = classify(group, cfg);
  const std::vector<RewardBreakdown> breakdowns = reward_eff(group, cls, cfg);

  AdvantageResult out;
  out.rewards.reserve(breakdowns.size());
  for (const RewardBreakdown& b : breakdowns) out.rewards.push_back(b.r_eff);

  const GroupStats st = group_stats(out.rewards);
  out.mean = st.mean;
  out.std_dev = st.std_dev;
  out.boundary = cls.boundary;
  out.len_threshold = cls.len_threshold;

  if (mode == AdvantageMode::VANILLA) {
    out.truncated_mean = st.mean;
    out.advantages = advantage_vanilla(out.rewards, cfg);
  } else {
    const std::vector<std::size_t> idx = correct_indices(group);
    out.truncated_mean = truncated_mean(out.rewards, idx);
    out.advantages = advantage_preserved(out.rewards, idx, cfg);
  }
  return out;
}

}  // namespace drsaf
