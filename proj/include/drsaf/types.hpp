#pragma once

// Core value types for group-relative scoring: rollout samples and groups,
// boundary labels, the reward constants, and the scored-group result record.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace drsaf {

// Self-assessed boundary tag carried by a rollout. ABSENT means the rollout
// emitted no usable tag; it is scored as a misprediction, not skipped.
enum class AwareTag { CFRB, PFRB, ABSENT };

// Empirical reasoning-boundary class of a sampled group:
// CFRB = fully solvable, PFRB = partially solvable, CIRB = out of reach.
enum class BoundaryClass { CFRB, PFRB, CIRB };

enum class ErrorCode {
  EmptyGroup,
  NegativeLength,
  MalformedAwareTag,
  TooFewSamples,
  NonPositiveSigma,
  ZeroLength,
  MatchFailure,
  InvalidConfig,
  ParseError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(AwareTag tag) {
  switch (tag) {
    case AwareTag::CFRB: return "CFRB";
    case AwareTag::PFRB: return "PFRB";
    default: return "ABSENT";
  }
}

inline const char* to_string(BoundaryClass b) {
  switch (b) {
    case BoundaryClass::CFRB: return "CFRB";
    case BoundaryClass::PFRB: return "PFRB";
    default: return "CIRB";
  }
}

// One sampled response. Token length is pre-counted by the caller; reward
// arithmetic downstream is all double precision.
struct RolloutSample {
  std::int64_t length = 0;
  bool correct = false;
  AwareTag aware_tag = AwareTag::ABSENT;
};

// The k responses sampled for one problem. Sample order is preserved
// end-to-end so advantage i always refers to sample i.
struct RolloutGroup {
  std::string problem_id;
  std::vector<RolloutSample> samples;
};

// Every constant the reward stack depends on. Defaults keep both length
// bonuses strictly below the correctness reward so a correct sample can
// never be out-earned by formatting alone.
struct RewardConfig {
  double acc_reward = 1.0;     // reward for a correct final answer
  double alpha1 = 0.25;        // bonus for a calibrated boundary tag
  double alpha2 = 0.25;        // penalty for a miscalibrated or missing tag
  double delta_comp = 0.2;     // compression bonus inside CFRB
  double delta_ext = 0.2;      // extension bonus inside CIRB
  double gamma = 0.0;          // static per-token slope (baseline scorer)
  double epsilon = 1e-8;       // variance guard in advantage normalization
  double cfrb_threshold = 0.9; // accuracy at or above -> CFRB
  double cirb_threshold = 0.1; // accuracy strictly below -> CIRB
};

inline void validate_config(const RewardConfig& cfg) {
  if (!(cfg.acc_reward > 0.0))
    throw Error(ErrorCode::InvalidConfig, "acc_reward must be > 0");
  if (cfg.alpha1 < 0.0 || cfg.alpha2 < 0.0)
    throw Error(ErrorCode::InvalidConfig, "alpha1 and alpha2 must be >= 0");
  if (cfg.delta_comp < 0.0 || cfg.delta_ext < 0.0)
    throw Error(ErrorCode::InvalidConfig, "delta_comp and delta_ext must be >= 0");
  if (!(cfg.delta_comp < cfg.acc_reward && cfg.delta_ext < cfg.acc_reward))
    throw Error(ErrorCode::InvalidConfig,
                "length bonuses must stay below acc_reward");
  if (!(0.0 <= cfg.cirb_threshold && cfg.cirb_threshold < cfg.cfrb_threshold &&
        cfg.cfrb_threshold <= 1.0))
    throw Error(ErrorCode::InvalidConfig,
                "need 0 <= cirb_threshold < cfrb_threshold <= 1");
  if (!(cfg.epsilon > 0.0))
    throw Error(ErrorCode::InvalidConfig, "epsilon must be > 0");
}

// Rejects groups the scoring pipeline cannot handle. Returns its argument so
// call sites can validate inline; a second call on the same group is a no-op.
inline const RolloutGroup& validate_group(const RolloutGroup& group) {
  if (group.samples.size() < 2)
    throw Error(ErrorCode::EmptyGroup,
                "group '" + group.problem_id + "' needs at least 2 samples, has " +
                    std::to_string(group.samples.size()));
  for (std::size_t i = 0; i < group.samples.size(); ++i) {
    if (group.samples[i].length < 0)
      throw Error(ErrorCode::NegativeLength,
                  "group '" + group.problem_id + "' sample " +
                      std::to_string(i) + " has negative length");
    switch (group.samples[i].aware_tag) {
      case AwareTag::CFRB:
      case AwareTag::PFRB:
      case AwareTag::ABSENT:
        break;
      default:
        throw Error(ErrorCode::MalformedAwareTag,
                    "group '" + group.problem_id + "' sample " +
                        std::to_string(i) + " has a malformed aware tag");
    }
  }
  return group;
}

// Full scoring output for one group: per-sample effective rewards and
// advantages (input order), plus the group statistics they came from.
struct AdvantageResult {
  std::vector<double> rewards;
  std::vector<double> advantages;
  double mean = 0.0;
  double std_dev = 0.0;
  double truncated_mean = 0.0;  // equals mean when preservation is off
  BoundaryClass boundary = BoundaryClass::PFRB;
  double len_threshold = 0.0;
};

}  // namespace drsaf
