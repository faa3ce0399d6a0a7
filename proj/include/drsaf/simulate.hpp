#pragma once

// Desk-scale training dynamics. Two tools:
//
//  * run_simulation: a 4-arm categorical policy per synthetic problem
//    (short-correct, long-correct, short-incorrect, long-incorrect),
//    updated multiplicatively from group advantages. Hard problems carry
//    structural zero mass on short-correct — a compressed correct answer
//    past the boundary is infeasible, and multiplicative updates keep the
//    zero. This is the testbed for penalty-driven collapse versus
//    preservation.
//
//  * compare_static_dynamic: a direct Monte-Carlo check of the closed-form
//    accuracy predictions. Capability is pinned per problem type (the
//    policy simulator would learn its way out of the premise), lengths
//    follow each regime's compression rule, and the static regime's
//    penalty strength is bisected until its mean length matches the
//    dynamic regime's.
//
// All randomness flows through Rng, so a seed fixes every byte of output.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "drsaf/advantage.hpp"
#include "drsaf/rng.hpp"
#include "drsaf/types.hpp"

namespace drsaf {

// Which reward the simulated trainer optimizes: the static length-penalized
// baseline or the boundary-aware effective reward.
enum class RewardScheme { STATIC, DYNAMIC };

struct SimConfig {
  double p = 0.5;          // fraction of fully-solvable (easy) problems
  double a_high = 0.9;     // base accuracy on easy problems
  double a_low = 0.6;      // base accuracy on hard problems
  double l0 = 1000.0;      // natural (uncompressed) response length
  double l_min = 200.0;    // shortest length easy problems tolerate
  double l_max = 800.0;    // length floor below which hard problems degrade
  double gamma_deg = 5e-4; // accuracy lost per token of over-compression
  // Initial length mixture: the share of each correctness pool that starts
  // on the short arm. Hard problems ignore short_correct_share (their
  // short-correct arm is structurally absent). Raising
  // short_incorrect_share models the give-up failure mode — wrong answers
  // that quit early — which is the regime where a blanket length penalty
  // rewards failure and collapses the boundary.
  double short_correct_share = 0.10;
  double short_incorrect_share = 0.10;
  double lambda = 0.05;    // multiplicative update step size
  int steps = 500;         // update steps T
  int k = 12;              // rollouts per problem per step
  std::uint64_t seed = 7;
  int num_problems = 64;
  RewardConfig reward{};   // constants for the scorers
};

inline void validate_sim_config(const SimConfig& cfg) {
  validate_config(cfg.reward);
  if (!(cfg.p > 0.0 && cfg.p < 1.0))
    throw Error(ErrorCode::InvalidConfig, "p must lie strictly inside (0, 1)");
  if (!(0.0 <= cfg.a_low && cfg.a_low < cfg.a_high && cfg.a_high <= 1.0))
    throw Error(ErrorCode::InvalidConfig, "need 0 <= a_low < a_high <= 1");
  if (!(0.0 < cfg.l_min && cfg.l_min < cfg.l_max && cfg.l_max <= cfg.l0))
    throw Error(ErrorCode::InvalidConfig, "need 0 < l_min < l_max <= l0");
  if (cfg.gamma_deg < 0.0)
    throw Error(ErrorCode::InvalidConfig, "gamma_deg must be >= 0");
  if (!(0.0 <= cfg.short_correct_share && cfg.short_correct_share <= 1.0) ||
      !(0.0 <= cfg.short_incorrect_share && cfg.short_incorrect_share <= 1.0))
    throw Error(ErrorCode::InvalidConfig,
                "short-arm shares must lie in [0, 1]");
  if (cfg.lambda < 0.0)
    throw Error(ErrorCode::InvalidConfig, "lambda must be >= 0");
  if (cfg.steps < 0)
    throw Error(ErrorCode::InvalidConfig, "steps must be >= 0");
  if (cfg.k < 2)
    throw Error(ErrorCode::TooFewSamples, "k must be >= 2");
  if (cfg.num_problems < 1)
    throw Error(ErrorCode::InvalidConfig, "num_problems must be >= 1");
}

// ---------------------------------------------------------------------------
// Closed forms.

// A0 = p * a_high + (1 - p) * a_low: expected accuracy with capability
// intact on both problem types.
inline double initial_accuracy(const SimConfig& cfg) {
  return cfg.p * cfg.a_high + (1.0 - cfg.p) * cfg.a_low;
}

// Uniform compression by delta_prime tokens leaves easy problems alone but
// costs hard problems gamma_deg per token below their l_max floor:
//   E[acc] = A0 - (1 - p) * gamma_deg * max(0, l_max - (l0 - delta_prime)).
inline double static_expected_accuracy(const SimConfig& cfg,
                                       double delta_prime) {
  const double depth = std::max(0.0, cfg.l_max - (cfg.l0 - delta_prime));
  return initial_accuracy(cfg) - (1.0 - cfg.p) * cfg.gamma_deg * depth;
}

// Boundary-aware compression halts at each problem's own floor, so no
// capability is spent: E[acc] = A0.
inline double dynamic_expected_accuracy(const SimConfig& cfg) {
  return initial_accuracy(cfg);
}

// Probability that a correct sample's reward lands below the group mean
// (negative advantage) when correct rewards are N(mu_correct, sigma^2):
// Phi((mu_r - mu_correct) / sigma).
inline double collapse_probability(double mu_r, double mu_correct,
                                   double sigma) {
  if (!(sigma > 0.0))
    throw Error(ErrorCode::NonPositiveSigma,
                "collapse probability needs sigma > 0");
  const double z = (mu_r - mu_correct) / sigma;
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

// ---------------------------------------------------------------------------
// Policy simulator.

struct SimStep {
  int step = 0;
  double mean_len = 0.0;  // expected response length under the policies
  double mean_acc = 0.0;  // expected accuracy under the policies
  // Lyapunov diagnostic: sum over problems of log(total correct-arm mass).
  // At one correct response per problem this is the plain sum of correct
  // log-probabilities; aggregating arms first is what stays monotone when
  // mass shifts between two correct arms of the same problem.
  double v_t = 0.0;
  // Smallest advantage any sampled correct rollout received this step;
  // NaN on the initial row and on steps where no correct rollout was drawn.
  double min_correct_adv = std::numeric_limits<double>::quiet_NaN();
  double easy_mean_len = 0.0;  // expected length over easy problems only
  std::vector<double> correct_mass;            // per problem
  std::vector<std::array<double, 4>> arm_probs;  // per problem
};

struct SimTrace {
  std::vector<SimStep> steps;  // steps + 1 rows; row 0 is the initial state
};

namespace detail {

// Arm order: short-correct, long-correct, short-incorrect, long-incorrect.
inline constexpr int kShortCorrect = 0;
inline constexpr int kLongCorrect = 1;
inline constexpr int kShortIncorrect = 2;
inline constexpr int kLongIncorrect = 3;

struct SimWorld {
  std::vector<std::array<double, 4>> pi;  // policy per problem
  std::array<std::int64_t, 4> arm_len{};
  int n_easy = 0;
};

inline SimWorld make_world(const SimConfig& cfg) {
  SimWorld w;
  w.n_easy = static_cast<int>(std::llround(cfg.p * cfg.num_problems));
  const auto s = static_cast<std::int64_t>(std::llround(cfg.l_min));
  const auto l = static_cast<std::int64_t>(std::llround(cfg.l0));
  w.arm_len = {s, l, s, l};
  w.pi.resize(static_cast<std::size_t>(cfg.num_problems));
  // The default 0.10 correct-pool share keeps the short-correct arm sampled
  // most steps at k = 12; the compression gradient stalls when the arm is
  // starved of draws.
  const double sc = cfg.short_correct_share;
  const double si = cfg.short_incorrect_share;
  for (int i = 0; i < cfg.num_problems; ++i) {
    if (i < w.n_easy) {
      w.pi[static_cast<std::size_t>(i)] = {
          cfg.a_high * sc, cfg.a_high * (1.0 - sc),
          (1.0 - cfg.a_high) * si, (1.0 - cfg.a_high) * (1.0 - si)};
    } else {
      // No short-correct arm: compressing below l_max breaks correctness
      // on hard problems, so that outcome simply does not exist.
      w.pi[static_cast<std::size_t>(i)] = {0.0, cfg.a_low,
                                           (1.0 - cfg.a_low) * si,
                                           (1.0 - cfg.a_low) * (1.0 - si)};
    }
  }
  return w;
}

inline SimStep record_step(const SimWorld& w, const SimConfig& cfg, int step,
                           double min_correct_adv) {
  SimStep row;
  row.step = step;
  row.min_correct_adv = min_correct_adv;
  row.correct_mass.reserve(w.pi.size());
  row.arm_probs = w.pi;
  double len_sum = 0.0, acc_sum = 0.0, easy_len_sum = 0.0, v = 0.0;
  for (std::size_t i = 0; i < w.pi.size(); ++i) {
    const auto& pi = w.pi[i];
    double len = 0.0;
    for (int a = 0; a < 4; ++a)
      len += pi[static_cast<std::size_t>(a)] *
             static_cast<double>(w.arm_len[static_cast<std::size_t>(a)]);
    const double correct = pi[kShortCorrect] + pi[kLongCorrect];
    len_sum += len;
    acc_sum += correct;
    if (static_cast<int>(i) < w.n_easy) easy_len_sum += len;
    v += std::log(correct);
  }
  const double n = static_cast<double>(w.pi.size());
  row.mean_len = len_sum / n;
  row.mean_acc = acc_sum / n;
  row.easy_mean_len =
      w.n_easy > 0 ? easy_len_sum / w.n_easy
                   : std::numeric_limits<double>::quiet_NaN();
  row.v_t = v;
  for (const auto& pi : w.pi)
    row.correct_mass.push_back(pi[kShortCorrect] + pi[kLongCorrect]);
  return row;
}

}  // namespace detail

// Runs T multiplicative-update steps and records the state after each.
// Per step and problem: draw k arms, score the resulting group with the
// chosen scheme, normalize to advantages with the chosen mode, then scale
// each sampled arm's mass by exp(lambda * mean advantage of its draws) and
// renormalize. DYNAMIC rollouts are tagged with their group's empirical
// class (self-awareness modeled as converged), which makes the awareness
// term a uniform shift with no effect on advantages; STATIC rollouts carry
// no tags and are scored with the linear length penalty.
inline SimTrace run_simulation(const SimConfig& cfg, AdvantageMode mode,
                               RewardScheme scheme) {
  validate_sim_config(cfg);
  Rng rng(cfg.seed);
  detail::SimWorld w = detail::make_world(cfg);

  SimTrace trace;
  trace.steps.reserve(static_cast<std::size_t>(cfg.steps) + 1);
  trace.steps.push_back(detail::record_step(
      w, cfg, 0, std::numeric_limits<double>::quiet_NaN()));

  const std::size_t k = static_cast<std::size_t>(cfg.k);
  for (int t = 1; t <= cfg.steps; ++t) {
    double min_correct_adv = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < w.pi.size(); ++i) {
      auto& pi = w.pi[i];

      // Sample the group. Each draw's length gets ±1% integer jitter: with
      // only two base lengths the median of correct lengths would otherwise
      // sit exactly on every long draw, and the compression bonus — which
      // pays for landing at or under the median — would never split the
      // long-correct population.
      std::vector<std::size_t> draws(k);
      RolloutGroup group;
      group.samples.resize(k);
      for (std::size_t j = 0; j < k; ++j) {
        const std::size_t a = rng.categorical(pi);
        draws[j] = a;
        const std::int64_t base = w.arm_len[a];
        const std::int64_t jit = std::max<std::int64_t>(1, base / 100);
        const auto span = static_cast<double>(2 * jit + 1);
        const std::int64_t offset =
            static_cast<std::int64_t>(rng.uniform() * span) - jit;
        group.samples[j].length = base + offset;
        group.samples[j].correct =
            a == detail::kShortCorrect || a == detail::kLongCorrect;
      }

      std::vector<double> rewards(k);
      if (scheme == RewardScheme::DYNAMIC) {
        const double acc = group_accuracy(group);
        const AwareTag tag = acc >= cfg.reward.cfrb_threshold ? AwareTag::CFRB
                                                              : AwareTag::PFRB;
        for (auto& s : group.samples) s.aware_tag = tag;
        const ClassificationResult cls = classify(group, cfg.reward);
        const std::vector<RewardBreakdown> b = reward_eff(group, cls, cfg.reward);
        for (std::size_t j = 0; j < k; ++j) rewards[j] = b[j].r_eff;
      } else {
        for (std::size_t j = 0; j < k; ++j)
          rewards[j] = reward_static(group.samples[j], cfg.reward);
      }

      std::vector<double> adv;
      if (mode == AdvantageMode::VANILLA) {
        adv = advantage_vanilla(rewards, cfg.reward);
      } else {
        adv = advantage_preserved(rewards, correct_indices(group), cfg.reward);
      }
      for (std::size_t j = 0; j < k; ++j) {
        if (!group.samples[j].correct) continue;
        if (std::isnan(min_correct_adv) || adv[j] < min_correct_adv)
          min_correct_adv = adv[j];
      }

      // Per-arm mean advantage over this group's draws -> update factor.
      std::array<double, 4> adv_sum{}, hits{};
      for (std::size_t j = 0; j < k; ++j) {
        adv_sum[draws[j]] += adv[j];
        hits[draws[j]] += 1.0;
      }
      double total = 0.0;
      for (std::size_t a = 0; a < 4; ++a) {
        if (hits[a] > 0.0)
          pi[a] *= std::exp(cfg.lambda * adv_sum[a] / hits[a]);
        total += pi[a];
      }
      for (std::size_t a = 0; a < 4; ++a) pi[a] /= total;
      double check = 0.0;
      for (double v : pi) check += v;
      if (!(std::abs(check - 1.0) <= 1e-9))
        throw Error(ErrorCode::InvalidConfig,
                    "internal: policy normalization drifted at step " +
                        std::to_string(t));
    }
    trace.steps.push_back(detail::record_step(w, cfg, t, min_correct_adv));
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Closed-form versus Monte-Carlo comparison.

struct ComparisonReport {
  double dynamic_accuracy = 0.0;   // measured, dynamic regime
  double static_accuracy = 0.0;    // measured, static regime
  double dynamic_mean_len = 0.0;
  double static_mean_len = 0.0;
  double analytic_dynamic = 0.0;   // A0
  double analytic_static = 0.0;    // closed form at the realized delta_prime
  double measured_gap = 0.0;       // dynamic - static, measured
  double analytic_gap = 0.0;       // dynamic - static, predicted
  double delta_prime = 0.0;        // realized compression on hard problems
  double beta = 0.0;               // matched static penalty strength
  int bisect_iters = 0;
};

// Pins capability to the degradation law (easy problems degrade below
// l_min, hard below l_max), realizes both regimes' lengths, bisects the
// static penalty until mean lengths match within 2%, and Monte-Carlo
// samples k correctness draws per problem in each regime.
inline ComparisonReport compare_static_dynamic(const SimConfig& cfg) {
  validate_sim_config(cfg);
  const std::size_t n = static_cast<std::size_t>(cfg.num_problems);
  const std::size_t n_easy =
      static_cast<std::size_t>(std::llround(cfg.p * cfg.num_problems));
  Rng rng(cfg.seed);

  // Length noise: symmetric ±2% for natural variation, shared across
  // regimes so the comparison is paired. Dynamic-regime easy problems
  // jitter upward only — boundary-aware compression stops at the floor.
  std::vector<double> sym(n), up(n);
  for (std::size_t i = 0; i < n; ++i) sym[i] = 1.0 + 0.02 * (2.0 * rng.uniform() - 1.0);
  for (std::size_t i = 0; i < n; ++i) up[i] = 1.0 + 0.02 * rng.uniform();

  const auto accuracy_at = [&](std::size_t i, double len) {
    const bool easy = i < n_easy;
    const double base = easy ? cfg.a_high : cfg.a_low;
    const double floor = easy ? cfg.l_min : cfg.l_max;
    const double acc = base - cfg.gamma_deg * std::max(0.0, floor - len);
    return std::clamp(acc, 0.0, 1.0);
  };
  const auto sample_accuracy = [&](const std::vector<double>& len) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double acc = accuracy_at(i, len[i]);
      for (int j = 0; j < cfg.k; ++j) correct += rng.bernoulli(acc) ? 1 : 0;
    }
    return static_cast<double>(correct) /
           (static_cast<double>(n) * static_cast<double>(cfg.k));
  };
  const auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };

  // Dynamic regime: easy problems compressed to their own floor, hard
  // problems left at natural length.
  std::vector<double> dyn_len(n);
  for (std::size_t i = 0; i < n; ++i)
    dyn_len[i] = i < n_easy ? cfg.l_min * up[i] : cfg.l0 * sym[i];

  // Static regime: one penalty strength beta compresses every problem the
  // same way, len(beta) = l0 * exp(-beta) * jitter. Bisect beta until the
  // mean length matches the dynamic regime's.
  const double target = mean(dyn_len);
  const auto static_len_at = [&](double beta, std::vector<double>& out) {
    for (std::size_t i = 0; i < n; ++i)
      out[i] = cfg.l0 * std::exp(-beta) * sym[i];
    return mean(out);
  };
  std::vector<double> stat_len(n);
  double lo = 0.0, hi = 20.0, beta = 0.0;
  int iters = 0;
  bool matched = false;
  for (; iters < 50; ++iters) {
    beta = 0.5 * (lo + hi);
    const double m = static_len_at(beta, stat_len);
    if (std::abs(m - target) / target <= 0.005) {
      matched = true;
      break;
    }
    if (m > target) lo = beta; else hi = beta;
  }
  if (!matched) {
    const double m = static_len_at(beta, stat_len);
    if (std::abs(m - target) / target > 0.02)
      throw Error(ErrorCode::MatchFailure,
                  "static/dynamic mean lengths failed to match within 2% "
                  "after 50 bisection steps");
  }

  ComparisonReport rep;
  rep.beta = beta;
  rep.bisect_iters = iters;
  rep.dynamic_mean_len = mean(dyn_len);
  rep.static_mean_len = static_len_at(beta, stat_len);
  rep.dynamic_accuracy = sample_accuracy(dyn_len);
  rep.static_accuracy = sample_accuracy(stat_len);

  double hard_len = 0.0;
  for (std::size_t i = n_easy; i < n; ++i) hard_len += stat_len[i];
  rep.delta_prime =
      n_easy < n ? cfg.l0 - hard_len / static_cast<double>(n - n_easy) : 0.0;

  rep.analytic_dynamic = dynamic_expected_accuracy(cfg);
  rep.analytic_static = static_expected_accuracy(cfg, rep.delta_prime);
  rep.measured_gap = rep.dynamic_accuracy - rep.static_accuracy;
  rep.analytic_gap = rep.analytic_dynamic - rep.analytic_static;
  return rep;
}

}  // namespace drsaf
