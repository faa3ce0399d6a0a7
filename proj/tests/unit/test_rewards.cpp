#include <algorithm>
#include <catch2/catch_amalgamated.hpp>

#include "drsaf/rewards.hpp"
#include "helpers.hpp"

using drsaf::AwareTag;
using drsaf::BoundaryClass;
using drsaf::ClassificationResult;
using drsaf::RewardConfig;
using drsaf::RolloutGroup;
using drsaf::RolloutSample;

namespace {

ClassificationResult cls_of(double accuracy, BoundaryClass b, double threshold) {
  ClassificationResult cls;
  cls.accuracy = accuracy;
  cls.boundary = b;
  cls.len_threshold = threshold;
  return cls;
}

}  // namespace

TEST_CASE("reward_acc pays acc_reward for correctness") {
  RewardConfig cfg;
  CHECK(drsaf::reward_acc({100, true, AwareTag::ABSENT}, cfg) == 1.0);
  CHECK(drsaf::reward_acc({100, false, AwareTag::ABSENT}, cfg) == 0.0);
  cfg.acc_reward = 2.0;
  CHECK(drsaf::reward_acc({100, true, AwareTag::ABSENT}, cfg) == 2.0);
}

TEST_CASE("reward_aware pays for tags matching the threshold side") {
  const RewardConfig cfg;
  const auto high = cls_of(0.95, BoundaryClass::CFRB, 100);
  const auto mid = cls_of(0.5, BoundaryClass::PFRB, 100);
  CHECK(drsaf::reward_aware({10, true, AwareTag::CFRB}, high, cfg) == 0.25);
  CHECK(drsaf::reward_aware({10, true, AwareTag::PFRB}, mid, cfg) == 0.25);
  CHECK(drsaf::reward_aware({10, true, AwareTag::CFRB}, mid, cfg) == -0.25);
  // A missing tag is scored as a misprediction.
  CHECK(drsaf::reward_aware({10, true, AwareTag::ABSENT}, high, cfg) == -0.25);
  CHECK(drsaf::reward_aware({10, true, AwareTag::ABSENT}, mid, cfg) == -0.25);
}

TEST_CASE("reward_len pays compression in CFRB and extension in CIRB") {
  const RewardConfig cfg;
  const auto cfrb = cls_of(1.0, BoundaryClass::CFRB, 200);
  const auto cirb = cls_of(0.0, BoundaryClass::CIRB, 200);
  const auto pfrb = cls_of(0.5, BoundaryClass::PFRB, 200);
  CHECK(drsaf::reward_len({150, true, AwareTag::ABSENT}, cfrb, cfg) == 0.2);
  CHECK(drsaf::reward_len({200, true, AwareTag::ABSENT}, cfrb, cfg) == 0.2);
  CHECK(drsaf::reward_len({201, true, AwareTag::ABSENT}, cfrb, cfg) == 0.0);
  CHECK(drsaf::reward_len({250, false, AwareTag::ABSENT}, cirb, cfg) == 0.2);
  CHECK(drsaf::reward_len({200, false, AwareTag::ABSENT}, cirb, cfg) == 0.0);
  CHECK(drsaf::reward_len({50, true, AwareTag::ABSENT}, pfrb, cfg) == 0.0);
  CHECK(drsaf::reward_len({5000, true, AwareTag::ABSENT}, pfrb, cfg) == 0.0);
}

TEST_CASE("reward_len within CFRB never decreases when a sample shortens") {
  const RewardConfig cfg;
  const auto cfrb = cls_of(1.0, BoundaryClass::CFRB, 300);
  double prev = drsaf::reward_len({600, true, AwareTag::ABSENT}, cfrb, cfg);
  for (std::int64_t len = 599; len >= 0; --len) {
    const double cur = drsaf::reward_len({len, true, AwareTag::ABSENT}, cfrb, cfg);
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("reward_eff composes the three terms") {
  const RewardConfig cfg;

  SECTION("fully solved group, calibrated tags, at-median sample") {
    RolloutGroup g;
    for (int i = 0; i < 12; ++i)
      g.samples.push_back({300, true, AwareTag::CFRB});
    const auto b = drsaf::reward_eff(g, cfg);
    // 1.0 + 0.25 + 0.2: at the median counts as compressed.
    for (const auto& r : b) CHECK(r.r_eff == Catch::Approx(1.45).epsilon(1e-12));
  }

  SECTION("unsolvable group, PFRB tags, long sample earns extension") {
    RolloutGroup g;
    g.samples.push_back({100, false, AwareTag::PFRB});
    g.samples.push_back({100, false, AwareTag::PFRB});
    g.samples.push_back({400, false, AwareTag::PFRB});  // above the 200 mean
    const auto b = drsaf::reward_eff(g, cfg);
    CHECK(b[2].r_eff == Catch::Approx(0.0 + 0.25 + 0.2).epsilon(1e-12));
    CHECK(b[0].r_eff == Catch::Approx(0.25).epsilon(1e-12));
  }

  SECTION("incorrect sample with a CFRB tag in a PFRB group") {
    RolloutGroup g;
    for (int i = 0; i < 6; ++i) g.samples.push_back({200, i < 3, AwareTag::PFRB});
    g.samples.push_back({220, false, AwareTag::CFRB});
    const auto b = drsaf::reward_eff(g, cfg);
    CHECK(b[6].r_eff == Catch::Approx(-0.25).epsilon(1e-12));
  }
}

TEST_CASE("reward_static is correctness plus a linear length term") {
  RewardConfig cfg;
  cfg.gamma = -0.0001;
  CHECK(drsaf::reward_static({1000, true, AwareTag::ABSENT}, cfg) ==
        Catch::Approx(0.9).epsilon(1e-12));
  CHECK(drsaf::reward_static({0, false, AwareTag::ABSENT}, cfg) == 0.0);
  cfg.gamma = 0.0;
  CHECK(drsaf::reward_static({12345, true, AwareTag::ABSENT}, cfg) == 1.0);
}

TEST_CASE("correct samples' effective reward stays within the stated band") {
  drsaf::Rng rng(303);
  for (int iter = 0; iter < 2000; ++iter) {
    const RolloutGroup g = testutil::random_group(rng);
    const RewardConfig cfg = testutil::random_config(rng);
    const auto breakdowns = drsaf::reward_eff(g, cfg);
    const double hi =
        cfg.acc_reward + cfg.alpha1 + std::max(cfg.delta_comp, cfg.delta_ext);
    const double lo = cfg.acc_reward - cfg.alpha2;
    for (std::size_t i = 0; i < g.samples.size(); ++i) {
      if (!g.samples[i].correct) continue;
      CHECK(breakdowns[i].r_eff >= lo - 1e-12);
      CHECK(breakdowns[i].r_eff <= hi + 1e-12);
    }
  }
}

TEST_CASE("zeroed shaping constants reduce reward_eff to pure correctness") {
  RewardConfig cfg;
  cfg.alpha1 = cfg.alpha2 = cfg.delta_comp = cfg.delta_ext = 0.0;
  drsaf::Rng rng(404);
  for (int iter = 0; iter < 500; ++iter) {
    const RolloutGroup g = testutil::random_group(rng);
    const auto breakdowns = drsaf::reward_eff(g, cfg);
    for (std::size_t i = 0; i < g.samples.size(); ++i)
      CHECK(breakdowns[i].r_eff ==
            (g.samples[i].correct ? cfg.acc_reward : 0.0));
  }
}
