#include <catch2/catch_amalgamated.hpp>

#include "drsaf/boundary.hpp"
#include "helpers.hpp"

using drsaf::AwareTag;
using drsaf::BoundaryClass;
using drsaf::RewardConfig;
using drsaf::RolloutGroup;

namespace {

// k samples, the first n_correct marked correct, lengths taken in order.
RolloutGroup make_group(const std::vector<std::int64_t>& lengths,
                        std::size_t n_correct) {
  RolloutGroup g;
  g.problem_id = "p";
  for (std::size_t i = 0; i < lengths.size(); ++i)
    g.samples.push_back({lengths[i], i < n_correct, AwareTag::ABSENT});
  return g;
}

std::vector<std::int64_t> lens(std::size_t k) {
  std::vector<std::int64_t> v(k);
  for (std::size_t i = 0; i < k; ++i) v[i] = static_cast<std::int64_t>(100 * (i + 1));
  return v;
}

}  // namespace

TEST_CASE("group_accuracy counts correct fractions") {
  CHECK(drsaf::group_accuracy(make_group(lens(12), 11)) ==
        Catch::Approx(11.0 / 12.0).epsilon(1e-12));
  CHECK(drsaf::group_accuracy(make_group(lens(12), 0)) == 0.0);
  CHECK(drsaf::group_accuracy(make_group(lens(12), 6)) == 0.5);
}

TEST_CASE("classify maps accuracy to the boundary classes") {
  const RewardConfig cfg;
  CHECK(drsaf::classify(make_group(lens(12), 11), cfg).boundary ==
        BoundaryClass::CFRB);  // 0.917 >= 0.9
  CHECK(drsaf::classify(make_group(lens(12), 1), cfg).boundary ==
        BoundaryClass::CIRB);  // 0.083 < 0.1
  CHECK(drsaf::classify(make_group(lens(12), 6), cfg).boundary ==
        BoundaryClass::PFRB);
}

TEST_CASE("classification thresholds are >= above and < below") {
  const RewardConfig cfg;  // 0.9 / 0.1
  // 9/10 = 0.9 exactly: at the CFRB threshold counts as CFRB.
  CHECK(drsaf::classify(make_group(lens(10), 9), cfg).boundary ==
        BoundaryClass::CFRB);
  // 1/10 = 0.1 exactly: not strictly below, so PFRB.
  CHECK(drsaf::classify(make_group(lens(10), 1), cfg).boundary ==
        BoundaryClass::PFRB);
}

TEST_CASE("length_threshold takes the median of correct lengths") {
  const auto [odd, odd_fb] = drsaf::length_threshold(make_group({100, 200, 300}, 3));
  CHECK(odd == 200.0);
  CHECK_FALSE(odd_fb);

  const auto [even, even_fb] =
      drsaf::length_threshold(make_group({100, 200, 300, 400}, 4));
  CHECK(even == 250.0);
  CHECK_FALSE(even_fb);
}

TEST_CASE("length_threshold falls back to the all-sample mean") {
  const auto [thr, fb] = drsaf::length_threshold(make_group({100, 300}, 0));
  CHECK(thr == 200.0);
  CHECK(fb);
}

TEST_CASE("median matches an nth_element oracle on random groups") {
  drsaf::Rng rng(101);
  for (int iter = 0; iter < 2000; ++iter) {
    const RolloutGroup g = testutil::random_group(rng);
    std::vector<std::int64_t> correct_lens;
    for (const auto& s : g.samples)
      if (s.correct) correct_lens.push_back(s.length);
    const auto [thr, fb] = drsaf::length_threshold(g);
    if (correct_lens.empty()) {
      CHECK(fb);
      double sum = 0;
      for (const auto& s : g.samples) sum += static_cast<double>(s.length);
      CHECK(thr == Catch::Approx(sum / static_cast<double>(g.samples.size()))
                       .epsilon(1e-12));
    } else {
      CHECK_FALSE(fb);
      CHECK(thr == testutil::oracle_median(correct_lens));
    }
  }
}

TEST_CASE("classification result invariants hold on random groups") {
  drsaf::Rng rng(202);
  for (int iter = 0; iter < 2000; ++iter) {
    const RolloutGroup g = testutil::random_group(rng);
    const RewardConfig cfg = testutil::random_config(rng);
    const drsaf::ClassificationResult cls = drsaf::classify(g, cfg);
    switch (cls.boundary) {
      case BoundaryClass::CFRB:
        CHECK(cls.accuracy >= cfg.cfrb_threshold);
        break;
      case BoundaryClass::CIRB:
        CHECK(cls.accuracy < cfg.cirb_threshold);
        break;
      case BoundaryClass::PFRB:
        CHECK(cls.accuracy < cfg.cfrb_threshold);
        CHECK(cls.accuracy >= cfg.cirb_threshold);
        break;
    }
    bool any_correct = false;
    for (const auto& s : g.samples) any_correct = any_correct || s.correct;
    CHECK(cls.used_fallback == !any_correct);
  }
}
