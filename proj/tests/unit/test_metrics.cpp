#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "drsaf/metrics.hpp"

using drsaf::Error;
using drsaf::ErrorCode;

namespace {

double round2(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

TEST_CASE("token_efficiency reproduces published table values") {
  CHECK(round2(drsaf::token_efficiency(92.4, 1833)) == 5.04);
  CHECK(round2(drsaf::token_efficiency(88.1, 162)) == 54.38);
  CHECK(round2(drsaf::token_efficiency(94.2, 2135)) == 4.41);
  CHECK(round2(drsaf::token_efficiency(92.3, 521)) == 17.72);
  CHECK(round2(drsaf::token_efficiency(86.6, 88)) == 98.41);
}

TEST_CASE("token_efficiency handles the zero and error cases") {
  CHECK(drsaf::token_efficiency(0.0, 500) == 0.0);
  try {
    drsaf::token_efficiency(50.0, 0.0);
    FAIL("expected ZeroLength");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroLength);
  }
  CHECK_THROWS_AS(drsaf::token_efficiency(50.0, -3.0), Error);
}

TEST_CASE("make_metrics fills the derived field") {
  const drsaf::MetricsRecord rec = drsaf::make_metrics("m", 92.4, 1833);
  CHECK(rec.name == "m");
  CHECK(rec.acc == 92.4);
  CHECK(rec.len == 1833);
  CHECK(round2(rec.eff) == 5.04);
}
