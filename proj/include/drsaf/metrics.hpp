#pragma once

// Token-efficiency bookkeeping: EFF = ACC / LEN with ACC in percent, i.e.
// accuracy points bought per 100 tokens (92.4% over 1833 tokens -> 5.04).

#include <string>

#include "drsaf/types.hpp"

namespace drsaf {

struct MetricsRecord {
  std::string name;
  double acc = 0.0;  // percent, 0..100
  double len = 0.0;  // mean response length in tokens
  double eff = 0.0;  // 100 * acc / len
};

inline double token_efficiency(double acc_percent, double mean_len) {
  if (!(mean_len > 0.0))
    throw Error(ErrorCode::ZeroLength,
                "token efficiency needs a positive mean length");
  return 100.0 * acc_percent / mean_len;
}

inline MetricsRecord make_metrics(std::string name, double acc_percent,
                                  double mean_len) {
  MetricsRecord rec;
  rec.name = std::move(name);
  rec.acc = acc_percent;
  rec.len = mean_len;
  rec.eff = token_efficiency(acc_percent, mean_len);
  return rec;
}

}  // namespace drsaf
