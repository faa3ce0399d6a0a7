#pragma once

// File formats. Rollout logs are JSONL, one group per line:
//   {"problem_id": "p1", "samples": [{"len": 812, "correct": 1, "aware": "CFRB"}, ...]}
// where aware is "CFRB", "PFRB", or null (null and a missing key both mean
// no tag). Configs are flat key=value files whose keys mirror the config
// struct fields. Machine outputs print doubles at shortest round-trip
// precision; human tables round to 2 decimals.
//
// Error split: structurally broken input (bad JSON, wrong types, missing
// keys, unparseable numbers) raises ParseError; inputs that parse but
// violate domain rules (negative length, unknown aware string, unknown
// config key) raise the matching validation error.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "drsaf/advantage.hpp"
#include "drsaf/metrics.hpp"
#include "drsaf/simulate.hpp"
#include "drsaf/types.hpp"

namespace drsaf::io {

// Shortest decimal form that round-trips the exact double.
inline std::string dtos(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return std::string(buf);
}

// ---------------------------------------------------------------------------
// Rollout logs.

inline RolloutGroup parse_group(const std::string& line, std::size_t lineno) {
  const std::string where = "line " + std::to_string(lineno);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, where + ": invalid JSON: " + e.what());
  }
  if (!j.is_object() || !j.contains("problem_id") || !j.contains("samples"))
    throw Error(ErrorCode::ParseError,
                where + ": expected an object with problem_id and samples");
  if (!j["problem_id"].is_string())
    throw Error(ErrorCode::ParseError, where + ": problem_id must be a string");
  if (!j["samples"].is_array())
    throw Error(ErrorCode::ParseError, where + ": samples must be an array");

  RolloutGroup group;
  group.problem_id = j["problem_id"].get<std::string>();
  for (std::size_t i = 0; i < j["samples"].size(); ++i) {
    const nlohmann::json& js = j["samples"][i];
    const std::string at = where + ", sample " + std::to_string(i);
    if (!js.is_object() || !js.contains("len") || !js.contains("correct"))
      throw Error(ErrorCode::ParseError,
                  at + ": expected an object with len and correct");
    RolloutSample s;
    if (!js["len"].is_number_integer())
      throw Error(ErrorCode::ParseError, at + ": len must be an integer");
    s.length = js["len"].get<std::int64_t>();
    if (js["correct"].is_boolean()) {
      s.correct = js["correct"].get<bool>();
    } else if (js["correct"].is_number_integer()) {
      const auto c = js["correct"].get<std::int64_t>();
      if (c != 0 && c != 1)
        throw Error(ErrorCode::ParseError, at + ": correct must be 0 or 1");
      s.correct = c == 1;
    } else {
      throw Error(ErrorCode::ParseError, at + ": correct must be 0 or 1");
    }
    if (js.contains("aware") && !js["aware"].is_null()) {
      if (!js["aware"].is_string())
        throw Error(ErrorCode::ParseError,
                    at + ": aware must be a string or null");
      const std::string tag = js["aware"].get<std::string>();
      if (tag == "CFRB") {
        s.aware_tag = AwareTag::CFRB;
      } else if (tag == "PFRB") {
        s.aware_tag = AwareTag::PFRB;
      } else {
        throw Error(ErrorCode::MalformedAwareTag,
                    at + ": unknown aware tag '" + tag + "'");
      }
    }
    group.samples.push_back(s);
  }
  return group;
}

inline nlohmann::json group_to_json(const RolloutGroup& group) {
  nlohmann::json samples = nlohmann::json::array();
  for (const RolloutSample& s : group.samples) {
    nlohmann::json js;
    js["len"] = s.length;
    js["correct"] = s.correct ? 1 : 0;
    js["aware"] = s.aware_tag == AwareTag::ABSENT
                      ? nlohmann::json(nullptr)
                      : nlohmann::json(to_string(s.aware_tag));
    samples.push_back(js);
  }
  nlohmann::json j;
  j["problem_id"] = group.problem_id;
  j["samples"] = samples;
  return j;
}

inline std::string serialize_group(const RolloutGroup& group) {
  return group_to_json(group).dump();
}

// ---------------------------------------------------------------------------
// Config files: key=value, one per line, '#' starts a comment.

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline std::map<std::string, std::string> parse_config_text(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = line;
    if (const auto hash = sv.find('#'); hash != std::string_view::npos)
      sv = sv.substr(0, hash);
    sv = trim(sv);
    if (sv.empty()) continue;
    const auto eq = sv.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::ParseError, "config line " +
                                             std::to_string(lineno) +
                                             ": expected key=value");
    const std::string key{trim(sv.substr(0, eq))};
    const std::string value{trim(sv.substr(eq + 1))};
    if (key.empty())
      throw Error(ErrorCode::ParseError,
                  "config line " + std::to_string(lineno) + ": empty key");
    out[key] = value;
  }
  return out;
}

namespace detail {

template <class T>
inline T parse_number(const std::string& key, const std::string& value) {
  T v{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw Error(ErrorCode::ParseError,
                "config key '" + key + "': cannot parse value '" + value + "'");
  return v;
}

}  // namespace detail

// Applies key=value pairs onto a SimConfig (reward keys land on the nested
// RewardConfig). Unknown keys are rejected; validation of the resulting
// config is the caller's move.
inline void apply_config(const std::map<std::string, std::string>& kv,
                         SimConfig& cfg) {
  for (const auto& [key, value] : kv) {
    if (key == "acc_reward") cfg.reward.acc_reward = detail::parse_number<double>(key, value);
    else if (key == "alpha1") cfg.reward.alpha1 = detail::parse_number<double>(key, value);
    else if (key == "alpha2") cfg.reward.alpha2 = detail::parse_number<double>(key, value);
    else if (key == "delta_comp") cfg.reward.delta_comp = detail::parse_number<double>(key, value);
    else if (key == "delta_ext") cfg.reward.delta_ext = detail::parse_number<double>(key, value);
    else if (key == "gamma") cfg.reward.gamma = detail::parse_number<double>(key, value);
    else if (key == "epsilon") cfg.reward.epsilon = detail::parse_number<double>(key, value);
    else if (key == "cfrb_threshold") cfg.reward.cfrb_threshold = detail::parse_number<double>(key, value);
    else if (key == "cirb_threshold") cfg.reward.cirb_threshold = detail::parse_number<double>(key, value);
    else if (key == "p") cfg.p = detail::parse_number<double>(key, value);
    else if (key == "a_high") cfg.a_high = detail::parse_number<double>(key, value);
    else if (key == "a_low") cfg.a_low = detail::parse_number<double>(key, value);
    else if (key == "l0") cfg.l0 = detail::parse_number<double>(key, value);
    else if (key == "l_min") cfg.l_min = detail::parse_number<double>(key, value);
    else if (key == "l_max") cfg.l_max = detail::parse_number<double>(key, value);
    else if (key == "gamma_deg") cfg.gamma_deg = detail::parse_number<double>(key, value);
    else if (key == "short_correct_share") cfg.short_correct_share = detail::parse_number<double>(key, value);
    else if (key == "short_incorrect_share") cfg.short_incorrect_share = detail::parse_number<double>(key, value);
    else if (key == "lambda") cfg.lambda = detail::parse_number<double>(key, value);
    else if (key == "steps") cfg.steps = detail::parse_number<int>(key, value);
    else if (key == "k") cfg.k = detail::parse_number<int>(key, value);
    else if (key == "seed") cfg.seed = detail::parse_number<std::uint64_t>(key, value);
    else if (key == "num_problems") cfg.num_problems = detail::parse_number<int>(key, value);
    else throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
  }
}

// ---------------------------------------------------------------------------
// Scoring files.

struct ScoreSummary {
  std::size_t groups = 0;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;  // one per skipped line
  std::size_t n_cfrb = 0;
  std::size_t n_pfrb = 0;
  std::size_t n_cirb = 0;
  double mean_reward = 0.0;  // over all samples of all scored groups
  // Correct samples that received negative advantage. Preservation's whole
  // point is that this stays 0 in PRESERVED mode.
  std::size_t negative_correct_advantages = 0;
};

inline nlohmann::json result_to_json(const RolloutGroup& group,
                                     const AdvantageResult& res) {
  nlohmann::json j;
  j["problem_id"] = group.problem_id;
  j["boundary"] = to_string(res.boundary);
  j["len_threshold"] = res.len_threshold;
  j["mean"] = res.mean;
  j["std_dev"] = res.std_dev;
  j["truncated_mean"] = res.truncated_mean;
  j["rewards"] = res.rewards;
  j["advantages"] = res.advantages;
  return j;
}

// Scores a JSONL stream group by group, writing one JSON record per group
// in input order. Without permissive the first bad line aborts by
// rethrowing; with it the line is skipped and noted in the summary.
inline ScoreSummary score_file(std::istream& in, std::ostream& out,
                               const RewardConfig& cfg, AdvantageMode mode,
                               bool permissive) {
  ScoreSummary summary;
  double reward_sum = 0.0;
  std::size_t reward_count = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      const RolloutGroup group = parse_group(line, lineno);
      const AdvantageResult res = score_group(group, cfg, mode);
      out << result_to_json(group, res).dump() << '\n';
      ++summary.groups;
      switch (res.boundary) {
        case BoundaryClass::CFRB: ++summary.n_cfrb; break;
        case BoundaryClass::PFRB: ++summary.n_pfrb; break;
        case BoundaryClass::CIRB: ++summary.n_cirb; break;
      }
      for (double r : res.rewards) reward_sum += r;
      reward_count += res.rewards.size();
      for (std::size_t i = 0; i < group.samples.size(); ++i)
        if (group.samples[i].correct && res.advantages[i] < 0.0)
          ++summary.negative_correct_advantages;
    } catch (const Error& e) {
      if (!permissive) throw;
      ++summary.skipped;
      summary.warnings.push_back(e.what());
    }
  }
  if (reward_count > 0)
    summary.mean_reward = reward_sum / static_cast<double>(reward_count);
  return summary;
}

inline std::string render_summary(const ScoreSummary& s) {
  std::ostringstream out;
  out << "groups scored: " << s.groups << '\n'
      << "lines skipped: " << s.skipped << '\n'
      << "boundary CFRB: " << s.n_cfrb << '\n'
      << "boundary PFRB: " << s.n_pfrb << '\n'
      << "boundary CIRB: " << s.n_cirb << '\n'
      << "mean reward:   " << format2(s.mean_reward) << '\n'
      << "negative-advantage correct samples: " << s.negative_correct_advantages << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Simulation traces and comparison reports.

inline void write_trace(std::ostream& out, const SimTrace& trace) {
  out << "step\tmean_len\tmean_acc\tv_t\tmin_correct_adv\n";
  for (const SimStep& s : trace.steps) {
    out << s.step << '\t' << dtos(s.mean_len) << '\t' << dtos(s.mean_acc)
        << '\t' << dtos(s.v_t) << '\t' << dtos(s.min_correct_adv) << '\n';
  }
}

inline std::string render_trace_summary(const SimTrace& trace) {
  const SimStep& first = trace.steps.front();
  const SimStep& last = trace.steps.back();
  std::ostringstream out;
  out << "steps:          " << last.step << '\n'
      << "initial acc:    " << format2(first.mean_acc) << '\n'
      << "final acc:      " << format2(last.mean_acc) << '\n'
      << "initial len:    " << format2(first.mean_len) << '\n'
      << "final len:      " << format2(last.mean_len) << '\n'
      << "final v_t:      " << format2(last.v_t) << '\n';
  return out.str();
}

inline void write_comparison(std::ostream& out, const ComparisonReport& r) {
  out << "dynamic_accuracy=" << dtos(r.dynamic_accuracy) << '\n'
      << "static_accuracy=" << dtos(r.static_accuracy) << '\n'
      << "dynamic_mean_len=" << dtos(r.dynamic_mean_len) << '\n'
      << "static_mean_len=" << dtos(r.static_mean_len) << '\n'
      << "analytic_dynamic=" << dtos(r.analytic_dynamic) << '\n'
      << "analytic_static=" << dtos(r.analytic_static) << '\n'
      << "measured_gap=" << dtos(r.measured_gap) << '\n'
      << "analytic_gap=" << dtos(r.analytic_gap) << '\n'
      << "delta_prime=" << dtos(r.delta_prime) << '\n'
      << "beta=" << dtos(r.beta) << '\n'
      << "bisect_iters=" << r.bisect_iters << '\n';
}

inline std::string render_comparison(const ComparisonReport& r) {
  std::ostringstream out;
  out << "                 measured   predicted\n"
      << "dynamic acc:     " << format2(r.dynamic_accuracy) << "       "
      << format2(r.analytic_dynamic) << '\n'
      << "static acc:      " << format2(r.static_accuracy) << "       "
      << format2(r.analytic_static) << '\n'
      << "gap (dyn-stat):  " << format2(r.measured_gap) << "       "
      << format2(r.analytic_gap) << '\n'
      << "mean len (dyn):  " << format2(r.dynamic_mean_len) << '\n'
      << "mean len (stat): " << format2(r.static_mean_len) << '\n'
      << "delta_prime:     " << format2(r.delta_prime) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Metrics tables (report subcommand).

// CSV with a header naming at least acc and len, optionally name, in any
// column order. Rows without a name get row<N>.
inline std::vector<MetricsRecord> parse_metrics_csv(std::istream& in) {
  std::vector<MetricsRecord> out;
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::ParseError, "metrics file is empty");

  const auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) cells.emplace_back(trim(cell));
    return cells;
  };

  const std::vector<std::string> header = split(line);
  int name_col = -1, acc_col = -1, len_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "name") name_col = static_cast<int>(i);
    else if (header[i] == "acc") acc_col = static_cast<int>(i);
    else if (header[i] == "len") len_col = static_cast<int>(i);
  }
  if (acc_col < 0 || len_col < 0)
    throw Error(ErrorCode::ParseError,
                "metrics header must name acc and len columns");

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split(line);
    const auto need = static_cast<std::size_t>(std::max(acc_col, len_col)) + 1;
    if (cells.size() < need)
      throw Error(ErrorCode::ParseError,
                  "metrics line " + std::to_string(lineno) + ": too few cells");
    MetricsRecord rec;
    rec.name = name_col >= 0 && static_cast<std::size_t>(name_col) < cells.size()
                   ? cells[static_cast<std::size_t>(name_col)]
                   : "row" + std::to_string(lineno - 1);
    rec.acc = detail::parse_number<double>(
        "acc (line " + std::to_string(lineno) + ")",
        cells[static_cast<std::size_t>(acc_col)]);
    rec.len = detail::parse_number<double>(
        "len (line " + std::to_string(lineno) + ")",
        cells[static_cast<std::size_t>(len_col)]);
    out.push_back(rec);
  }
  return out;
}

// Human table; rows with a non-positive mean length get a flag instead of
// an efficiency value.
inline std::string render_metrics_table(const std::vector<MetricsRecord>& rows) {
  std::size_t width = 4;
  for (const MetricsRecord& r : rows) width = std::max(width, r.name.size());
  std::ostringstream out;
  out << "name";
  out << std::string(width - 4 + 2, ' ') << "     ACC       LEN    EFF\n";
  for (const MetricsRecord& r : rows) {
    out << r.name << std::string(width - r.name.size() + 2, ' ');
    char buf[80];
    if (r.len > 0.0) {
      std::snprintf(buf, sizeof(buf), "%8.2f%10.2f%7.2f",
                    r.acc, r.len, token_efficiency(r.acc, r.len));
      out << buf << '\n';
    } else {
      std::snprintf(buf, sizeof(buf), "%8.2f%10.2f", r.acc, r.len);
      out << buf << "    n/a (non-positive len)\n";
    }
  }
  return out.str();
}

}  // namespace drsaf::io
