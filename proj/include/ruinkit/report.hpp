#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "ruinkit/model.hpp"

namespace ruinkit::cli {

inline constexpr const char* kToolName = "ruinkit";
inline constexpr const char* kToolVersion = "0.1.0";

using ordered_json = nlohmann::ordered_json;

struct LabeledResult {
  std::string label;  // e.g. "ruin_probability", "perpetual_cost"
  std::variant<RuinEstimate, CostEstimate> estimate;
};

// Everything one command run produced.  `scenario` echoes the effective
// inputs under the same keys the command accepts, so a report's scenario
// block can be fed back through --config to reproduce the run.
struct RunReport {
  std::string command;
  std::uint64_t seed = 0;
  int workers = 1;
  ordered_json scenario = ordered_json::object();
  ordered_json derived = ordered_json::object();  // theta, K, check matrix, ...
  std::vector<LabeledResult> results;
  std::vector<std::string> warnings;
  double wall_time_s = 0.0;

  // Full document.  Volatile fields (wall time, worker count) live under
  // "timing" only, so reports from runs that differ solely in scheduling are
  // byte-identical once that one section is dropped.
  ordered_json to_json() const;
  std::string to_text() const;
};

ordered_json estimate_json(const RuinEstimate& e);
ordered_json estimate_json(const CostEstimate& e);

// Shortest round-trip decimal form of v (what the JSON writer emits too).
std::string format_double(double v);
// 17-significant-digit form used for CSV cells.
std::string format_g17(double v);

}  // namespace ruinkit::cli
