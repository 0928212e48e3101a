#include "ruinkit/report.hpp"

#include <cstdio>
#include <sstream>

namespace ruinkit::cli {

namespace {

ordered_json diagnostics_json(const EstimateDiagnostics& d) {
  ordered_json j = ordered_json::object();
  j["censored"] = d.censored;
  j["censored_fraction"] = d.censored_fraction;
  j["unreliable"] = d.unreliable;
  j["truncation_bound"] = d.truncation_bound;
  j["warnings"] = d.warnings;
  return j;
}

template <typename Estimate>
ordered_json estimate_core(const Estimate& e) {
  ordered_json j = ordered_json::object();
  j["method"] = method_name(e.method);
  j["value"] = e.value;
  j["stderr"] = e.stderr_value;
  j["ci95"] = {e.ci95.lo, e.ci95.hi};
  j["n_paths"] = e.n_paths;
  return j;
}

void append_text(std::ostringstream& os, const std::string& label,
                 const ordered_json& j) {
  os << "  " << label << " [" << j["method"].get<std::string>() << "]"
     << " value=" << format_double(j["value"].get<double>());
  if (j["n_paths"].get<std::int64_t>() > 0) {
    os << " stderr=" << format_double(j["stderr"].get<double>())
       << " ci95=[" << format_double(j["ci95"][0].get<double>()) << ", "
       << format_double(j["ci95"][1].get<double>()) << "]"
       << " n=" << j["n_paths"].get<std::int64_t>();
  }
  os << "\n";
}

}  // namespace

ordered_json estimate_json(const RuinEstimate& e) {
  ordered_json j = estimate_core(e);
  j["diagnostics"] = diagnostics_json(e.diagnostics);
  return j;
}

ordered_json estimate_json(const CostEstimate& e) {
  ordered_json j = estimate_core(e);
  if (e.horizon)
    j["horizon"] = *e.horizon;
  else
    j["horizon"] = "perpetual";
  j["diagnostics"] = diagnostics_json(e.diagnostics);
  return j;
}

std::string format_double(double v) {
  // nlohmann emits shortest-round-trip decimals; match it for text output.
  return ordered_json(v).dump();
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json RunReport::to_json() const {
  ordered_json j = ordered_json::object();
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["command"] = command;
  j["seed"] = seed;
  j["scenario"] = scenario;
  if (!derived.empty()) j["derived"] = derived;
  ordered_json rs = ordered_json::array();
  for (const auto& r : results) {
    ordered_json e = std::visit([](const auto& est) { return estimate_json(est); },
                                r.estimate);
    ordered_json row = ordered_json::object();
    row["label"] = r.label;
    for (auto& [k, v] : e.items()) row[k] = v;
    rs.push_back(std::move(row));
  }
  j["results"] = std::move(rs);
  j["warnings"] = warnings;
  j["timing"] = {{"wall_time_s", wall_time_s}, {"workers", workers}};
  return j;
}

std::string RunReport::to_text() const {
  std::ostringstream os;
  os << kToolName << " " << kToolVersion << " — " << command
     << " (seed " << seed << ")\n";
  os << "scenario: ";
  bool first = true;
  for (const auto& [k, v] : scenario.items()) {
    if (!first) os << " ";
    os << k << "=" << v.dump();
    first = false;
  }
  os << "\n";

  // The validate command reports a check matrix instead of estimates.
  if (derived.contains("checks")) {
    for (const auto& c : derived["checks"]) {
      os << (c["passed"].get<bool>() ? "PASS " : "FAIL ")
         << c["name"].get<std::string>()
         << "  measured=" << format_double(c["measured"].get<double>())
         << " tolerance=" << format_double(c["tolerance"].get<double>());
      const std::string detail = c["detail"].get<std::string>();
      if (!detail.empty()) os << "  (" << detail << ")";
      os << "\n";
    }
    os << (derived["passed"].get<bool>() ? "validation passed"
                                         : "validation FAILED")
       << "\n";
  } else if (!derived.empty()) {
    os << "derived: ";
    first = true;
    for (const auto& [k, v] : derived.items()) {
      if (!first) os << " ";
      os << k << "=" << v.dump();
      first = false;
    }
    os << "\n";
  }

  if (!results.empty()) {
    os << "results:\n";
    for (const auto& r : results) {
      const ordered_json e = std::visit(
          [](const auto& est) { return estimate_json(est); }, r.estimate);
      append_text(os, r.label, e);
    }
  }
  for (const auto& w : warnings) os << "warning: " << w << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "wall time: %.3f s (workers %d)\n",
                wall_time_s, workers);
  os << buf;
  return os.str();
}

}  // namespace ruinkit::cli
