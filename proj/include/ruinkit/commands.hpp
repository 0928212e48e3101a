#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ruinkit/report.hpp"
#include "ruinkit/validation.hpp"

namespace ruinkit::cli {

// Shared Monte Carlo knobs; defaults match the CLI flag defaults.
struct McOpts {
  std::int64_t paths = 100000;
  std::uint64_t seed = 1;
  int workers = 0;
  std::int64_t max_steps = 0;
};

struct RuinArgs {
  std::string form;  // "simple" | "wald" | "gaussian"
  double x = 0.0;
  std::optional<double> k;           // absent = no upper barrier
  std::optional<double> p;           // simple
  std::optional<std::string> dist;   // wald
  std::optional<double> mu, sigma;   // gaussian
  bool with_mc = false;
  bool with_diffeq = false;
  std::optional<double> proxy;       // proxy barrier for unbounded MC
  McOpts mc;
};
RunReport cmd_ruin(const RuinArgs& args);

struct AlmArgs {
  std::string form;  // "cost" | "limit" | "simulate"
  double a = 0.0, b = 0.0, mu = 0.0, sigma = 0.0;
  double growth = 0.0, r = 0.0;
  std::optional<double> theta;  // restart level; unused by "limit"
  std::optional<double> t;      // finite horizon for "simulate"
  bool with_mc = false;
  double dt = 1e-3;
  McOpts mc;
};
RunReport cmd_alm(const AlmArgs& args);

struct ValidateArgs {
  bool quick = false;
  std::uint64_t seed = 20260814;
  int workers = 0;
};
// derived["passed"] carries the overall verdict (drives the exit code).
RunReport cmd_validate(const ValidateArgs& args);

struct SweepArgs {
  std::string target;  // "ruin-simple" | "ruin-gaussian" | "alm-cost" | "alm-limit"
  std::string param;
  std::vector<double> values;
  std::optional<std::string> param2;  // optional second grid dimension
  std::vector<double> values2;
  std::string csv;  // CSV output path
  // base scenario, interpreted per target
  std::optional<double> x, k, p, mu, sigma;
  std::optional<double> a, b, growth, r, theta;
  bool with_mc = false;
  McOpts mc;
};
RunReport cmd_sweep(const SweepArgs& args);

}  // namespace ruinkit::cli
