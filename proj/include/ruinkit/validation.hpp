#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ruinkit::cli {

// One row of the cross-validation matrix: an independent route to a quantity
// (difference equation, Monte Carlo, ...) compared against the closed form
// that normally answers it.
struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;   // the discrepancy the check observed
  double tolerance = 0.0;  // what it was allowed to be
  std::string detail;
};

struct ValidationOptions {
  bool quick = false;  // smaller Monte Carlo budgets, looser tolerances
  std::uint64_t seed = 20260814;
  int workers = 0;
};

std::vector<CheckResult> run_validation(const ValidationOptions& opts);

}  // namespace ruinkit::cli
