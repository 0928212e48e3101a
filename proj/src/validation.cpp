#include "ruinkit/validation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ruinkit/alm.hpp"
#include "ruinkit/gambler.hpp"
#include "ruinkit/model.hpp"
#include "ruinkit/simulate.hpp"
#include "ruinkit/wald.hpp"

namespace ruinkit::cli {

namespace {

CheckResult make_check(std::string name, double measured, double tolerance,
                       std::string detail = {}) {
  CheckResult c;
  c.name = std::move(name);
  c.measured = measured;
  c.tolerance = tolerance;
  c.passed = measured <= tolerance;
  c.detail = std::move(detail);
  return c;
}

// Closed form vs the tridiagonal solve, exhaustively over a barrier/p grid.
CheckResult check_difference_equation() {
  const std::int64_t ks[] = {2, 3, 5, 10, 50, 200};
  const double ps[] = {0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 0.95};
  double worst = 0.0;
  for (const std::int64_t k : ks)
    for (const double p : ps) {
      const auto profile = gambler::ruin_profile(k, p);
      for (std::int64_t x = 0; x <= k; ++x)
        worst = std::max(worst,
                         std::abs(profile[static_cast<std::size_t>(x)] -
                                  gambler::ruin_bounded(x, k, p)));
    }
  return make_check("difference_equation_vs_closed_form", worst, 1e-10);
}

// On unit-step walks the adjustment root is exact (theta = ln(q/p)), so the
// generic approximation must coincide with the simple-walk closed forms.
CheckResult check_wald_on_two_point() {
  const std::int64_t ks[] = {2, 5, 10, 25, 50};
  const double ps[] = {0.05, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95};
  double worst = 0.0;
  for (const double p : ps) {
    const IncrementDistribution d = TwoPoint(p);
    for (const std::int64_t k : ks)
      for (std::int64_t x = 0; x <= k; ++x)
        worst = std::max(
            worst, std::abs(wald::ruin_wald_bounded(
                                static_cast<double>(x), static_cast<double>(k), d) -
                            gambler::ruin_bounded(x, k, p)));
    for (std::int64_t x = 0; x <= 50; x += 10)
      worst = std::max(
          worst, std::abs(wald::ruin_wald_unbounded(static_cast<double>(x), d) -
                          gambler::ruin_unbounded(x, p)));
  }
  return make_check("wald_vs_simple_walk_closed_forms", worst, 1e-12);
}

// Gaussian two-barrier approximation against a direct walk simulation at a
// drift gentle enough that the overshoot bias stays inside the tolerance.
CheckResult check_gaussian_vs_mc(const ValidationOptions& opts) {
  const double mu = 0.01, sigma = 1.0, x = 15.0, k = 30.0;
  const double closed = wald::ruin_gaussian_bounded(x, k, mu, sigma);

  mc::McConfig cfg;
  cfg.n_paths = opts.quick ? 50000 : 400000;
  cfg.seed = opts.seed;
  cfg.workers = opts.workers;
  const WalkScenario s(x, k, Gaussian(mu, sigma));
  const RuinEstimate est = mc::mc_ruin_bounded(s, cfg);

  const double tol =
      std::max(opts.quick ? 0.02 : 0.01, 4.0 * est.stderr_value);
  std::ostringstream detail;
  detail << "closed=" << closed << " mc=" << est.value
         << " n=" << est.n_paths;
  return make_check("gaussian_ruin_vs_monte_carlo",
                    std::abs(est.value - closed), tol, detail.str());
}

// E[exp(-lambda T)] from simulated first passages against exp(-K a).
CheckResult check_passage_exponent(const ValidationOptions& opts) {
  const double mu = -0.5, sigma = 1.0, a = 1.0, lambda = 0.5;
  const double target = std::exp(-alm::passage_exponent(mu, sigma, lambda) * a);

  mc::McConfig cfg;
  cfg.n_paths = opts.quick ? 5000 : 20000;
  cfg.seed = opts.seed + 1;
  cfg.workers = opts.workers;
  const double dt = opts.quick ? 5e-3 : 2e-3;
  const auto samples = mc::mc_first_passage(mu, sigma, a, dt, cfg);
  const auto stats = mc::laplace_stats(samples, lambda);

  // 4 sigma of sampling noise plus a linear-in-dt discretization allowance.
  const double tol = 4.0 * stats.stderr_mean + 2.0 * lambda * dt;
  std::ostringstream detail;
  detail << "exact=" << target << " mc=" << stats.mean
         << " censored=" << samples.censored;
  return make_check("passage_laplace_vs_exponent",
                    std::abs(stats.mean - target), tol, detail.str());
}

// Closed-form perpetual restart cost against the path simulation.
CheckResult check_perpetual_cost(const ValidationOptions& opts) {
  const AlmScenario s(0.2, 1.0, -0.5, 1.0, 0.0, 0.5, 0.1);
  const double closed = alm::perpetual_cost(s).value;

  mc::McConfig cfg;
  cfg.n_paths = opts.quick ? 2000 : 20000;
  cfg.seed = opts.seed + 2;
  cfg.workers = opts.workers;
  const double dt = opts.quick ? 4e-3 : 2e-3;
  const CostEstimate est = alm::simulate_perpetual_cost(s, cfg, dt);

  const double tol = 4.0 * est.stderr_value + 0.02 * closed;
  std::ostringstream detail;
  detail << "closed=" << closed << " mc=" << est.value << " n=" << est.n_paths;
  return make_check("perpetual_cost_vs_monte_carlo",
                    std::abs(est.value - closed), tol, detail.str());
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& opts) {
  std::vector<CheckResult> checks;
  checks.push_back(check_difference_equation());
  checks.push_back(check_wald_on_two_point());
  checks.push_back(check_gaussian_vs_mc(opts));
  checks.push_back(check_passage_exponent(opts));
  checks.push_back(check_perpetual_cost(opts));
  return checks;
}

}  // namespace ruinkit::cli
