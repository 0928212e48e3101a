// Acceptance suite: every shipping requirement of the analytics engine as one
// pass/fail line.  Each criterion can run alone (argv[1] = its number) so the
// test driver can time and report them individually.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ruinkit/alm.hpp"
#include "ruinkit/commands.hpp"
#include "ruinkit/gambler.hpp"
#include "ruinkit/model.hpp"
#include "ruinkit/report.hpp"
#include "ruinkit/rng.hpp"
#include "ruinkit/simulate.hpp"
#include "ruinkit/wald.hpp"

namespace {

using namespace ruinkit;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. The tridiagonal difference-equation solver and the closed form agree to
//    1e-10 over the full (x, k, p) grid, in under 5 seconds.
// ---------------------------------------------------------------------------
bool criterion1(std::string& detail) {
  const auto start = Clock::now();
  double worst = 0.0;
  std::int64_t cells = 0;
  for (std::int64_t k : {2, 5, 10, 50, 200}) {
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const auto profile = gambler::ruin_profile(k, p);
      for (std::int64_t x = 1; x < k; ++x) {
        const double diff = std::abs(profile[static_cast<std::size_t>(x)] -
                                     gambler::ruin_bounded(x, k, p));
        worst = std::max(worst, diff);
        ++cells;
      }
    }
  }
  const double elapsed = seconds_since(start);
  detail = "max |difference-equation - closed form| = " + fmt(worst) +
           " over " + std::to_string(cells) + " grid cells (tolerance 1e-10), " +
           fmt(elapsed) + " s (limit 5 s)";
  return worst <= 1e-10 && elapsed < 5.0;
}

// ---------------------------------------------------------------------------
// 2. Boundary values are exact and the fair walk matches (k-x)/k to 1e-15.
// ---------------------------------------------------------------------------
bool criterion2(std::string& detail) {
  double worst_fair = 0.0;
  for (std::int64_t k : {2, 5, 10, 50, 200, 5000}) {
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      if (gambler::ruin_bounded(0, k, p) != 1.0) {
        detail = "ruin(0, " + std::to_string(k) + ", " + fmt(p) + ") != 1";
        return false;
      }
      if (gambler::ruin_bounded(k, k, p) != 0.0) {
        detail = "ruin(k, k) != 0 at k=" + std::to_string(k);
        return false;
      }
    }
    for (std::int64_t x = 0; x <= k; x += std::max<std::int64_t>(1, k / 13)) {
      const double expected =
          static_cast<double>(k - x) / static_cast<double>(k);
      worst_fair =
          std::max(worst_fair, std::abs(gambler::ruin_bounded(x, k, 0.5) -
                                        expected));
    }
  }
  detail = "boundaries exact; max |fair-walk ruin - (k-x)/k| = " +
           fmt(worst_fair) + " (tolerance 1e-15)";
  return worst_fair <= 1e-15;
}

// ---------------------------------------------------------------------------
// 3. On unit-step walks the martingale approximation has no overshoot error:
//    bounded and barrier-free evaluators match the closed forms to 1e-12.
// ---------------------------------------------------------------------------
bool criterion3(std::string& detail) {
  double worst = 0.0;
  for (std::int64_t k : {2, 5, 10, 50, 200}) {
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const TwoPoint d(p);
      for (std::int64_t x = 1; x < k; ++x) {
        const double closed = gambler::ruin_bounded(x, k, p);
        const double approx = wald::ruin_wald_bounded(
            static_cast<double>(x), static_cast<double>(k), d);
        worst = std::max(worst, std::abs(approx - closed));
      }
    }
  }
  for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const TwoPoint d(p);
    for (std::int64_t x : {0, 10, 20, 30, 40, 50}) {
      const double closed = gambler::ruin_unbounded(x, p);
      const double approx = wald::ruin_wald_unbounded(static_cast<double>(x), d);
      worst = std::max(worst, std::abs(approx - closed));
    }
  }
  detail = "max |martingale approximation - closed form| = " + fmt(worst) +
           " on the lattice grid (tolerance 1e-12)";
  return worst <= 1e-12;
}

// ---------------------------------------------------------------------------
// 4. The adjustment-coefficient solver leaves residual |E e^{tX} - 1| <= 1e-12
//    across 1000 randomized two-point and Gaussian distributions.
// ---------------------------------------------------------------------------
bool criterion4(std::string& detail) {
  RngStream rng(20260814, 0);
  double worst = 0.0;
  int solved = 0;
  for (int i = 0; i < 1000; ++i) {
    IncrementDistribution d = TwoPoint(0.25);
    if (i % 2 == 0) {
      double p;
      do {
        p = 0.05 + 0.9 * rng.uniform01();
      } while (std::abs(2.0 * p - 1.0) <= 1e-12);
      d = TwoPoint(p);
    } else {
      double mu;
      do {
        mu = -2.0 + 4.0 * rng.uniform01();
      } while (std::abs(mu) <= 1e-12);
      d = Gaussian(mu, 0.2 + 2.8 * rng.uniform01());
    }
    const auto root = wald::solve_adjustment(d);
    const auto* ac = std::get_if<wald::AdjustmentCoefficient>(&root);
    if (ac == nullptr) {
      detail = "no root certified for " + describe(d);
      return false;
    }
    worst = std::max(worst, std::abs(mgf(d, ac->theta) - 1.0));
    ++solved;
  }
  detail = "max residual = " + fmt(worst) + " over " + std::to_string(solved) +
           " randomized distributions (tolerance 1e-12)";
  return worst <= 1e-12;
}

// ---------------------------------------------------------------------------
// 5. Monte Carlo vs closed form on the fair walk: 1e6 paths, x=3, k=10,
//    p=0.5, within 4 binomial stderr of 0.7, in under 10 seconds.
// ---------------------------------------------------------------------------
bool criterion5(std::string& detail) {
  const auto start = Clock::now();
  mc::McConfig cfg;
  cfg.n_paths = 1000000;
  cfg.seed = 1;
  cfg.workers = 0;
  const WalkScenario s(3.0, 10.0, IncrementDistribution(TwoPoint(0.5)));
  const auto est = mc::mc_ruin_bounded(s, cfg);
  const double elapsed = seconds_since(start);
  const double gap = std::abs(est.value - 0.7);
  const double tol = 4.0 * est.stderr_value;
  detail = "frequency " + fmt(est.value) + " vs 0.7, |gap| = " + fmt(gap) +
           " (tolerance 4*stderr = " + fmt(tol) + "), " + fmt(elapsed) +
           " s (limit 10 s)";
  return est.diagnostics.censored == 0 && gap <= tol && elapsed < 10.0;
}

// ---------------------------------------------------------------------------
// 6. Monte Carlo vs the martingale approximation on a Gaussian walk:
//    x=2, k=5, mu=0.5, sigma=1, 1e6 paths, |frequency - 0.129468| within
//    max(0.01, 4*stderr).
// ---------------------------------------------------------------------------
bool criterion6(std::string& detail) {
  mc::McConfig cfg;
  cfg.n_paths = 1000000;
  cfg.seed = 1;
  cfg.workers = 0;
  const WalkScenario s(2.0, 5.0, IncrementDistribution(Gaussian(0.5, 1.0)));
  const auto est = mc::mc_ruin_bounded(s, cfg);
  const double target = 0.129468;
  const double gap = std::abs(est.value - target);
  const double tol = std::max(0.01, 4.0 * est.stderr_value);
  detail = "frequency " + fmt(est.value) + " vs approximation " + fmt(target) +
           ", |gap| = " + fmt(gap) + " (tolerance " + fmt(tol) +
           "); the approximation ignores barrier overshoot, which removes "
           "probability mass from the ruin side at these short distances";
  return gap <= tol;
}

// ---------------------------------------------------------------------------
// 7. Limits: near-zero drift converges to the driftless value, and huge
//    barriers converge to the barrier-free geometric form.
// ---------------------------------------------------------------------------
bool criterion7(std::string& detail) {
  double worst_drift = 0.0;
  for (double mu : {1e-8, -1e-8}) {
    for (double x : {1.0, 3.0, 7.0}) {
      const double k = 10.0;
      const double fair = (k - x) / k;
      worst_drift = std::max(
          worst_drift,
          std::abs(wald::ruin_gaussian_bounded(x, k, mu, 1.0) - fair));
    }
  }
  double worst_tail = 0.0;
  for (double p : {0.6, 0.7}) {
    const double ratio = (1.0 - p) / p;
    for (std::int64_t x : {1, 3, 10}) {
      const double limit = std::pow(ratio, static_cast<double>(x));
      worst_tail = std::max(
          worst_tail, std::abs(gambler::ruin_bounded(x, 10000, p) - limit));
    }
  }
  detail = "max |near-zero-drift - driftless| = " + fmt(worst_drift) +
           " (tolerance 1e-6); max |k=1e4 - barrier-free| = " + fmt(worst_tail) +
           " (tolerance 1e-8)";
  return worst_drift <= 1e-6 && worst_tail <= 1e-8;
}

// ---------------------------------------------------------------------------
// 8. First-passage sampler vs the Laplace-transform law: for every
//    (a, lambda) in {0.5,1,2} x {0.1,0.5,1} with mu=-0.5, sigma=1, the sample
//    mean of e^{-lambda T} is within 4 stderr of e^{-K_lambda a} and the mean
//    passage time is within 4 stderr of a/|mu|.  1e5 passages, under 60 s.
// ---------------------------------------------------------------------------
bool criterion8(std::string& detail) {
  const auto start = Clock::now();
  const double mu = -0.5, sigma = 1.0, dt = 1e-3;
  mc::McConfig cfg;
  cfg.n_paths = 100000;
  cfg.seed = 2;
  cfg.workers = 0;

  std::ostringstream worst;
  bool ok = true;
  double max_z = 0.0;
  for (double a : {0.5, 1.0, 2.0}) {
    const auto samples = mc::mc_first_passage(mu, sigma, a, dt, cfg);
    if (samples.censored > 0) {
      detail = "unexpected censoring at a=" + fmt(a);
      return false;
    }
    const auto ts = mc::time_stats(samples);
    const double t_gap = std::abs(ts.mean - a / std::abs(mu));
    max_z = std::max(max_z, t_gap / ts.stderr_mean);
    if (t_gap > 4.0 * ts.stderr_mean) {
      ok = false;
      worst << " mean-time miss at a=" << fmt(a) << " (gap " << fmt(t_gap)
            << " vs " << fmt(4.0 * ts.stderr_mean) << ")";
    }
    for (double lambda : {0.1, 0.5, 1.0}) {
      const double k = alm::passage_exponent(mu, sigma, lambda);
      const double target = std::exp(-k * a);
      const auto ls = mc::laplace_stats(samples, lambda);
      const double gap = std::abs(ls.mean - target);
      max_z = std::max(max_z, gap / ls.stderr_mean);
      if (gap > 4.0 * ls.stderr_mean) {
        ok = false;
        worst << " transform miss at (a=" << fmt(a)
              << ", lambda=" << fmt(lambda) << "): gap " << fmt(gap) << " vs "
              << fmt(4.0 * ls.stderr_mean);
      }
    }
  }
  const double elapsed = seconds_since(start);
  detail = "9 transform cells + 3 mean-time cells, worst |z| = " + fmt(max_z) +
           " (limit 4), " + fmt(elapsed) + " s (limit 60 s)" + worst.str();
  return ok && elapsed < 60.0;
}

// ---------------------------------------------------------------------------
// 9. Restart-cost cross-validation: bridge-corrected Monte Carlo (1e5 paths,
//    dt=1e-3) within 4 stderr + 2% of the closed form on the reference
//    scenario, and the tiny-restart closed form within 1e-4 relative of the
//    restart->0 limit.  Under 3 minutes.
// ---------------------------------------------------------------------------
bool criterion9(std::string& detail) {
  const auto start = Clock::now();
  const AlmScenario s(0.2, 1.0, -0.5, 1.0, 0.0, 0.5, 0.1);
  const double closed = alm::perpetual_cost(s).value;

  mc::McConfig cfg;
  cfg.n_paths = 100000;
  cfg.seed = 3;
  cfg.workers = 0;
  const auto est = alm::simulate_perpetual_cost(s, cfg, 1e-3);
  const double gap = std::abs(est.value - closed);
  const double tol = 4.0 * est.stderr_value + 0.02 * closed;

  const AlmScenario tiny(0.2, 1.0, -0.5, 1.0, 0.0, 0.5, 1e-6);
  const double small_restart = alm::perpetual_cost(tiny).value;
  const double limit = alm::perpetual_cost_limit(tiny).value;
  const double rel = std::abs(small_restart - limit) / limit;

  const double elapsed = seconds_since(start);
  detail = "MC " + fmt(est.value) + " vs closed " + fmt(closed) + ", |gap| = " +
           fmt(gap) + " (tolerance " + fmt(tol) + "); restart=1e-6 vs limit " +
           "relative gap = " + fmt(rel) + " (tolerance 1e-4); " + fmt(elapsed) +
           " s (limit 180 s)";
  return gap <= tol && rel <= 1e-4 && elapsed < 180.0;
}

// ---------------------------------------------------------------------------
// 10. Halving dt moves the Monte Carlo cost estimate by less than its 95% CI
//     width: the discretization error is below the statistical resolution.
// ---------------------------------------------------------------------------
bool criterion10(std::string& detail) {
  const AlmScenario s(0.2, 1.0, -0.5, 1.0, 0.0, 0.5, 0.1);
  mc::McConfig cfg;
  cfg.n_paths = 100000;
  cfg.seed = 3;
  cfg.workers = 0;
  const auto coarse = alm::simulate_perpetual_cost(s, cfg, 1e-3);
  const auto fine = alm::simulate_perpetual_cost(s, cfg, 5e-4);
  const double shift = std::abs(fine.value - coarse.value);
  const double width = coarse.ci95.hi - coarse.ci95.lo;
  detail = "dt 1e-3 -> 5e-4 moved the estimate by " + fmt(shift) +
           "; 95% CI width = " + fmt(width);
  return shift < width;
}

// ---------------------------------------------------------------------------
// 11. Reproducibility: a seeded command emits bit-identical JSON for worker
//     counts 1, 2, and 8 (scheduling only shows up in the timing section).
// ---------------------------------------------------------------------------
bool criterion11(std::string& detail) {
  auto ruin_doc = [](int workers) {
    cli::RuinArgs args;
    args.form = "gaussian";
    args.x = 2.0;
    args.k = 5.0;
    args.mu = 0.5;
    args.sigma = 1.0;
    args.with_mc = true;
    args.mc.paths = 20000;
    args.mc.seed = 17;
    args.mc.workers = workers;
    auto j = cli::cmd_ruin(args).to_json();
    j.erase("timing");
    return j.dump();
  };
  auto alm_doc = [](int workers) {
    cli::AlmArgs args;
    args.form = "simulate";
    args.a = 0.2;
    args.b = 1.0;
    args.mu = -0.5;
    args.sigma = 1.0;
    args.growth = 0.0;
    args.r = 0.5;
    args.theta = 0.1;
    args.t = 3.0;
    args.dt = 2e-3;
    args.mc.paths = 4000;
    args.mc.seed = 23;
    args.mc.workers = workers;
    auto j = cli::cmd_alm(args).to_json();
    j.erase("timing");
    return j.dump();
  };
  const std::string r1 = ruin_doc(1), r2 = ruin_doc(2), r8 = ruin_doc(8);
  const std::string a1 = alm_doc(1), a2 = alm_doc(2), a8 = alm_doc(8);
  const bool ruin_ok = r1 == r2 && r1 == r8;
  const bool alm_ok = a1 == a2 && a1 == a8;
  detail = std::string("ruin report ") +
           (ruin_ok ? "identical" : "DIFFERS") + " and alm report " +
           (alm_ok ? "identical" : "DIFFERS") +
           " across workers {1, 2, 8} with timing stripped";
  return ruin_ok && alm_ok;
}

// ---------------------------------------------------------------------------
// 12. Interval calibration: across 200 seeds (1e4 paths each) the 95%
//     interval on the fair-walk scenario covers 0.7 at least 180 times.
// ---------------------------------------------------------------------------
bool criterion12(std::string& detail) {
  const WalkScenario s(3.0, 10.0, IncrementDistribution(TwoPoint(0.5)));
  int covered = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    mc::McConfig cfg;
    cfg.n_paths = 10000;
    cfg.seed = seed;
    cfg.workers = 0;
    const auto est = mc::mc_ruin_bounded(s, cfg);
    if (est.ci95.lo <= 0.7 && 0.7 <= est.ci95.hi) ++covered;
  }
  detail = "95% interval covered the true value in " + std::to_string(covered) +
           "/200 seeded runs (requirement: >= 180)";
  return covered >= 180;
}

struct Criterion {
  int id;
  const char* summary;
  std::function<bool(std::string&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "difference-equation oracle matches the closed form", criterion1},
      {2, "boundary values exact, fair walk linear", criterion2},
      {3, "martingale approximation exact on unit-step walks", criterion3},
      {4, "adjustment-coefficient residuals below 1e-12", criterion4},
      {5, "Monte Carlo matches the fair-walk closed form", criterion5},
      {6, "Monte Carlo matches the Gaussian-walk approximation", criterion6},
      {7, "zero-drift and infinite-barrier limits", criterion7},
      {8, "first-passage sampler matches the transform law", criterion8},
      {9, "restart-cost Monte Carlo matches the closed form", criterion9},
      {10, "halving dt stays inside the statistical resolution", criterion10},
      {11, "seeded reports identical across worker counts", criterion11},
      {12, "95% intervals cover the truth at the nominal rate", criterion12},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 12) {
      std::fprintf(stderr, "usage: %s [criterion 1..12]\n", argv[0]);
      return 2;
    }
  }

  bool all_ok = true;
  for (const auto& c : criteria()) {
    if (only != 0 && c.id != only) continue;
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %d: %s — %s\n", ok ? "PASS" : "FAIL", c.id,
                c.summary, detail.c_str());
    std::fflush(stdout);
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}
