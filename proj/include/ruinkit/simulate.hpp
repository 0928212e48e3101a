#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "ruinkit/gambler.hpp"
#include "ruinkit/model.hpp"
#include "ruinkit/rng.hpp"

namespace ruinkit::mc {

struct McConfig {
  std::int64_t n_paths = 100000;
  std::uint64_t seed = 1;
  std::int64_t max_steps = 0;  // 0 = per-scenario heuristic
  int workers = 0;             // 0 = hardware concurrency

  void validate() const;
};

// Streaming mean/variance accumulator over a fixed-point grid (2^-32).
// Samples are quantized to 128-bit integers, so partial sums merge by plain
// integer addition: the result is independent of how paths were split across
// workers, which gives bit-identical Monte Carlo output for any worker count.
class Accumulator {
public:
  void add(double value);
  void add_censored() { ++censored_; }
  void merge(const Accumulator& other);

  std::int64_t count() const { return count_; }
  std::int64_t censored() const { return censored_; }
  double sum() const;
  double mean() const;
  double variance() const;     // unbiased sample variance
  double stderr_mean() const;  // sqrt(variance / count)

private:
  __int128 sum_q_ = 0;
  __int128 sum_sq_q_ = 0;
  std::int64_t count_ = 0;
  std::int64_t censored_ = 0;
};

// 95% Wilson score interval for a binomial proportion.
Interval wilson95(std::int64_t successes, std::int64_t n);

int resolve_workers(int requested);

// Runs fn(path_index, rng, acc) for every path index in [0, n_paths) across
// `workers` threads.  Each path owns RngStream(seed, index), so the draws —
// and through Accumulator::merge the totals — do not depend on the split.
template <typename PathFn>
Accumulator run_paths(std::int64_t n_paths, std::uint64_t seed, int workers,
                      PathFn&& fn) {
  const int w = resolve_workers(workers);
  if (w <= 1 || n_paths < 2) {
    Accumulator acc;
    for (std::int64_t i = 0; i < n_paths; ++i) {
      RngStream rng(seed, static_cast<std::uint64_t>(i));
      fn(i, rng, acc);
    }
    return acc;
  }
  std::vector<Accumulator> parts(static_cast<std::size_t>(w));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(w));
  for (int t = 0; t < w; ++t) {
    threads.emplace_back([&, t] {
      const std::int64_t lo = n_paths * t / w;
      const std::int64_t hi = n_paths * (t + 1) / w;
      for (std::int64_t i = lo; i < hi; ++i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        fn(i, rng, parts[static_cast<std::size_t>(t)]);
      }
    });
  }
  for (auto& th : threads) th.join();
  Accumulator acc;
  for (const auto& part : parts) acc.merge(part);
  return acc;
}

// One absorbed walk on a bounded scenario; nullopt when the step cap hits.
std::optional<gambler::BarrierOutcome> walk_to_barrier(const WalkScenario& s,
                                                       RngStream& rng,
                                                       std::int64_t max_steps);

// Monte Carlo ruin frequency for a bounded walk, with Wilson 95% interval.
RuinEstimate mc_ruin_bounded(const WalkScenario& s, const McConfig& cfg);

// Barrier-free ruin frequency: simulates against an absorbing proxy barrier
// and reports exp(theta*proxy) as the truncation bias bound.  For
// non-positive drift no path is run: ruin is almost sure and the estimate
// says so with a warning.
RuinEstimate mc_ruin_unbounded(const WalkScenario& s, const McConfig& cfg,
                               double proxy_barrier);

// P(Brownian bridge from y0 to y1 over a step with variance sigma^2*dt dips
// below 0) = exp(-2*y0*y1/(sigma^2*dt)); 1 if an endpoint is already <= 0.
// Exponents below -40 are rounded to probability 0 without calling exp.
double bridge_crossing_probability(double y0, double y1, double sigma_sq_dt);

// First passage of a + mu*t + sigma*W(t) through 0, Euler scheme with the
// bridge correction above.  times[i] is path i's passage time, NaN when the
// path was censored at the step cap.
struct PassageSamples {
  std::vector<double> times;
  std::int64_t censored = 0;
  double dt = 0.0;
};

PassageSamples mc_first_passage(double mu, double sigma, double a, double dt,
                                const McConfig& cfg);

struct ValueStats {
  double mean = 0.0;
  double stderr_mean = 0.0;
  std::int64_t n = 0;
};

// Mean/stderr of exp(-lambda*T) over the decided passage times.
ValueStats laplace_stats(const PassageSamples& samples, double lambda);
// Mean/stderr of T itself over the decided passage times.
ValueStats time_stats(const PassageSamples& samples);

}  // namespace ruinkit::mc
