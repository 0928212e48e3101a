#include "ruinkit/simulate.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "ruinkit/wald.hpp"

namespace ruinkit::mc {

namespace {

constexpr double kZ95 = 1.959963984540054;
constexpr double kScale = 4294967296.0;  // 2^32 fixed-point grid
constexpr double kRangeLimit = 1e9;      // keeps squares inside __int128

__int128 quantize(double v) {
  const double scaled = v * kScale;
  // Round half away from zero; the cast itself truncates deterministically.
  return scaled >= 0.0 ? static_cast<__int128>(scaled + 0.5)
                       : -static_cast<__int128>(-scaled + 0.5);
}

std::int64_t default_barrier_steps(double k, double var) {
  // Diffusive time to cross a barrier of width k is ~k^2/var; two orders of
  // magnitude on top makes censoring a pathology, not a routine event.
  const double steps = std::ceil(100.0 * k * k / var);
  return static_cast<std::int64_t>(std::min(steps, 4.0e18));
}

void finish_binomial(RuinEstimate& e, const Accumulator& acc,
                     std::int64_t requested) {
  const std::int64_t decided = acc.count();
  const std::int64_t ruined = decided > 0 ? std::llround(acc.sum()) : 0;
  e.method = Method::MonteCarlo;
  e.n_paths = decided;
  e.diagnostics.censored = acc.censored();
  e.diagnostics.censored_fraction =
      requested > 0 ? static_cast<double>(acc.censored()) /
                          static_cast<double>(requested)
                    : 0.0;
  if (decided == 0) {
    e.value = 0.0;
    e.diagnostics.unreliable = true;
    e.diagnostics.warnings.push_back("all paths hit the step cap; no estimate");
    return;
  }
  const double phat =
      static_cast<double>(ruined) / static_cast<double>(decided);
  e.value = phat;
  e.stderr_value = std::sqrt(phat * (1.0 - phat) / static_cast<double>(decided));
  e.ci95 = wilson95(ruined, decided);
  if (e.diagnostics.censored_fraction > 0.01) {
    e.diagnostics.unreliable = true;
    e.diagnostics.warnings.push_back(
        "more than 1% of paths were censored at the step cap; "
        "estimate is unreliable");
  }
}

}  // namespace

void McConfig::validate() const {
  // Below ~100 paths the normal-theory error bars reported alongside the
  // estimate are fiction, so tiny runs are rejected rather than mislabeled.
  if (n_paths < 100)
    throw std::domain_error("n_paths must be >= 100, got " +
                            std::to_string(n_paths));
  if (max_steps < 0)
    throw std::domain_error("max_steps must be >= 0, got " +
                            std::to_string(max_steps));
  if (workers < 0)
    throw std::domain_error("workers must be >= 0, got " +
                            std::to_string(workers));
}

void Accumulator::add(double value) {
  if (!(std::abs(value) <= kRangeLimit))
    throw std::domain_error("accumulator sample out of range: " +
                            std::to_string(value));
  sum_q_ += quantize(value);
  sum_sq_q_ += quantize(value * value);
  ++count_;
}

void Accumulator::merge(const Accumulator& other) {
  sum_q_ += other.sum_q_;
  sum_sq_q_ += other.sum_sq_q_;
  count_ += other.count_;
  censored_ += other.censored_;
}

double Accumulator::sum() const { return static_cast<double>(sum_q_) / kScale; }

double Accumulator::mean() const {
  return count_ > 0 ? sum() / static_cast<double>(count_) : 0.0;
}

double Accumulator::variance() const {
  if (count_ < 2) return 0.0;
  const double n = static_cast<double>(count_);
  const double s = sum();
  const double ss = static_cast<double>(sum_sq_q_) / kScale;
  return std::max(0.0, (ss - s * s / n) / (n - 1.0));
}

double Accumulator::stderr_mean() const {
  return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
}

Interval wilson95(std::int64_t successes, std::int64_t n) {
  if (n <= 0) return {0.0, 1.0};
  const double z2 = kZ95 * kZ95;
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(successes) / nn;
  const double denom = 1.0 + z2 / nn;
  const double center = (phat + z2 / (2.0 * nn)) / denom;
  const double half =
      kZ95 * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
  // At the empirical edges center -+ half cancels exactly in the algebra but
  // not in floats; pin the bound so zero successes never report lo > 0.
  const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = successes == n ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::optional<gambler::BarrierOutcome> walk_to_barrier(const WalkScenario& s,
                                                       RngStream& rng,
                                                       std::int64_t max_steps) {
  if (!s.bounded())
    throw std::invalid_argument("walk_to_barrier needs a bounded scenario");
  if (s.x <= 0.0) return gambler::BarrierOutcome{true, 0};
  if (s.x >= *s.barrier) return gambler::BarrierOutcome{false, 0};

  if (const auto* tp = std::get_if<TwoPoint>(&s.increments)) {
    // Unit steps on integer coordinates: exact absorption, integer state.
    const double p = tp->p;
    std::int64_t pos = static_cast<std::int64_t>(s.x);
    const std::int64_t k = static_cast<std::int64_t>(*s.barrier);
    for (std::int64_t n = 1; n <= max_steps; ++n) {
      pos += rng.uniform01() < p ? 1 : -1;
      if (pos == 0) return gambler::BarrierOutcome{true, n};
      if (pos == k) return gambler::BarrierOutcome{false, n};
    }
    return std::nullopt;
  }

  double pos = s.x;
  const double k = *s.barrier;
  for (std::int64_t n = 1; n <= max_steps; ++n) {
    pos += sample(s.increments, rng);
    if (pos <= 0.0) return gambler::BarrierOutcome{true, n};
    if (pos >= k) return gambler::BarrierOutcome{false, n};
  }
  return std::nullopt;
}

RuinEstimate mc_ruin_bounded(const WalkScenario& s, const McConfig& cfg) {
  cfg.validate();
  if (!s.bounded())
    throw std::invalid_argument("mc_ruin_bounded needs a bounded scenario");
  const std::int64_t max_steps =
      cfg.max_steps > 0 ? cfg.max_steps
                        : default_barrier_steps(*s.barrier, variance(s.increments));

  const Accumulator acc = run_paths(
      cfg.n_paths, cfg.seed, cfg.workers,
      [&](std::int64_t, RngStream& rng, Accumulator& a) {
        const auto outcome = walk_to_barrier(s, rng, max_steps);
        if (outcome)
          a.add(outcome->ruined ? 1.0 : 0.0);
        else
          a.add_censored();
      });

  RuinEstimate e;
  finish_binomial(e, acc, cfg.n_paths);
  return e;
}

RuinEstimate mc_ruin_unbounded(const WalkScenario& s, const McConfig& cfg,
                               double proxy_barrier) {
  cfg.validate();
  if (s.bounded())
    throw std::invalid_argument("mc_ruin_unbounded needs an unbounded scenario");

  if (mean(s.increments) <= 0.0) {
    // Recurrence theorem territory: the walk revisits every level, ruin is
    // almost sure.  Simulation would only burn cycles to confirm it.
    RuinEstimate e = RuinEstimate::deterministic(1.0, Method::ClosedForm);
    e.diagnostics.warnings.push_back(
        "drift is non-positive: ruin is almost sure; no paths simulated");
    return e;
  }

  double proxy = proxy_barrier;
  if (is_two_point(s.increments)) proxy = std::ceil(proxy);
  if (!(proxy > s.x))
    throw std::domain_error("proxy barrier must exceed x, got proxy=" +
                            std::to_string(proxy_barrier) +
                            ", x=" + std::to_string(s.x));

  const WalkScenario bounded(s.x, proxy, s.increments);
  RuinEstimate e = mc_ruin_bounded(bounded, cfg);

  // Paths absorbed at the proxy are counted as survivors; the chance any of
  // them would still have ruined is at most exp(theta*proxy) (theta < 0 since
  // the drift is positive), which we surface as the truncation bias bound.
  const auto root = wald::solve_adjustment(s.increments);
  if (const auto* ac = std::get_if<wald::AdjustmentCoefficient>(&root)) {
    e.diagnostics.truncation_bound = std::exp(ac->theta * proxy);
    if (e.diagnostics.truncation_bound > 1e-3)
      e.diagnostics.warnings.push_back(
          "proxy barrier is low: truncation bias bound above 1e-3");
  }
  return e;
}

double bridge_crossing_probability(double y0, double y1, double sigma_sq_dt) {
  if (y0 <= 0.0 || y1 <= 0.0) return 1.0;
  const double exponent = -2.0 * y0 * y1 / sigma_sq_dt;
  // The skip threshold is a fixed function of the state, so taking it never
  // desynchronizes the draw sequence between runs.
  if (exponent < -40.0) return 0.0;
  return std::exp(exponent);
}

PassageSamples mc_first_passage(double mu, double sigma, double a, double dt,
                                const McConfig& cfg) {
  cfg.validate();
  if (!(sigma > 0.0))
    throw std::domain_error("first passage needs sigma > 0");
  if (!(a > 0.0))
    throw std::domain_error("first passage needs a > 0");
  if (!(dt > 0.0))
    throw std::domain_error("first passage needs dt > 0");

  std::int64_t max_steps = cfg.max_steps;
  if (max_steps == 0) {
    // ~400 mean lifetimes for drifted paths; a broad diffusive window else.
    const double horizon = mu < 0.0 ? 400.0 * a / -mu
                                    : 1000.0 * a * a / (sigma * sigma);
    max_steps = static_cast<std::int64_t>(
        std::min(std::ceil(horizon / dt), 1.0e9));
  }

  PassageSamples out;
  out.dt = dt;
  out.times.assign(static_cast<std::size_t>(cfg.n_paths),
                   std::numeric_limits<double>::quiet_NaN());
  const double sig_sq_dt = sigma * sigma * dt;
  const double sqrt_dt = std::sqrt(dt);
  double* times = out.times.data();

  const Accumulator acc = run_paths(
      cfg.n_paths, cfg.seed, cfg.workers,
      [&, times](std::int64_t i, RngStream& rng, Accumulator& acc_part) {
        double y = a;
        double t = 0.0;
        for (std::int64_t n = 0; n < max_steps; ++n) {
          const double y1 = y + mu * dt + sigma * sqrt_dt * rng.normal();
          if (y1 <= 0.0) {
            // Crossed on the grid: place the hit by linear interpolation.
            times[i] = t + dt * y / (y - y1);
            acc_part.add(0.0);
            return;
          }
          const double pc = bridge_crossing_probability(y, y1, sig_sq_dt);
          if (pc > 0.0 && rng.uniform01() < pc) {
            // Bridge dipped below 0 between grid points; midpoint is the
            // standard unbiased-enough stand-in for the unknown hit time.
            times[i] = t + 0.5 * dt;
            acc_part.add(0.0);
            return;
          }
          y = y1;
          t += dt;
        }
        acc_part.add_censored();
      });

  out.censored = acc.censored();
  return out;
}

namespace {

ValueStats stats_over_decided(const PassageSamples& samples,
                              double (*f)(double, double), double arg) {
  Accumulator acc;
  for (const double t : samples.times)
    if (!std::isnan(t)) acc.add(f(t, arg));
  return {acc.mean(), acc.stderr_mean(), acc.count()};
}

}  // namespace

ValueStats laplace_stats(const PassageSamples& samples, double lambda) {
  return stats_over_decided(
      samples, [](double t, double l) { return std::exp(-l * t); }, lambda);
}

ValueStats time_stats(const PassageSamples& samples) {
  return stats_over_decided(
      samples, [](double t, double) { return t; }, 0.0);
}

}  // namespace ruinkit::mc
