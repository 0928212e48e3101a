#include "ruinkit/alm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ruinkit::alm {

namespace {

constexpr double kZ95 = 1.959963984540054;
constexpr double kTailTarget = 1e-6;  // discount factor left past the horizon

CostEstimate finish_cost(const mc::Accumulator& acc) {
  CostEstimate e;
  e.method = Method::MonteCarlo;
  e.value = acc.mean();
  e.stderr_value = acc.stderr_mean();
  e.ci95 = {std::max(0.0, e.value - kZ95 * e.stderr_value),
            e.value + kZ95 * e.stderr_value};
  e.n_paths = acc.count();
  return e;
}

}  // namespace

double passage_exponent(double mu, double sigma, double lambda) {
  if (!(sigma > 0.0))
    throw std::domain_error("passage exponent needs sigma > 0, got sigma=" +
                            std::to_string(sigma));
  if (!(lambda >= 0.0))
    throw std::domain_error("passage exponent needs lambda >= 0, got lambda=" +
                            std::to_string(lambda));
  const double disc = std::sqrt(mu * mu + 2.0 * lambda * sigma * sigma);
  // For mu < 0 the textbook form (mu + disc)/sigma^2 cancels; the rationalized
  // twin 2*lambda/(disc - mu) does not, and vice versa for mu >= 0.
  return mu < 0.0 ? 2.0 * lambda / (disc - mu) : (mu + disc) / (sigma * sigma);
}

CostEstimate perpetual_cost(const AlmScenario& s) {
  const double k = passage_exponent(s.mu, s.sigma, s.rate_gap());
  // v = b (e^theta - 1) e^{-K a} / (1 - e^{-K theta}), via expm1 throughout.
  const double value = s.b * std::expm1(s.restart) * std::exp(-k * s.a) /
                       (-std::expm1(-k * s.restart));
  return CostEstimate::deterministic(value, Method::ClosedForm, std::nullopt);
}

CostEstimate perpetual_cost_limit(const AlmScenario& s) {
  const double k = passage_exponent(s.mu, s.sigma, s.rate_gap());
  return CostEstimate::deterministic(s.b * std::exp(-k * s.a) / k,
                                     Method::ClosedForm, std::nullopt);
}

AlmPath simulate_alm_path(const AlmScenario& s, double horizon, double dt,
                          RngStream& rng, PathTrace* trace) {
  if (!(horizon > 0.0))
    throw std::domain_error("path horizon must be > 0, got " +
                            std::to_string(horizon));
  if (!(dt > 0.0))
    throw std::domain_error("path step must be > 0, got dt=" +
                            std::to_string(dt));

  AlmPath path;
  path.horizon = horizon;
  double y = s.a;
  double t = 0.0;
  if (trace) {
    trace->times.push_back(t);
    trace->levels.push_back(y);
  }

  const double edge = horizon * (1.0 - 1e-12);
  while (t < edge) {
    const double h = std::min(dt, horizon - t);
    const double y1 = y + s.mu * h + s.sigma * std::sqrt(h) * rng.normal();

    double hit = -1.0;
    if (y1 <= 0.0) {
      // Crossed on the grid; linear interpolation places the hit inside
      // (t, t+h].
      hit = t + h * y / (y - y1);
    } else {
      const double pc = mc::bridge_crossing_probability(y, y1, s.sigma * s.sigma * h);
      if (pc > 0.0 && rng.uniform01() < pc) hit = t + 0.5 * h;
    }

    if (hit >= 0.0) {
      // The liability has grown to b*e^{g*hit}; topping the fund up to the
      // restart level costs (e^{restart} - 1) times that, paid at `hit`.
      const double injection = s.b * std::exp(s.growth * hit) * std::expm1(s.restart);
      const double discounted = injection * std::exp(-s.discount * hit);
      path.events.push_back({hit, injection, discounted});
      path.discounted_total += discounted;
      y = s.restart;
      t = hit;  // the step grid re-anchors at the hit
    } else {
      y = y1;
      t += h;
    }
    if (trace) {
      trace->times.push_back(t);
      trace->levels.push_back(y);
    }
  }
  return path;
}

CostEstimate simulate_perpetual_cost(const AlmScenario& s,
                                     const mc::McConfig& cfg, double dt,
                                     double horizon_override) {
  cfg.validate();
  const double lambda = s.rate_gap();
  const double horizon = horizon_override > 0.0
                             ? horizon_override
                             : -std::log(kTailTarget) / lambda;

  const mc::Accumulator acc = mc::run_paths(
      cfg.n_paths, cfg.seed, cfg.workers,
      [&](std::int64_t, RngStream& rng, mc::Accumulator& a) {
        a.add(simulate_alm_path(s, horizon, dt, rng).discounted_total);
      });

  CostEstimate e = finish_cost(acc);
  e.horizon = std::nullopt;  // the target quantity is the perpetual cost
  // Injections past the horizon are discounted by at least e^{-lambda*h};
  // relative to the running mean that caps the truncation bias.
  e.diagnostics.truncation_bound = e.value * std::exp(-lambda * horizon);
  return e;
}

CostEstimate simulate_finite_cost(const AlmScenario& s, double t,
                                  const mc::McConfig& cfg, double dt) {
  cfg.validate();
  if (!(t >= 0.0))
    throw std::domain_error("finite-cost horizon must be >= 0, got t=" +
                            std::to_string(t));
  if (t == 0.0) {
    // No time, no restarts, no cost: exact, not estimated.
    CostEstimate e = CostEstimate::deterministic(0.0, Method::MonteCarlo, 0.0);
    e.n_paths = cfg.n_paths;
    return e;
  }

  const mc::Accumulator acc = mc::run_paths(
      cfg.n_paths, cfg.seed, cfg.workers,
      [&](std::int64_t, RngStream& rng, mc::Accumulator& a) {
        a.add(simulate_alm_path(s, t, dt, rng).discounted_total);
      });

  CostEstimate e = finish_cost(acc);
  e.horizon = t;
  return e;
}

}  // namespace ruinkit::alm
