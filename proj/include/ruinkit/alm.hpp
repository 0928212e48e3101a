#pragma once

#include <cstdint>
#include <vector>

#include "ruinkit/model.hpp"
#include "ruinkit/simulate.hpp"

namespace ruinkit::alm {

// Positive root K of  sigma^2 K^2 / 2 - mu K = lambda, i.e.
//   K = (mu + sqrt(mu^2 + 2 lambda sigma^2)) / sigma^2,
// so that E[exp(-lambda * T_a)] = exp(-K * a) for the first passage T_a of
// a + mu t + sigma W(t) through 0.
double passage_exponent(double mu, double sigma, double lambda);

// Expected discounted cost of keeping the fund alive forever: every time the
// fund hits 0 the sponsor injects enough to restart it at `restart`, paying
// b * exp(growth*t) * (exp(restart) - 1) at that moment, discounted at
// `discount`.  Closed form:
//   v = b (e^theta - 1) e^{-K a} / (1 - e^{-K theta}),  K at lambda = r - g.
CostEstimate perpetual_cost(const AlmScenario& s);

// Limit of the above as the restart level tends to 0: b e^{-K a} / K.
CostEstimate perpetual_cost_limit(const AlmScenario& s);

struct RestartEvent {
  double time;        // when the fund hit 0
  double injection;   // nominal cost paid at that moment
  double discounted;  // the same cost discounted back to time 0
};

struct AlmPath {
  std::vector<RestartEvent> events;
  double horizon = 0.0;
  double discounted_total = 0.0;  // running sum of events[i].discounted
};

// Optional observer of the simulated grid, for tests that want the raw path.
struct PathTrace {
  std::vector<double> times;
  std::vector<double> levels;
};

// One Euler path of the fund over [0, horizon] with bridge-corrected zero
// hits; at each hit the fund restarts at s.restart and the injection cost is
// recorded.  The grid re-anchors at the hit time.
AlmPath simulate_alm_path(const AlmScenario& s, double horizon, double dt,
                          RngStream& rng, PathTrace* trace = nullptr);

// Monte Carlo estimate of the perpetual cost.  horizon_override = 0 picks the
// horizon so the discount factor e^{-(r-g) h} is at most 1e-6; the matching
// tail bound (value * e^{-(r-g) h}) lands in diagnostics.truncation_bound.
CostEstimate simulate_perpetual_cost(const AlmScenario& s,
                                     const mc::McConfig& cfg, double dt,
                                     double horizon_override = 0.0);

// Monte Carlo estimate of the cost restricted to [0, t]; t = 0 is exactly 0.
CostEstimate simulate_finite_cost(const AlmScenario& s, double t,
                                  const mc::McConfig& cfg, double dt);

}  // namespace ruinkit::alm
