#pragma once

#include <cstdint>
#include <vector>

namespace ruinkit::gambler {

// Outcome of one absorbed unit-step walk.
struct BarrierOutcome {
  bool ruined;         // true: hit 0, false: hit the barrier k
  std::int64_t steps;  // steps taken until absorption
};

// Probability that a unit-step walk (up w.p. p, down w.p. 1-p) started at x
// hits 0 before k.  Evaluated through expm1 in log space so it stays accurate
// near p = 1/2 and for barriers far beyond the overflow range of (q/p)^k.
double ruin_bounded(std::int64_t x, std::int64_t k, double p);

// Same walk with the upper barrier removed: (q/p)^x for p > 1/2, else 1.
double ruin_unbounded(std::int64_t x, double p);

// Independent route to ruin_bounded: solve the interior linear system
// rho(j) = p*rho(j+1) + (1-p)*rho(j-1) with rho(0)=1, rho(k)=0 by the Thomas
// tridiagonal algorithm.  Shares no formula with ruin_bounded on purpose.
double ruin_difference_equation(std::int64_t x, std::int64_t k, double p);

// Full profile rho(0..k) from the same solver; handy for sweeps and tests.
std::vector<double> ruin_profile(std::int64_t k, double p);

}  // namespace ruinkit::gambler
