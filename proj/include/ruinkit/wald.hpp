#pragma once

#include <stdexcept>
#include <variant>

#include "ruinkit/model.hpp"

namespace ruinkit::wald {

// Nonzero solution of E[exp(theta X)] = 1.  Its sign is opposite to the sign
// of E[X] because the mgf is strictly convex with mgf(0) = 1.
struct AdjustmentCoefficient {
  double theta;
  double residual;  // |mgf(theta) - 1| at the returned root
  int iterations;   // bisection + polish steps (0 for analytic roots)
};
struct ZeroMean {};  // |E[X]| below threshold: no nonzero root exists
struct NoRoot {};    // solver could not certify a root (unsupported input)

using AdjustmentResult = std::variant<AdjustmentCoefficient, ZeroMean, NoRoot>;

// Raised by the ruin evaluators when the adjustment equation has no usable
// root for the supplied distribution.
struct NoRootError : std::domain_error {
  using std::domain_error::domain_error;
};

AdjustmentResult solve_adjustment(const IncrementDistribution& d);

// Two-barrier ruin probability from the Wald martingale argument:
//   rho_k(x) ~ (1 - e^{theta (k-x)}) / (e^{-theta x} - e^{theta (k-x)}).
// Falls back to the driftless limit (k-x)/k on ZeroMean and throws
// NoRootError on NoRoot.
double ruin_wald_bounded(double x, double k, const IncrementDistribution& d);

// Barrier-free version: e^{theta x} when theta < 0 (positive drift), else 1.
double ruin_wald_unbounded(double x, const IncrementDistribution& d);

// Gaussian particularization.  theta = -2 mu / sigma^2 is exact, so these
// reproduce the generic Wald evaluators bit for bit on Gaussian increments.
double ruin_gaussian_bounded(double x, double k, double mu, double sigma);
double ruin_gaussian_unbounded(double x, double mu, double sigma);

// The two-barrier ratio above, evaluated stably via expm1 for either sign of
// theta; exposed so the Gaussian fast path shares the exact code path.
double barrier_ratio(double theta, double x, double k);

}  // namespace ruinkit::wald
