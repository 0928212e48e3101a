#include "ruinkit/wald.hpp"

#include <cmath>
#include <string>

namespace ruinkit::wald {

namespace {

constexpr double kZeroMeanBand = 1e-12;

void check_bounded_args(double x, double k) {
  if (!(k > 0.0))
    throw std::domain_error("barrier must satisfy k > 0, got k=" + std::to_string(k));
  if (!(x >= 0.0 && x <= k))
    throw std::domain_error("start must satisfy 0 <= x <= k, got x=" +
                            std::to_string(x) + ", k=" + std::to_string(k));
}

// mgf(theta) - 1, the function whose nonzero root we chase.
double excess(const IncrementDistribution& d, double t) {
  return mgf(d, t) - 1.0;
}

}  // namespace

double barrier_ratio(double theta, double x, double k) {
  if (theta == 0.0) return (k - x) / k;
  if (theta > 0.0) {
    // Multiply the ratio through by e^{-theta(k-x)}: exponents stay <= 0.
    return std::expm1(-theta * (k - x)) / std::expm1(-theta * k);
  }
  // theta < 0: multiply through by e^{theta x} instead.
  const double num = std::expm1(theta * x) - std::expm1(theta * k);
  const double den = -std::expm1(theta * k);
  return num / den;
}

AdjustmentResult solve_adjustment(const IncrementDistribution& d) {
  const double m = mean(d);
  if (std::abs(m) <= kZeroMeanBand) return ZeroMean{};

  if (const auto* g = std::get_if<Gaussian>(&d)) {
    // log mgf = theta*mu + theta^2 sigma^2/2 vanishes at theta = -2mu/sigma^2.
    const double theta = -2.0 * g->mu / (g->sigma * g->sigma);
    return AdjustmentCoefficient{theta, std::abs(excess(d, theta)), 0};
  }

  // The root lies on the opposite side of zero from the mean, where the
  // convex mgf dips below 1 before climbing back through it.
  const double dir = m > 0.0 ? -1.0 : 1.0;
  const double var = variance(d);
  double hi = std::max(2.0 * std::abs(m) / var, 1e-8);  // Gaussian-matched scale
  int iters = 0;

  // excess(dir*h) ~ -|m| h + var h^2/2 is negative for small h, so walk hi
  // down until we are inside the dip, then double until we cross 1 again.
  while (excess(d, dir * hi) >= 0.0) {
    hi *= 0.5;
    if (++iters > 2000 || hi < 1e-300) return NoRoot{};
  }
  double lo = hi;
  while (excess(d, dir * hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++iters > 2000 || hi > 1e12) return NoRoot{};
  }

  // Bisect [lo, hi] down to a 1e-14 window, then one Newton polish.
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval at floating resolution
    if (excess(d, dir * mid) < 0.0)
      lo = mid;
    else
      hi = mid;
    ++iters;
  }
  double theta = dir * 0.5 * (lo + hi);
  const double slope = mgf_derivative(d, theta);
  if (slope != 0.0 && std::isfinite(slope)) {
    theta -= excess(d, theta) / slope;
    ++iters;
  }

  const double residual = std::abs(excess(d, theta));
  if (!(residual <= 1e-9) || !std::isfinite(theta)) return NoRoot{};
  return AdjustmentCoefficient{theta, residual, iters};
}

double ruin_wald_bounded(double x, double k, const IncrementDistribution& d) {
  check_bounded_args(x, k);
  if (x == 0.0) return 1.0;
  if (x == k) return 0.0;
  const AdjustmentResult r = solve_adjustment(d);
  if (std::holds_alternative<ZeroMean>(r)) return (k - x) / k;
  if (std::holds_alternative<NoRoot>(r))
    throw NoRootError("adjustment equation has no usable root for " + describe(d));
  return barrier_ratio(std::get<AdjustmentCoefficient>(r).theta, x, k);
}

double ruin_wald_unbounded(double x, const IncrementDistribution& d) {
  if (!(x >= 0.0))
    throw std::domain_error("start must satisfy x >= 0, got x=" + std::to_string(x));
  const AdjustmentResult r = solve_adjustment(d);
  if (std::holds_alternative<ZeroMean>(r)) return 1.0;
  if (std::holds_alternative<NoRoot>(r))
    throw NoRootError("adjustment equation has no usable root for " + describe(d));
  const double theta = std::get<AdjustmentCoefficient>(r).theta;
  // Negative root <=> positive drift: ruin probability e^{theta x} < 1.
  // Positive root <=> negative drift: the walk drifts into 0 almost surely.
  return theta < 0.0 ? std::exp(theta * x) : 1.0;
}

double ruin_gaussian_bounded(double x, double k, double mu, double sigma) {
  return ruin_wald_bounded(x, k, Gaussian(mu, sigma));
}

double ruin_gaussian_unbounded(double x, double mu, double sigma) {
  return ruin_wald_unbounded(x, Gaussian(mu, sigma));
}

}  // namespace ruinkit::wald
