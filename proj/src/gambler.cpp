#include "ruinkit/gambler.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ruinkit::gambler {

namespace {

constexpr double kFairBand = 1e-12;  // |p - 1/2| below this is treated as fair

void check_args(std::int64_t x, std::int64_t k, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("ruin probability needs 0 < p < 1, got p=" +
                            std::to_string(p));
  if (k < 1)
    throw std::domain_error("barrier must satisfy k >= 1, got k=" +
                            std::to_string(k));
  if (x < 0 || x > k)
    throw std::domain_error("start must satisfy 0 <= x <= k, got x=" +
                            std::to_string(x) + ", k=" + std::to_string(k));
}

}  // namespace

double ruin_bounded(std::int64_t x, std::int64_t k, double p) {
  check_args(x, k, p);
  if (x == 0) return 1.0;
  if (x == k) return 0.0;
  if (std::abs(p - 0.5) < kFairBand)
    return static_cast<double>(k - x) / static_cast<double>(k);

  // rho = ((q/p)^x - (q/p)^k) / (1 - (q/p)^k) with L = ln(q/p).
  const double L = std::log((1.0 - p) / p);
  if (L < 0.0) {
    // p > 1/2: all exponentials below are <= 1, no overflow possible.
    const double num = std::expm1(static_cast<double>(x) * L) -
                       std::expm1(static_cast<double>(k) * L);
    const double den = -std::expm1(static_cast<double>(k) * L);
    return num / den;
  }
  // p < 1/2: divide through by (q/p)^k so every exponent is negative.
  const double num = std::expm1(-static_cast<double>(k - x) * L);
  const double den = std::expm1(-static_cast<double>(k) * L);
  return num / den;
}

double ruin_unbounded(std::int64_t x, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("ruin probability needs 0 < p < 1, got p=" +
                            std::to_string(p));
  if (x < 0)
    throw std::domain_error("start must satisfy x >= 0, got x=" +
                            std::to_string(x));
  if (p <= 0.5 + kFairBand) return 1.0;  // non-positive drift: ruin is certain
  return std::exp(static_cast<double>(x) * std::log((1.0 - p) / p));
}

std::vector<double> ruin_profile(std::int64_t k, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("ruin probability needs 0 < p < 1, got p=" +
                            std::to_string(p));
  if (k < 1)
    throw std::domain_error("barrier must satisfy k >= 1, got k=" +
                            std::to_string(k));

  std::vector<double> rho(static_cast<std::size_t>(k) + 1);
  rho.front() = 1.0;
  rho.back() = 0.0;
  const std::int64_t n = k - 1;  // interior unknowns rho(1..k-1)
  if (n == 0) return rho;

  // Interior equation j: -q*rho(j-1) + rho(j) - p*rho(j+1) = 0, with the
  // boundary values moved to the right-hand side.
  const double q = 1.0 - p;
  std::vector<double> diag(static_cast<std::size_t>(n), 1.0);
  std::vector<double> rhs(static_cast<std::size_t>(n), 0.0);
  rhs.front() = q;  // from rho(0) = 1

  // Thomas algorithm: forward elimination of the sub-diagonal (-q), then
  // back substitution against the super-diagonal (-p).
  for (std::int64_t j = 1; j < n; ++j) {
    const double w = -q / diag[static_cast<std::size_t>(j - 1)];
    diag[static_cast<std::size_t>(j)] -= w * (-p);
    rhs[static_cast<std::size_t>(j)] -= w * rhs[static_cast<std::size_t>(j - 1)];
  }
  rho[static_cast<std::size_t>(n)] =
      rhs[static_cast<std::size_t>(n - 1)] / diag[static_cast<std::size_t>(n - 1)];
  for (std::int64_t j = n - 1; j >= 1; --j) {
    rho[static_cast<std::size_t>(j)] =
        (rhs[static_cast<std::size_t>(j - 1)] +
         p * rho[static_cast<std::size_t>(j + 1)]) /
        diag[static_cast<std::size_t>(j - 1)];
  }
  return rho;
}

double ruin_difference_equation(std::int64_t x, std::int64_t k, double p) {
  check_args(x, k, p);
  if (x == 0) return 1.0;
  if (x == k) return 0.0;
  return ruin_profile(k, p)[static_cast<std::size_t>(x)];
}

}  // namespace ruinkit::gambler
