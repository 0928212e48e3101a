#include "ruinkit/model.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ruinkit {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void fail_domain(const std::string& msg) {
  throw std::domain_error(msg);
}

// --- per-variant kernels, shared by the top-level visitors ---

double mgf_of(const TwoPoint& d, double t) {
  return d.p * std::exp(t) + d.q() * std::exp(-t);
}
double mgf_of(const Gaussian& d, double t) {
  return std::exp(t * d.mu + 0.5 * t * t * d.sigma * d.sigma);
}
double dmgf_of(const TwoPoint& d, double t) {
  return d.p * std::exp(t) - d.q() * std::exp(-t);
}
double dmgf_of(const Gaussian& d, double t) {
  return (d.mu + t * d.sigma * d.sigma) * mgf_of(d, t);
}
double mean_of(const TwoPoint& d) { return 2.0 * d.p - 1.0; }
double mean_of(const Gaussian& d) { return d.mu; }
double var_of(const TwoPoint& d) { return 4.0 * d.p * d.q(); }
double var_of(const Gaussian& d) { return d.sigma * d.sigma; }
double sample_of(const TwoPoint& d, RngStream& rng) {
  return rng.uniform01() < d.p ? 1.0 : -1.0;
}
double sample_of(const Gaussian& d, RngStream& rng) {
  return d.mu + d.sigma * rng.normal();
}

double mgf_component(const CashflowComponent& c, double t) {
  return std::visit([&](const auto& d) { return mgf_of(d, t); }, c);
}
double dmgf_component(const CashflowComponent& c, double t) {
  return std::visit([&](const auto& d) { return dmgf_of(d, t); }, c);
}
double mean_component(const CashflowComponent& c) {
  return std::visit([](const auto& d) { return mean_of(d); }, c);
}
double var_component(const CashflowComponent& c) {
  return std::visit([](const auto& d) { return var_of(d); }, c);
}
double sample_component(const CashflowComponent& c, RngStream& rng) {
  return std::visit([&](const auto& d) { return sample_of(d, rng); }, c);
}

std::string describe_component(const CashflowComponent& c) {
  if (const auto* tp = std::get_if<TwoPoint>(&c))
    return "twopoint:" + fmt_double(tp->p);
  const auto& g = std::get<Gaussian>(c);
  return "gaussian:" + fmt_double(g.mu) + "," + fmt_double(g.sigma);
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("could not parse " + what + " from '" + text + "'");
  }
  if (pos != text.size())
    throw std::invalid_argument("trailing characters after " + what + " in '" + text + "'");
  return v;
}

CashflowComponent parse_component(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("distribution '" + text + "' is missing a ':'");
  const std::string kind = text.substr(0, colon);
  const std::string args = text.substr(colon + 1);
  if (kind == "twopoint") return TwoPoint(parse_number(args, "p"));
  if (kind == "gaussian") {
    const auto comma = args.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("gaussian needs '<mu>,<sigma>', got '" + args + "'");
    return Gaussian(parse_number(args.substr(0, comma), "mu"),
                    parse_number(args.substr(comma + 1), "sigma"));
  }
  throw std::invalid_argument("unknown distribution kind '" + kind + "'");
}

}  // namespace

TwoPoint::TwoPoint(double p_) : p(p_) {
  if (!(p > 0.0 && p < 1.0))
    fail_domain("TwoPoint requires 0 < p < 1, got p=" + fmt_double(p));
}

Gaussian::Gaussian(double mu_, double sigma_) : mu(mu_), sigma(sigma_) {
  if (!(sigma > 0.0))
    fail_domain("Gaussian requires sigma > 0, got sigma=" + fmt_double(sigma));
  if (!std::isfinite(mu)) fail_domain("Gaussian requires finite mu");
}

Cashflow::Cashflow(CashflowComponent contribution_, CashflowComponent benefit_)
    : contribution(std::move(contribution_)), benefit(std::move(benefit_)) {}

double mgf(const IncrementDistribution& d, double theta) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Cashflow>) {
          // X = contribution - benefit, independent components.
          return mgf_component(v.contribution, theta) *
                 mgf_component(v.benefit, -theta);
        } else {
          return mgf_of(v, theta);
        }
      },
      d);
}

double mgf_derivative(const IncrementDistribution& d, double theta) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Cashflow>) {
          return dmgf_component(v.contribution, theta) *
                     mgf_component(v.benefit, -theta) -
                 mgf_component(v.contribution, theta) *
                     dmgf_component(v.benefit, -theta);
        } else {
          return dmgf_of(v, theta);
        }
      },
      d);
}

double mean(const IncrementDistribution& d) {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Cashflow>) {
          return mean_component(v.contribution) - mean_component(v.benefit);
        } else {
          return mean_of(v);
        }
      },
      d);
}

double variance(const IncrementDistribution& d) {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Cashflow>) {
          return var_component(v.contribution) + var_component(v.benefit);
        } else {
          return var_of(v);
        }
      },
      d);
}

double sample(const IncrementDistribution& d, RngStream& rng) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Cashflow>) {
          // Fixed draw order keeps results reproducible.
          const double in = sample_component(v.contribution, rng);
          const double out = sample_component(v.benefit, rng);
          return in - out;
        } else {
          return sample_of(v, rng);
        }
      },
      d);
}

bool is_two_point(const IncrementDistribution& d) {
  return std::holds_alternative<TwoPoint>(d);
}

std::string describe(const IncrementDistribution& d) {
  if (const auto* cf = std::get_if<Cashflow>(&d))
    return "cashflow:" + describe_component(cf->contribution) + ";" +
           describe_component(cf->benefit);
  if (const auto* tp = std::get_if<TwoPoint>(&d))
    return describe_component(CashflowComponent(*tp));
  return describe_component(CashflowComponent(std::get<Gaussian>(d)));
}

IncrementDistribution parse_distribution(const std::string& text) {
  if (text.rfind("cashflow:", 0) == 0) {
    const std::string rest = text.substr(9);
    const auto semi = rest.find(';');
    if (semi == std::string::npos)
      throw std::invalid_argument(
          "cashflow needs '<contribution>;<benefit>', got '" + rest + "'");
    return Cashflow(parse_component(rest.substr(0, semi)),
                    parse_component(rest.substr(semi + 1)));
  }
  const CashflowComponent c = parse_component(text);
  if (const auto* tp = std::get_if<TwoPoint>(&c)) return *tp;
  return std::get<Gaussian>(c);
}

WalkScenario::WalkScenario(double x_, std::optional<double> barrier_,
                           IncrementDistribution increments_)
    : x(x_), barrier(barrier_), increments(std::move(increments_)) {
  if (!(x >= 0.0) || !std::isfinite(x))
    fail_domain("WalkScenario requires x >= 0, got x=" + fmt_double(x));
  if (barrier) {
    if (!(*barrier > 0.0) || !std::isfinite(*barrier))
      fail_domain("WalkScenario requires barrier > 0, got k=" + fmt_double(*barrier));
    if (!(x <= *barrier))
      fail_domain("WalkScenario requires x <= barrier, got x=" + fmt_double(x) +
                  ", k=" + fmt_double(*barrier));
  }
  if (is_two_point(increments)) {
    // Unit steps only ever visit integer offsets from x; forcing integer
    // coordinates makes absorption exact instead of accidental.
    if (std::floor(x) != x)
      fail_domain("two-point walks need integer x, got x=" + fmt_double(x));
    if (barrier && std::floor(*barrier) != *barrier)
      fail_domain("two-point walks need integer barrier, got k=" + fmt_double(*barrier));
  }
}

AlmScenario::AlmScenario(double a_, double b_, double mu_, double sigma_,
                         double growth_, double discount_, double restart_)
    : a(a_), b(b_), mu(mu_), sigma(sigma_), growth(growth_),
      discount(discount_), restart(restart_) {
  if (!(a > 0.0)) fail_domain("AlmScenario requires a > 0, got a=" + fmt_double(a));
  if (!(b > 0.0)) fail_domain("AlmScenario requires b > 0, got b=" + fmt_double(b));
  if (!(sigma > 0.0))
    fail_domain("AlmScenario requires sigma > 0, got sigma=" + fmt_double(sigma));
  if (!(restart > 0.0))
    fail_domain("AlmScenario requires restart level > 0, got theta=" +
                fmt_double(restart));
  if (!(discount > growth))
    fail_domain("AlmScenario requires discount > growth, got r=" +
                fmt_double(discount) + ", growth=" + fmt_double(growth));
  if (!std::isfinite(mu)) fail_domain("AlmScenario requires finite mu");
}

std::optional<std::string> AlmScenario::condition_warning() const {
  const double lhs = a * b * growth + mu * sigma;
  if (lhs > 0.0) return std::nullopt;
  std::ostringstream os;
  os << "model condition a*b*growth + mu*sigma > 0 does not hold (value="
     << lhs << "); reported for reference, not enforced";
  return os.str();
}

const char* method_name(Method m) {
  switch (m) {
    case Method::ClosedForm: return "closed_form";
    case Method::WaldApprox: return "wald_approx";
    case Method::DifferenceEquation: return "difference_equation";
    case Method::MonteCarlo: return "monte_carlo";
  }
  return "unknown";
}

RuinEstimate RuinEstimate::deterministic(double value, Method method) {
  RuinEstimate e;
  e.value = value;
  e.method = method;
  e.ci95 = {value, value};
  return e;
}

CostEstimate CostEstimate::deterministic(double value, Method method,
                                         std::optional<double> horizon) {
  CostEstimate e;
  e.value = value;
  e.method = method;
  e.ci95 = {value, value};
  e.horizon = horizon;
  return e;
}

}  // namespace ruinkit
