#include "ruinkit/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "ruinkit/alm.hpp"
#include "ruinkit/gambler.hpp"
#include "ruinkit/simulate.hpp"
#include "ruinkit/wald.hpp"

namespace ruinkit::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename T>
T require(const std::optional<T>& opt, const char* flag, const char* where) {
  if (!opt)
    throw std::invalid_argument(std::string(where) + " requires " + flag +
                                " (flag or config)");
  return *opt;
}

std::int64_t as_step_int(double v, const char* name) {
  if (std::floor(v) != v || std::abs(v) > 9e15)
    throw std::domain_error(std::string(name) +
                            " must be an integer for unit-step walks, got " +
                            format_g17(v));
  return static_cast<std::int64_t>(v);
}

mc::McConfig make_config(const McOpts& mc) {
  mc::McConfig cfg;
  cfg.n_paths = mc.paths;
  cfg.seed = mc.seed;
  cfg.max_steps = mc.max_steps;
  cfg.workers = mc.workers;
  return cfg;
}

void echo_mc(ordered_json& sc, const RuinArgs& a) {
  sc["with_mc"] = a.with_mc;
  if (a.form == "simple") sc["with_diffeq"] = a.with_diffeq;
  if (a.proxy) sc["proxy"] = *a.proxy;
  sc["paths"] = a.mc.paths;
  sc["seed"] = a.mc.seed;
  sc["max_steps"] = a.mc.max_steps;
}

// Proxy barrier for barrier-free Monte Carlo: far enough above x that the
// truncation bias bound exp(theta*proxy) is ~e^-30 of exp(theta*x).
double default_proxy(double x, const IncrementDistribution& d) {
  const auto root = wald::solve_adjustment(d);
  if (const auto* ac = std::get_if<wald::AdjustmentCoefficient>(&root);
      ac != nullptr && ac->theta < 0.0)
    return x + 30.0 / -ac->theta;
  return x + 1.0;  // non-positive drift: the MC front end never runs paths
}

void record_adjustment(ordered_json& derived, const IncrementDistribution& d) {
  const auto root = wald::solve_adjustment(d);
  if (const auto* ac = std::get_if<wald::AdjustmentCoefficient>(&root)) {
    derived["adjustment_theta"] = ac->theta;
    derived["adjustment_residual"] = ac->residual;
    derived["adjustment_iterations"] = ac->iterations;
  } else if (std::holds_alternative<wald::ZeroMean>(root)) {
    derived["adjustment_zero_mean"] = true;
  } else {
    derived["adjustment_no_root"] = true;
  }
}

void run_walk_mc(RunReport& rep, const RuinArgs& args,
                 const IncrementDistribution& d) {
  const mc::McConfig cfg = make_config(args.mc);
  if (args.k) {
    const WalkScenario s(args.x, *args.k, d);
    rep.results.push_back({"ruin_probability", mc::mc_ruin_bounded(s, cfg)});
  } else {
    const WalkScenario s(args.x, std::nullopt, d);
    const double proxy = args.proxy ? *args.proxy : default_proxy(args.x, d);
    rep.results.push_back(
        {"ruin_probability", mc::mc_ruin_unbounded(s, cfg, proxy)});
  }
  // Bubble estimate-level warnings up where a human will see them.
  const auto& est = std::get<RuinEstimate>(rep.results.back().estimate);
  for (const auto& w : est.diagnostics.warnings) rep.warnings.push_back(w);
}

}  // namespace

RunReport cmd_ruin(const RuinArgs& args) {
  const auto start = Clock::now();
  RunReport rep;
  rep.command = "ruin " + args.form;
  rep.seed = args.mc.seed;
  rep.workers = mc::resolve_workers(args.mc.workers);

  ordered_json& sc = rep.scenario;
  sc["x"] = args.x;
  if (args.k) sc["k"] = *args.k;

  if (args.form == "simple") {
    const double p = require(args.p, "--p", "ruin simple");
    sc["p"] = p;
    echo_mc(sc, args);
    const std::int64_t x = as_step_int(args.x, "x");
    if (args.k) {
      const std::int64_t k = as_step_int(*args.k, "k");
      rep.results.push_back(
          {"ruin_probability",
           RuinEstimate::deterministic(gambler::ruin_bounded(x, k, p),
                                       Method::ClosedForm)});
      if (args.with_diffeq)
        rep.results.push_back(
            {"ruin_probability",
             RuinEstimate::deterministic(
                 gambler::ruin_difference_equation(x, k, p),
                 Method::DifferenceEquation)});
    } else {
      rep.results.push_back(
          {"ruin_probability",
           RuinEstimate::deterministic(gambler::ruin_unbounded(x, p),
                                       Method::ClosedForm)});
      if (args.with_diffeq)
        rep.warnings.push_back(
            "difference equation needs an upper barrier; skipped");
    }
    if (args.with_mc) run_walk_mc(rep, args, TwoPoint(p));

  } else if (args.form == "wald") {
    const std::string spec = require(args.dist, "--dist", "ruin wald");
    sc["dist"] = spec;
    echo_mc(sc, args);
    const IncrementDistribution d = parse_distribution(spec);
    record_adjustment(rep.derived, d);
    const double value = args.k ? wald::ruin_wald_bounded(args.x, *args.k, d)
                                : wald::ruin_wald_unbounded(args.x, d);
    rep.results.push_back(
        {"ruin_probability",
         RuinEstimate::deterministic(value, Method::WaldApprox)});
    if (args.with_mc) run_walk_mc(rep, args, d);

  } else if (args.form == "gaussian") {
    const double mu = require(args.mu, "--mu", "ruin gaussian");
    const double sigma = require(args.sigma, "--sigma", "ruin gaussian");
    sc["mu"] = mu;
    sc["sigma"] = sigma;
    echo_mc(sc, args);
    const Gaussian g(mu, sigma);
    record_adjustment(rep.derived, IncrementDistribution(g));
    const double value = args.k
                             ? wald::ruin_gaussian_bounded(args.x, *args.k, mu, sigma)
                             : wald::ruin_gaussian_unbounded(args.x, mu, sigma);
    rep.results.push_back(
        {"ruin_probability",
         RuinEstimate::deterministic(value, Method::WaldApprox)});
    if (args.with_mc) run_walk_mc(rep, args, g);

  } else {
    throw std::invalid_argument("unknown ruin form '" + args.form +
                                "' (expected simple, wald, or gaussian)");
  }

  rep.wall_time_s = seconds_since(start);
  return rep;
}

RunReport cmd_alm(const AlmArgs& args) {
  const auto start = Clock::now();
  RunReport rep;
  rep.command = "alm " + args.form;
  rep.seed = args.mc.seed;
  rep.workers = mc::resolve_workers(args.mc.workers);

  const bool needs_theta = args.form != "limit";
  const double theta =
      needs_theta ? require(args.theta, "--theta", "this alm form")
                  : args.theta.value_or(1.0);
  const AlmScenario s(args.a, args.b, args.mu, args.sigma, args.growth, args.r,
                      theta);
  if (const auto warning = s.condition_warning()) rep.warnings.push_back(*warning);

  ordered_json& sc = rep.scenario;
  sc["a"] = args.a;
  sc["b"] = args.b;
  sc["mu"] = args.mu;
  sc["sigma"] = args.sigma;
  sc["growth"] = args.growth;
  sc["r"] = args.r;
  if (args.theta) sc["theta"] = *args.theta;
  if (args.t) sc["t"] = *args.t;
  sc["with_mc"] = args.with_mc;
  sc["dt"] = args.dt;
  sc["paths"] = args.mc.paths;
  sc["seed"] = args.mc.seed;

  rep.derived["passage_exponent"] =
      alm::passage_exponent(s.mu, s.sigma, s.rate_gap());

  const mc::McConfig cfg = make_config(args.mc);
  if (args.form == "cost") {
    rep.results.push_back({"perpetual_cost", alm::perpetual_cost(s)});
    if (args.with_mc) {
      rep.derived["mc_horizon"] = -std::log(1e-6) / s.rate_gap();
      rep.results.push_back(
          {"perpetual_cost", alm::simulate_perpetual_cost(s, cfg, args.dt)});
    }
  } else if (args.form == "limit") {
    rep.results.push_back(
        {"perpetual_cost_limit", alm::perpetual_cost_limit(s)});
  } else if (args.form == "simulate") {
    rep.results.push_back({"perpetual_cost", alm::perpetual_cost(s)});
    if (args.t) {
      if (!(*args.t >= 0.0))
        throw std::domain_error("--t must be >= 0, got " + format_g17(*args.t));
      rep.results.push_back(
          {"finite_cost", alm::simulate_finite_cost(s, *args.t, cfg, args.dt)});
    } else {
      rep.derived["mc_horizon"] = -std::log(1e-6) / s.rate_gap();
      rep.results.push_back(
          {"perpetual_cost", alm::simulate_perpetual_cost(s, cfg, args.dt)});
    }
  } else {
    throw std::invalid_argument("unknown alm form '" + args.form +
                                "' (expected cost, limit, or simulate)");
  }

  rep.wall_time_s = seconds_since(start);
  return rep;
}

RunReport cmd_validate(const ValidateArgs& args) {
  const auto start = Clock::now();
  RunReport rep;
  rep.command = "validate";
  rep.seed = args.seed;
  rep.workers = mc::resolve_workers(args.workers);
  rep.scenario["quick"] = args.quick;
  rep.scenario["seed"] = args.seed;

  ValidationOptions opts;
  opts.quick = args.quick;
  opts.seed = args.seed;
  opts.workers = args.workers;
  const auto checks = run_validation(opts);

  bool all_passed = true;
  ordered_json rows = ordered_json::array();
  for (const auto& c : checks) {
    all_passed = all_passed && c.passed;
    rows.push_back({{"name", c.name},
                    {"passed", c.passed},
                    {"measured", c.measured},
                    {"tolerance", c.tolerance},
                    {"detail", c.detail}});
    if (!c.passed)
      rep.warnings.push_back("check failed: " + c.name);
  }
  rep.derived["checks"] = std::move(rows);
  rep.derived["passed"] = all_passed;

  rep.wall_time_s = seconds_since(start);
  return rep;
}

namespace {

struct SweepColumn {
  std::string name;
  std::vector<double> cells;
};

void require_param(const std::map<std::string, double*>& slots,
                   const std::string& param, const std::string& target) {
  if (slots.find(param) == slots.end()) {
    std::string known;
    for (const auto& [name, ptr] : slots) {
      if (!known.empty()) known += ", ";
      known += name;
    }
    throw std::invalid_argument("target " + target + " cannot sweep '" + param +
                                "' (one of: " + known + ")");
  }
}

}  // namespace

RunReport cmd_sweep(const SweepArgs& args) {
  const auto start = Clock::now();
  if (args.values.empty())
    throw std::invalid_argument("sweep needs a non-empty value grid "
                                "(--values or --from/--to/--count)");
  if (args.param2 && args.values2.empty())
    throw std::invalid_argument("sweep with --param2 needs --values2");
  if (args.csv.empty())
    throw std::invalid_argument("sweep requires --csv <output path>");

  RunReport rep;
  rep.command = "sweep";
  rep.seed = args.mc.seed;
  rep.workers = mc::resolve_workers(args.mc.workers);

  // Cross product of the one or two requested grid dimensions.
  struct Point {
    double v1;
    double v2;
  };
  std::vector<Point> grid;
  if (args.param2) {
    for (const double v1 : args.values)
      for (const double v2 : args.values2) grid.push_back({v1, v2});
  } else {
    for (const double v1 : args.values) grid.push_back({v1, 0.0});
  }

  std::vector<SweepColumn> columns;
  const mc::McConfig base_cfg = make_config(args.mc);

  // A parameter that is being swept takes its values from the grid; only the
  // parameters that stay fixed need a base value.
  const auto swept = [&](const char* name) {
    return args.param == name || (args.param2 && *args.param2 == name);
  };
  const auto need = [&](const std::optional<double>& o, const char* flag,
                        const char* name) {
    return swept(name) ? o.value_or(0.0) : require(o, flag, "this sweep target");
  };

  if (args.target == "ruin-simple" || args.target == "ruin-gaussian") {
    double x = need(args.x, "--x", "x");
    double k = args.k.value_or(0.0);  // 0 marks the open walk
    const bool simple = args.target == "ruin-simple";
    double p = 0.0, mu = 0.0, sigma = 0.0;
    std::map<std::string, double*> slots{{"x", &x}, {"k", &k}};
    if (simple) {
      p = need(args.p, "--p", "p");
      slots["p"] = &p;
    } else {
      mu = need(args.mu, "--mu", "mu");
      sigma = need(args.sigma, "--sigma", "sigma");
      slots["mu"] = &mu;
      slots["sigma"] = &sigma;
    }
    require_param(slots, args.param, args.target);
    if (args.param2) require_param(slots, *args.param2, args.target);
    const bool sweeps_k = args.param == "k" || (args.param2 && *args.param2 == "k");
    const bool bounded = args.k.has_value() || sweeps_k;

    columns.push_back({"closed_form", {}});
    if (args.with_mc) {
      columns.push_back({"monte_carlo", {}});
      columns.push_back({"mc_stderr", {}});
    }
    for (const Point& pt : grid) {
      *slots.at(args.param) = pt.v1;
      if (args.param2) *slots.at(*args.param2) = pt.v2;
      const IncrementDistribution d =
          simple ? IncrementDistribution(TwoPoint(p))
                 : IncrementDistribution(Gaussian(mu, sigma));
      double closed;
      if (simple)
        closed = bounded ? gambler::ruin_bounded(as_step_int(x, "x"),
                                                 as_step_int(k, "k"), p)
                         : gambler::ruin_unbounded(as_step_int(x, "x"), p);
      else
        closed = bounded ? wald::ruin_gaussian_bounded(x, k, mu, sigma)
                         : wald::ruin_gaussian_unbounded(x, mu, sigma);
      columns[0].cells.push_back(closed);
      if (args.with_mc) {
        RuinEstimate est;
        if (bounded) {
          est = mc::mc_ruin_bounded(WalkScenario(x, k, d), base_cfg);
        } else {
          const WalkScenario s(x, std::nullopt, d);
          est = mc::mc_ruin_unbounded(s, base_cfg, default_proxy(x, d));
        }
        columns[1].cells.push_back(est.value);
        columns[2].cells.push_back(est.stderr_value);
      }
    }

  } else if (args.target == "alm-cost" || args.target == "alm-limit") {
    const bool with_theta = args.target == "alm-cost";
    double a = need(args.a, "--a", "a");
    double b = need(args.b, "--b", "b");
    double mu = need(args.mu, "--mu", "mu");
    double sigma = need(args.sigma, "--sigma", "sigma");
    double growth = need(args.growth, "--growth", "growth");
    double r = need(args.r, "--r", "r");
    double theta = with_theta ? need(args.theta, "--theta", "theta")
                              : args.theta.value_or(1.0);
    std::map<std::string, double*> slots{{"a", &a},      {"b", &b},
                                         {"mu", &mu},    {"sigma", &sigma},
                                         {"growth", &growth}, {"r", &r}};
    if (with_theta) slots["theta"] = &theta;
    require_param(slots, args.param, args.target);
    if (args.param2) require_param(slots, *args.param2, args.target);

    columns.push_back(
        {with_theta ? "perpetual_cost" : "perpetual_cost_limit", {}});
    for (const Point& pt : grid) {
      *slots.at(args.param) = pt.v1;
      if (args.param2) *slots.at(*args.param2) = pt.v2;
      const AlmScenario s(a, b, mu, sigma, growth, r, theta);
      columns[0].cells.push_back(with_theta ? alm::perpetual_cost(s).value
                                            : alm::perpetual_cost_limit(s).value);
    }

  } else {
    throw std::invalid_argument(
        "unknown sweep target '" + args.target +
        "' (expected ruin-simple, ruin-gaussian, alm-cost, or alm-limit)");
  }

  std::ofstream csv(args.csv);
  if (!csv)
    throw std::runtime_error("cannot open CSV output file: " + args.csv);
  csv << args.param;
  if (args.param2) csv << "," << *args.param2;
  for (const auto& c : columns) csv << "," << c.name;
  csv << "\n";
  for (std::size_t row = 0; row < grid.size(); ++row) {
    csv << format_g17(grid[row].v1);
    if (args.param2) csv << "," << format_g17(grid[row].v2);
    for (const auto& c : columns) csv << "," << format_g17(c.cells[row]);
    csv << "\n";
  }
  csv.close();
  if (!csv)
    throw std::runtime_error("failed while writing CSV output: " + args.csv);

  ordered_json& sc = rep.scenario;
  sc["target"] = args.target;
  sc["param"] = args.param;
  sc["values"] = args.values;
  if (args.param2) {
    sc["param2"] = *args.param2;
    sc["values2"] = args.values2;
  }
  if (args.x) sc["x"] = *args.x;
  if (args.k) sc["k"] = *args.k;
  if (args.p) sc["p"] = *args.p;
  if (args.mu) sc["mu"] = *args.mu;
  if (args.sigma) sc["sigma"] = *args.sigma;
  if (args.a) sc["a"] = *args.a;
  if (args.b) sc["b"] = *args.b;
  if (args.growth) sc["growth"] = *args.growth;
  if (args.r) sc["r"] = *args.r;
  if (args.theta) sc["theta"] = *args.theta;
  sc["csv"] = args.csv;
  sc["with_mc"] = args.with_mc;
  sc["paths"] = args.mc.paths;
  sc["seed"] = args.mc.seed;
  sc["max_steps"] = args.mc.max_steps;

  ordered_json cols = ordered_json::array();
  cols.push_back(args.param);
  if (args.param2) cols.push_back(*args.param2);
  for (const auto& c : columns) cols.push_back(c.name);
  rep.derived["csv"] = args.csv;
  rep.derived["rows"] = grid.size();
  rep.derived["columns"] = std::move(cols);

  rep.wall_time_s = seconds_since(start);
  return rep;
}

}  // namespace ruinkit::cli
