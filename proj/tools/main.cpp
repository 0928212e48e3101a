#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ruinkit/commands.hpp"

namespace {

using ruinkit::cli::AlmArgs;
using ruinkit::cli::McOpts;
using ruinkit::cli::ordered_json;
using ruinkit::cli::RuinArgs;
using ruinkit::cli::RunReport;
using ruinkit::cli::SweepArgs;
using ruinkit::cli::ValidateArgs;

ordered_json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  ordered_json cfg;
  try {
    in >> cfg;
  } catch (const std::exception& e) {
    throw std::runtime_error("config file " + path + " is not valid JSON: " +
                             e.what());
  }
  if (!cfg.is_object())
    throw std::runtime_error("config file " + path + " must hold a JSON object");
  return cfg;
}

// Options given on the command line win; the config file fills in the rest.
template <typename T>
void fill(const CLI::Option* opt, const ordered_json& cfg, const char* key,
          T& target) {
  if (opt->count() == 0 && cfg.contains(key)) {
    try {
      target = cfg.at(key).get<T>();
    } catch (const std::exception&) {
      throw std::runtime_error(std::string("config key '") + key +
                               "' has the wrong type");
    }
  }
}

template <typename T>
void fill(const CLI::Option* opt, const ordered_json& cfg, const char* key,
          std::optional<T>& target) {
  if (opt->count() == 0 && cfg.contains(key)) {
    try {
      target = cfg.at(key).get<T>();
    } catch (const std::exception&) {
      throw std::runtime_error(std::string("config key '") + key +
                               "' has the wrong type");
    }
  }
}

struct McCli {
  CLI::Option* with_mc = nullptr;
  CLI::Option* paths = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* workers = nullptr;
  CLI::Option* max_steps = nullptr;
  CLI::Option* config = nullptr;
  // Shared so copies of this handle keep pointing at the string CLI11 fills.
  std::shared_ptr<std::string> config_path = std::make_shared<std::string>();
};

McCli add_mc_options(CLI::App* cmd, McOpts& mc, bool* with_mc,
                     bool& json_out) {
  McCli h;
  cmd->add_flag("--json", json_out, "print the JSON report instead of text");
  if (with_mc)
    h.with_mc = cmd->add_flag("--with-mc", *with_mc,
                              "add a Monte Carlo estimate");
  h.paths = cmd->add_option("--paths", mc.paths, "Monte Carlo path count");
  h.seed = cmd->add_option("--seed", mc.seed, "RNG seed");
  h.workers = cmd->add_option("--workers", mc.workers,
                              "worker threads (0 = all cores)")
                  ->envname("RUINKIT_WORKERS");
  h.max_steps = cmd->add_option("--max-steps", mc.max_steps,
                                "per-path step cap (0 = automatic)");
  h.config = cmd->add_option("--config", *h.config_path,
                             "JSON file supplying defaults for these options");
  return h;
}

void fill_mc(const McCli& h, const ordered_json& cfg, McOpts& mc,
             bool* with_mc) {
  if (with_mc && h.with_mc) fill(h.with_mc, cfg, "with_mc", *with_mc);
  fill(h.paths, cfg, "paths", mc.paths);
  fill(h.seed, cfg, "seed", mc.seed);
  fill(h.workers, cfg, "workers", mc.workers);
  fill(h.max_steps, cfg, "max_steps", mc.max_steps);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reserve-ruin analytics: barrier walks, Wald bounds, and "
               "restart-funding costs"};
  app.set_version_flag("--version",
                       std::string(ruinkit::cli::kToolName) + " " +
                           ruinkit::cli::kToolVersion);
  bool json_out = false;
  app.add_flag("--json", json_out, "print the JSON report instead of text");
  app.require_subcommand(1);

  std::optional<RunReport> report;
  int exit_code = 0;

  // ---- ruin ----
  auto* ruin = app.add_subcommand("ruin", "ruin probabilities of reserve walks");
  ruin->require_subcommand(1);
  auto ruin_args = std::make_shared<RuinArgs>();
  for (const char* form : {"simple", "wald", "gaussian"}) {
    const std::string form_s = form;
    const char* blurb = form_s == "simple"
                            ? "unit-step walk with exact closed forms"
                            : (form_s == "wald"
                                   ? "general increments via the adjustment "
                                     "coefficient"
                                   : "Gaussian increments, explicit formulas");
    auto* cmd = ruin->add_subcommand(form, blurb);
    cmd->fallthrough();
    auto* x_opt = cmd->add_option("--x", ruin_args->x, "starting reserve");
    auto* k_opt = cmd->add_option("--k", ruin_args->k,
                                  "upper barrier (omit for the open walk)");
    CLI::Option* p_opt = nullptr;
    CLI::Option* dist_opt = nullptr;
    CLI::Option* mu_opt = nullptr;
    CLI::Option* sigma_opt = nullptr;
    if (form_s == "simple")
      p_opt = cmd->add_option("--p", ruin_args->p, "up-step probability");
    if (form_s == "wald")
      dist_opt = cmd->add_option(
          "--dist", ruin_args->dist,
          "increments: twopoint:<p> | gaussian:<mu>,<sigma> | "
          "cashflow:<spec>;<spec>");
    if (form_s == "gaussian") {
      mu_opt = cmd->add_option("--mu", ruin_args->mu, "increment mean");
      sigma_opt = cmd->add_option("--sigma", ruin_args->sigma,
                                  "increment standard deviation");
    }
    CLI::Option* diffeq_opt = nullptr;
    if (form_s == "simple")
      diffeq_opt = cmd->add_flag("--with-diffeq", ruin_args->with_diffeq,
                                 "add the difference-equation solve");
    auto* proxy_opt = cmd->add_option(
        "--proxy", ruin_args->proxy,
        "absorbing proxy barrier for open-walk Monte Carlo");
    auto mc_cli = add_mc_options(cmd, ruin_args->mc, &ruin_args->with_mc, json_out);

    cmd->callback([=, &report] {
      ruin_args->form = form_s;
      ordered_json cfg = ordered_json::object();
      if (mc_cli.config->count() > 0) cfg = load_config(*mc_cli.config_path);
      fill(x_opt, cfg, "x", ruin_args->x);
      fill(k_opt, cfg, "k", ruin_args->k);
      if (p_opt) fill(p_opt, cfg, "p", ruin_args->p);
      if (dist_opt) fill(dist_opt, cfg, "dist", ruin_args->dist);
      if (mu_opt) fill(mu_opt, cfg, "mu", ruin_args->mu);
      if (sigma_opt) fill(sigma_opt, cfg, "sigma", ruin_args->sigma);
      if (diffeq_opt) fill(diffeq_opt, cfg, "with_diffeq", ruin_args->with_diffeq);
      fill(proxy_opt, cfg, "proxy", ruin_args->proxy);
      fill_mc(mc_cli, cfg, ruin_args->mc, &ruin_args->with_mc);
      report = ruinkit::cli::cmd_ruin(*ruin_args);
    });
  }

  // ---- alm ----
  auto* almc = app.add_subcommand(
      "alm", "discounted cost of keeping a Brownian fund above zero");
  almc->require_subcommand(1);
  auto alm_args = std::make_shared<AlmArgs>();
  for (const char* form : {"cost", "limit", "simulate"}) {
    const std::string form_s = form;
    const char* blurb =
        form_s == "cost" ? "closed-form perpetual restart cost"
                         : (form_s == "limit"
                                ? "small-restart limit of the perpetual cost"
                                : "Monte Carlo restart cost (perpetual or to --t)");
    auto* cmd = almc->add_subcommand(form, blurb);
    cmd->fallthrough();
    auto* a_opt = cmd->add_option("--a", alm_args->a, "initial fund level");
    auto* b_opt = cmd->add_option("--b", alm_args->b, "liability scale at t=0");
    auto* mu_opt = cmd->add_option("--mu", alm_args->mu, "fund drift");
    auto* sigma_opt = cmd->add_option("--sigma", alm_args->sigma, "fund volatility");
    auto* growth_opt =
        cmd->add_option("--growth", alm_args->growth, "liability growth rate");
    auto* r_opt = cmd->add_option("--r", alm_args->r, "discount rate (> growth)");
    auto* theta_opt =
        cmd->add_option("--theta", alm_args->theta, "restart level after a hit");
    CLI::Option* t_opt = nullptr;
    if (form_s == "simulate")
      t_opt = cmd->add_option("--t", alm_args->t,
                              "finite horizon (omit for the perpetual target)");
    auto* dt_opt = cmd->add_option("--dt", alm_args->dt, "Euler step");
    bool* with_mc = form_s == "cost" ? &alm_args->with_mc : nullptr;
    auto mc_cli = add_mc_options(cmd, alm_args->mc, with_mc, json_out);

    cmd->callback([=, &report] {
      alm_args->form = form_s;
      if (form_s == "simulate") alm_args->with_mc = true;
      ordered_json cfg = ordered_json::object();
      if (mc_cli.config->count() > 0) cfg = load_config(*mc_cli.config_path);
      fill(a_opt, cfg, "a", alm_args->a);
      fill(b_opt, cfg, "b", alm_args->b);
      fill(mu_opt, cfg, "mu", alm_args->mu);
      fill(sigma_opt, cfg, "sigma", alm_args->sigma);
      fill(growth_opt, cfg, "growth", alm_args->growth);
      fill(r_opt, cfg, "r", alm_args->r);
      fill(theta_opt, cfg, "theta", alm_args->theta);
      if (t_opt) fill(t_opt, cfg, "t", alm_args->t);
      fill(dt_opt, cfg, "dt", alm_args->dt);
      fill_mc(mc_cli, cfg, alm_args->mc, with_mc);
      report = ruinkit::cli::cmd_alm(*alm_args);
    });
  }

  // ---- validate ----
  auto* val = app.add_subcommand(
      "validate", "cross-check closed forms against independent routes");
  val->fallthrough();
  auto val_args = std::make_shared<ValidateArgs>();
  {
    val->add_flag("--json", json_out, "print the JSON report instead of text");
    auto* quick_opt = val->add_flag("--quick", val_args->quick,
                                    "smaller Monte Carlo budgets");
    auto* seed_opt = val->add_option("--seed", val_args->seed, "RNG seed");
    auto* workers_opt = val->add_option("--workers", val_args->workers,
                                        "worker threads (0 = all cores)")
                            ->envname("RUINKIT_WORKERS");
    val->callback([=, &report, &exit_code] {
      (void)quick_opt;
      (void)seed_opt;
      (void)workers_opt;
      report = ruinkit::cli::cmd_validate(*val_args);
      exit_code = report->derived["passed"].get<bool>() ? 0 : 1;
    });
  }

  // ---- sweep ----
  auto* sweep = app.add_subcommand(
      "sweep", "vary one parameter over a grid and write a CSV");
  sweep->fallthrough();
  auto sweep_args = std::make_shared<SweepArgs>();
  {
    auto* target_opt =
        sweep->add_option("--target", sweep_args->target,
                          "ruin-simple | ruin-gaussian | alm-cost | alm-limit");
    auto* param_opt =
        sweep->add_option("--param", sweep_args->param, "parameter to vary");
    auto* values_opt = sweep->add_option("--values", sweep_args->values,
                                         "explicit grid values")
                           ->delimiter(',');
    auto* param2_opt = sweep->add_option("--param2", sweep_args->param2,
                                         "optional second parameter to vary");
    auto* values2_opt = sweep->add_option("--values2", sweep_args->values2,
                                          "grid values for --param2")
                            ->delimiter(',');
    auto from = std::make_shared<double>(0.0);
    auto to = std::make_shared<double>(0.0);
    auto count = std::make_shared<std::int64_t>(0);
    auto* from_opt = sweep->add_option("--from", *from, "grid start");
    auto* to_opt = sweep->add_option("--to", *to, "grid end");
    auto* count_opt =
        sweep->add_option("--count", *count, "grid size for --from/--to");
    auto* csv_opt = sweep->add_option("--csv", sweep_args->csv, "CSV output path");
    auto* x_opt = sweep->add_option("--x", sweep_args->x, "starting reserve");
    auto* k_opt = sweep->add_option("--k", sweep_args->k, "upper barrier");
    auto* p_opt = sweep->add_option("--p", sweep_args->p, "up-step probability");
    auto* mu_opt = sweep->add_option("--mu", sweep_args->mu, "drift / mean");
    auto* sigma_opt = sweep->add_option("--sigma", sweep_args->sigma, "volatility");
    auto* a_opt = sweep->add_option("--a", sweep_args->a, "initial fund level");
    auto* b_opt = sweep->add_option("--b", sweep_args->b, "liability scale");
    auto* growth_opt =
        sweep->add_option("--growth", sweep_args->growth, "liability growth");
    auto* r_opt = sweep->add_option("--r", sweep_args->r, "discount rate");
    auto* theta_opt = sweep->add_option("--theta", sweep_args->theta,
                                        "restart level");
    auto mc_cli = add_mc_options(sweep, sweep_args->mc, &sweep_args->with_mc, json_out);

    sweep->callback([=, &report] {
      ordered_json cfg = ordered_json::object();
      if (mc_cli.config->count() > 0) cfg = load_config(*mc_cli.config_path);
      fill(target_opt, cfg, "target", sweep_args->target);
      fill(param_opt, cfg, "param", sweep_args->param);
      fill(values_opt, cfg, "values", sweep_args->values);
      fill(param2_opt, cfg, "param2", sweep_args->param2);
      fill(values2_opt, cfg, "values2", sweep_args->values2);
      fill(csv_opt, cfg, "csv", sweep_args->csv);
      fill(x_opt, cfg, "x", sweep_args->x);
      fill(k_opt, cfg, "k", sweep_args->k);
      fill(p_opt, cfg, "p", sweep_args->p);
      fill(mu_opt, cfg, "mu", sweep_args->mu);
      fill(sigma_opt, cfg, "sigma", sweep_args->sigma);
      fill(a_opt, cfg, "a", sweep_args->a);
      fill(b_opt, cfg, "b", sweep_args->b);
      fill(growth_opt, cfg, "growth", sweep_args->growth);
      fill(r_opt, cfg, "r", sweep_args->r);
      fill(theta_opt, cfg, "theta", sweep_args->theta);
      fill_mc(mc_cli, cfg, sweep_args->mc, &sweep_args->with_mc);
      if (sweep_args->values.empty() && count_opt->count() > 0 && *count >= 2 &&
          from_opt->count() > 0 && to_opt->count() > 0) {
        for (std::int64_t i = 0; i < *count; ++i)
          sweep_args->values.push_back(
              *from + (*to - *from) * static_cast<double>(i) /
                          static_cast<double>(*count - 1));
      }
      report = ruinkit::cli::cmd_sweep(*sweep_args);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (report) {
    if (json_out)
      std::cout << report->to_json().dump(2) << "\n";
    else
      std::cout << report->to_text();
  }
  return exit_code;
}
