#include "tourney/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tourney/adapters.hpp"
#include "tourney/cardinal.hpp"
#include "tourney/dist_json.hpp"
#include "tourney/errors.hpp"
#include "tourney/figures.hpp"
#include "tourney/oracle.hpp"

namespace tourney {
namespace {

using nlohmann::json;

void write_text(const std::string& dir, const std::string& file, const std::string& text) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / file);
  if (!out) throw ConfigError("cannot write " + file + " under " + dir);
  out << text;
}

std::string payoff_csv(const PayoffCurve& curve) {
  std::ostringstream out;
  out.precision(12);
  out << "effort,payoff,gap,gap_error\n";
  for (std::size_t i = 0; i < curve.efforts.size(); ++i) {
    out << curve.efforts[i] << "," << curve.payoffs[i] << "," << curve.gaps[i] << "," << curve.gap_errors[i] << "\n";
  }
  return out.str();
}

MonteCarloOptions mc_options(const ScenarioConfig& cfg) {
  MonteCarloOptions mc;
  mc.draws = cfg.monte_carlo.draws;
  mc.seed = resolve_seed(cfg.monte_carlo.seed);
  mc.workers = cfg.monte_carlo.workers;
  return mc;
}

struct Solved {
  PrizeSchedule schedule;
  EquilibriumSolution solution;
  std::optional<PrizeDesignReport> report;
};

Solved solve(const ScenarioConfig& cfg) {
  const NoiseDistribution d = cfg.noise();
  const CostFunction c = cfg.cost();
  if (const std::optional<PrizeSchedule> v = cfg.schedule()) {
    EquilibriumSolution sol = cfg.threshold ? solve_at_threshold(d, *v, *cfg.threshold, c)
                                            : solve_design(d, *v, c);
    return {*v, std::move(sol), std::nullopt};
  }
  PrizeOptions options;
  options.threshold = cfg.threshold;
  PrizeDesign design = optimal_prizes(d, cfg.players, c, options);
  return {design.report.schedule, std::move(design.solution), std::move(design.report)};
}

}  // namespace

json to_json(const EquilibriumSolution& sol) {
  json out{{"threshold", sol.threshold},
           {"effort", sol.effort},
           {"standard", sol.standard},
           {"marginal_benefit", sol.marginal_benefit},
           {"pass_probability", sol.pass_probability},
           {"concavity_ok", sol.concavity_ok},
           {"warnings", sol.warnings}};
  if (sol.search) {
    json candidates = json::array();
    for (const auto& [t, g] : sol.search->candidates) candidates.push_back({{"mode", t}, {"g", g}});
    out["threshold_search"] = {{"candidates", candidates},
                               {"grid_threshold", sol.search->grid_threshold},
                               {"grid_marginal_benefit", sol.search->grid_marginal_benefit},
                               {"grid_step", sol.search->grid_step}};
  }
  return out;
}

json to_json(const PrizeDesignReport& report) {
  return {{"r_star", report.r_star},
          {"regime", to_string(report.regime)},
          {"schedule", std::vector<double>(report.schedule.prizes().begin(), report.schedule.prizes().end())},
          {"scores", report.scores},
          {"tie_set", report.tie_set},
          {"threshold", report.threshold}};
}

json to_json(const AuditReport& report) {
  json modes = json::array();
  for (const DensityMode& m : report.modes) modes.push_back({{"x", m.x}, {"density", m.density}});
  json out{{"observations", report.observations},
           {"bandwidth", report.bandwidth},
           {"modes", modes},
           {"modal_performance", report.modal_performance},
           {"modal_interval", {report.ci_low, report.ci_high}},
           {"note", report.note}};
  if (report.comparison) {
    out["standard"] = report.comparison->standard;
    out["recommendation"] = to_string(report.comparison->recommendation);
    out["pass_fraction"] = {{"value", report.comparison->pass_fraction.value},
                            {"standard_error", report.comparison->pass_fraction.standard_error}};
  }
  return out;
}

json cmd_solve(const ScenarioConfig& cfg) {
  const Solved s = solve(cfg);
  json out{{"distribution", distribution_to_json(cfg.noise())},
           {"players", cfg.players},
           {"cost", cfg.cost().describe()},
           {"schedule", std::vector<double>(s.schedule.prizes().begin(), s.schedule.prizes().end())},
           {"solution", to_json(s.solution)}};
  if (s.report) out["prize_design"] = to_json(*s.report);
  write_text(cfg.output_directory, "solve.json", out.dump(2) + "\n");
  return out;
}

json cmd_prizes(const ScenarioConfig& cfg) {
  const NoiseDistribution d = cfg.noise();
  double t = 0.0;
  if (cfg.threshold) {
    t = *cfg.threshold;
  } else {
    ThresholdOptions check;
    check.cross_validate = false;
    const SufficiencyResult suff = global_mode_sufficiency(d, cfg.players, check);
    if (!suff.holds) {
      throw SufficiencyViolated("B_1 does not peak at the global mode; pass an explicit threshold");
    }
    t = suff.global_mode;
  }
  json out = to_json(choose_prizes(d, cfg.players, t));
  write_text(cfg.output_directory, "prizes.json", out.dump(2) + "\n");
  return out;
}

json cmd_verify(const ScenarioConfig& cfg) {
  const NoiseDistribution d = cfg.noise();
  const Solved s = solve(cfg);
  const TournamentDesign design{s.solution.standard, s.schedule, cfg.cost()};
  const double rival = cfg.effort ? *cfg.effort : s.solution.effort;
  const MonteCarloOptions mc = mc_options(cfg);
  const int n = design.players();
  bool passed = true;

  const BestResponseReport br = verify_best_response(d, design, rival, cfg.monte_carlo.grid, mc);
  passed = passed && br.certified;
  json out{{"seed", *mc.seed},
           {"draws", mc.draws},
           {"standard", design.standard},
           {"rival_effort", rival},
           {"best_response",
            {{"gap", br.gap},
             {"gap_error", br.gap_error},
             {"grid_bias", br.grid_bias},
             {"best_effort", br.best_effort},
             {"certified", br.certified}}}};

  const SimulationReport sim = simulate_prize_probabilities(d, design, rival, rival, mc);
  json probs = json::array();
  for (int r = 1; r <= n; ++r) {
    const Estimate& e = sim.at_least[static_cast<std::size_t>(r - 1)];
    const double q = prize_probability(d, n, r, rival, rival, design.standard);
    const bool ok = std::abs(e.value - q) <= std::max(4.0 * e.standard_error, 1e-12);
    passed = passed && ok;
    probs.push_back({{"rank", r}, {"monte_carlo", e.value}, {"standard_error", e.standard_error},
                     {"quadrature", q}, {"agree", ok}});
  }
  out["prize_probabilities"] = probs;
  out["pass_fraction"] = {{"value", sim.pass_fraction.value}, {"standard_error", sim.pass_fraction.standard_error}};

  const MarginalCheck fd = finite_difference_marginals(d, design, rival, 1e-4);
  json marg = json::array();
  for (int r = 0; r < n; ++r) {
    const auto i = static_cast<std::size_t>(r);
    const bool ok = std::abs(fd.finite_difference[i] - fd.analytic[i]) <= 1e-3;
    passed = passed && ok;
    marg.push_back({{"rank", r + 1}, {"finite_difference", fd.finite_difference[i]},
                    {"analytic", fd.analytic[i]}, {"agree", ok}});
  }
  out["marginals"] = marg;

  if (cfg.check_bounds) {
    const std::vector<PayScheme> battery = random_scheme_battery(d, n, rival, cfg.schemes, *mc.seed);
    json rows = json::array();
    int violations = 0;
    double bound = 0.0;
    for (const PayScheme& w : battery) {
      const BoundCheck b = check_bound(d, w, rival, mc);
      bound = b.bound;
      violations += b.satisfied ? 0 : 1;
      rows.push_back({{"scheme", w.name}, {"estimate", b.estimate.value},
                      {"standard_error", b.estimate.standard_error}, {"satisfied", b.satisfied}});
    }
    passed = passed && violations == 0;
    out["bounds"] = {{"bound", bound}, {"violations", violations}, {"schemes", rows}};
  }
  out["passed"] = passed;
  write_text(cfg.output_directory, "verify.json", out.dump(2) + "\n");
  write_text(cfg.output_directory, "payoff_curve.csv", payoff_csv(br.curve));
  return out;
}

json cmd_audit(const PerformanceSample& sample, const AuditOptions& options) {
  return to_json(audit(sample, options));
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tournaments with a minimum performance standard"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> draws;
  std::optional<std::size_t> workers;
  std::optional<int> players;
  std::optional<double> threshold;
  std::optional<double> effort;
  std::optional<std::size_t> grid;
  std::string out_dir;
  bool bounds = false;

  auto scenario = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--players", players, "Override the number of players");
    sub->add_option("--threshold", threshold, "Fix the noise threshold t");
    sub->add_option("-o,--out", out_dir, "Output directory (overrides the config)");
  };
  auto monte_carlo = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Random seed (falls back to TOURNEY_SEED)");
    sub->add_option("--draws", draws, "Monte-Carlo draws");
    sub->add_option("--workers", workers, "Worker threads, 0 for all cores");
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "Optimal standard and equilibrium effort");
  scenario(solve_cmd);
  CLI::App* prizes_cmd = app.add_subcommand("prizes", "Rank scores and the optimal prize schedule");
  scenario(prizes_cmd);

  CLI::App* verify_cmd = app.add_subcommand("verify", "Monte-Carlo verification of a solved scenario");
  scenario(verify_cmd);
  monte_carlo(verify_cmd);
  verify_cmd->add_option("--effort", effort, "Rivals' effort to certify instead of the solved one");
  verify_cmd->add_option("--grid", grid, "Effort grid size");
  verify_cmd->add_flag("--bounds", bounds, "Run the pay-scheme bound battery");

  std::string which;
  CLI::App* figures_cmd = app.add_subcommand("figures", "Write figure panels as CSV and SVG");
  figures_cmd->add_option("which", which, "fig1 or fig2")->required()->check(CLI::IsMember({"fig1", "fig2"}));
  figures_cmd->add_option("-o,--out", out_dir, "Output directory")->default_val("figures");

  std::string sample_path;
  std::optional<double> standard;
  std::optional<double> bandwidth;
  int bootstrap = 1000;
  CLI::App* audit_cmd = app.add_subcommand("audit", "Compare a declared standard with modal performance");
  audit_cmd->add_option("--sample", sample_path, "CSV with header 'performance'")->required()->check(CLI::ExistingFile);
  audit_cmd->add_option("--standard", standard, "Declared standard");
  audit_cmd->add_option("--bandwidth", bandwidth, "Kernel bandwidth (Silverman by default)");
  audit_cmd->add_option("--bootstrap", bootstrap, "Bootstrap resamples")->default_val(1000);
  audit_cmd->add_option("--seed", seed, "Bootstrap seed (falls back to TOURNEY_SEED)");
  audit_cmd->add_option("-o,--out", out_dir, "Output directory");

  int n = 2;
  bool tullock_check = false;
  CLI::App* tullock_cmd = app.add_subcommand("tullock", "Optimal Tullock contest with a standard");
  tullock_cmd->add_option("-n,--players", n, "Players")->default_val(2);
  tullock_cmd->add_flag("--verify", tullock_check, "Certify the equilibrium by simulation");
  monte_carlo(tullock_cmd);

  std::string idea = "uniform";
  double idea_upper = 1.0;
  double idea_power = 1.0;
  CLI::App* fm_cmd = app.add_subcommand("fm", "Optimal standard of an innovation contest");
  fm_cmd->add_option("-n,--players", n, "Players")->default_val(2);
  fm_cmd->add_option("--idea", idea, "Idea distribution")
      ->check(CLI::IsMember({"uniform", "power", "inverse_exponential"}));
  fm_cmd->add_option("--upper", idea_upper, "Upper bound of the uniform or power distribution");
  fm_cmd->add_option("--power", idea_power, "Exponent a of H(x) = (x/upper)^a");

  double location = 0.0;
  std::string race_config;
  CLI::App* race_cmd = app.add_subcommand("race", "Optimal deadline of a patent race");
  race_cmd->add_option("-n,--players", n, "Players")->default_val(2);
  race_cmd->add_option("--effort", effort, "Equilibrium effort (defaults to the Tullock optimum)");
  race_cmd->add_option("--location", location, "Location of the Gumbel noise");
  race_cmd->add_option("-c,--config", race_config, "Scenario file whose distribution is used instead")
      ->check(CLI::ExistingFile);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    auto load = [&]() {
      ScenarioConfig cfg = load_config(config_path);
      if (players) cfg.players = *players;
      if (threshold) cfg.threshold = *threshold;
      if (!out_dir.empty()) cfg.output_directory = out_dir;
      if (seed) cfg.monte_carlo.seed = *seed;
      if (draws) cfg.monte_carlo.draws = *draws;
      if (workers) cfg.monte_carlo.workers = *workers;
      if (grid) cfg.monte_carlo.grid = *grid;
      if (effort) cfg.effort = *effort;
      if (bounds) cfg.check_bounds = true;
      return cfg;
    };

    if (*solve_cmd) {
      out << cmd_solve(load()).dump(2) << "\n";
    } else if (*prizes_cmd) {
      out << cmd_prizes(load()).dump(2) << "\n";
    } else if (*verify_cmd) {
      const json report = cmd_verify(load());
      out << report.dump(2) << "\n";
      if (!report["passed"].get<bool>()) return kVerificationFailed;
    } else if (*figures_cmd) {
      for (const std::string& path : write_figure(make_figure(which), out_dir)) out << path << "\n";
    } else if (*audit_cmd) {
      PerformanceSample sample = read_performance_csv(sample_path);
      sample.declared_standard = standard;
      AuditOptions options;
      options.bandwidth = bandwidth;
      options.bootstrap = bootstrap;
      options.seed = resolve_seed(seed);
      const json report = cmd_audit(sample, options);
      write_text(out_dir, "audit.json", report.dump(2) + "\n");
      out << report.dump(2) << "\n";
    } else if (*tullock_cmd) {
      const TullockOptimum opt = tullock_optimal(n);
      json report{{"players", n},
                  {"effort", opt.effort},
                  {"standard", opt.standard},
                  {"self_consistent_effort", tullock_self_consistent_effort(n)}};
      bool ok = true;
      if (tullock_check) {
        MonteCarloOptions mc;
        mc.seed = resolve_seed(seed);
        if (draws) mc.draws = *draws;
        if (workers) mc.workers = *workers;
        const BestResponseReport br = tullock_verify(n, opt.effort, opt.standard, 200, mc);
        ok = br.certified;
        report["best_response"] = {{"gap", br.gap}, {"gap_error", br.gap_error},
                                   {"grid_bias", br.grid_bias}, {"certified", br.certified}};
      }
      out << report.dump(2) << "\n";
      if (!ok) return kVerificationFailed;
    } else if (*fm_cmd) {
      IdeaDistribution h;
      if (idea == "inverse_exponential") {
        h.cdf = [](double x) { return x <= 0.0 ? 0.0 : std::exp(-1.0 / x); };
      } else {
        if (!(idea_upper > 0.0)) throw InvalidInput("fm: upper must be positive");
        const double a = idea == "uniform" ? 1.0 : idea_power;
        if (!(a > 0.0)) throw InvalidInput("fm: power must be positive");
        h.upper = idea_upper;
        h.cdf = [=](double x) { return std::pow(std::clamp(x / idea_upper, 0.0, 1.0), a); };
      }
      out << json{{"players", n}, {"idea", idea}, {"effort", tullock_optimal(n).effort},
                  {"standard", fm_optimal_standard(h, n)}}.dump(2)
          << "\n";
    } else if (*race_cmd) {
      const NoiseDistribution d = race_config.empty() ? NoiseDistribution::gumbel(location, 1.0)
                                                      : load_config(race_config).noise();
      const double e = effort ? *effort : tullock_optimal(n).effort;
      out << json{{"players", n}, {"effort", e}, {"mode", find_modes(d).global_mode},
                  {"deadline", patent_race_deadline(d, e)}}.dump(2)
          << "\n";
    }
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const NumericFailure& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumericFailure;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kOk;
}

}  // namespace tourney
