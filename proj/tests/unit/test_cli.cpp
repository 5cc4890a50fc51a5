#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tourney/commands.hpp"
#include "tourney/figures.hpp"

using namespace tourney;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string scenario(const std::string& name, const json& doc) {
  fs::create_directories("cli_test");
  const std::string path = "cli_test/" + name + ".json";
  std::ofstream(path) << doc.dump();
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const json kExponential = {{"distribution", {{"family", "exponential"}, {"params", {{"rate", 1.0}}}}},
                           {"players", 2},
                           {"prizes", "optimal"},
                           {"cost", {{"kappa", 1.0}, {"beta", 2.0}}},
                           {"monte_carlo", {{"draws", 100000}, {"seed", 12}, {"grid", 80}}}};

}  // namespace

TEST_CASE("cli: solve") {
  const Run r = run({"solve", "-c", scenario("exp", kExponential)});
  REQUIRE(r.code == 0);
  const json out = json::parse(r.out);
  CHECK(out["solution"]["threshold"].get<double>() == 0.0);
  CHECK(out["solution"]["effort"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(out["prize_design"]["regime"] == "tie");

  json dfr = kExponential;
  dfr["distribution"] = {{"family", "erf_dfr"}};
  dfr["players"] = 3;
  const json fig2 = json::parse(run({"solve", "-c", scenario("dfr", dfr)}).out);
  CHECK(fig2["prize_design"]["regime"] == "EPS");
  CHECK(fig2["solution"]["pass_probability"].get<double>() == 1.0);
}

TEST_CASE("cli: validation errors exit with 2") {
  json bad = kExponential;
  bad["prizes"] = {0.5, 0.4};
  const Run r = run({"solve", "-c", scenario("bad", bad)});
  CHECK(r.code == 2);
  CHECK(r.err.find("budget invariant") != std::string::npos);

  json unknown = kExponential;
  unknown["colour"] = "red";
  CHECK(run({"solve", "-c", scenario("unknown", unknown)}).code == 2);
  CHECK(run({"solve"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
}

TEST_CASE("cli: numeric failures exit with 3") {
  json steep = kExponential;
  steep["distribution"] = {{"family", "normal"}, {"params", {{"mean", 0.0}, {"sd", 0.01}}}};
  steep["prizes"] = "wta";
  CHECK(run({"solve", "-c", scenario("steep", steep)}).code == 3);
}

TEST_CASE("cli: verify certifies the equilibrium and flags a wrong effort") {
  const std::string path = scenario("exp", kExponential);
  const Run ok = run({"verify", "-c", path});
  CHECK(ok.code == 0);
  CHECK(json::parse(ok.out)["passed"] == true);
  const Run wrong = run({"verify", "-c", path, "--effort", "0.8"});
  CHECK(wrong.code == 4);
  CHECK(json::parse(wrong.out)["best_response"]["gap"].get<double>() > 0.0);
}

TEST_CASE("cli: verify runs the pay-scheme battery") {
  json pareto = kExponential;
  pareto["distribution"] = {{"family", "pareto"}, {"params", {{"shape", 2.0}, {"scale", 1.0}}}};
  pareto["players"] = 3;
  // With kappa = 1 the winning chance is more convex than the cost and the
  // first-order point is not an equilibrium; kappa = 4 restores concavity.
  pareto["cost"]["kappa"] = 4.0;
  pareto["verify"] = {{"bounds", true}, {"schemes", 50}};
  pareto["monte_carlo"]["draws"] = 40000;
  const Run r = run({"verify", "-c", scenario("pareto", pareto)});
  CHECK(r.code == 0);
  const json out = json::parse(r.out);
  CHECK(out["bounds"]["violations"] == 0);
  CHECK(out["bounds"]["bound"].get<double>() == doctest::Approx(2.0 / 3.0));
  CHECK(out["bounds"]["schemes"].size() == 50);
}

TEST_CASE("cli: a seed is required for simulation") {
  json noseed = kExponential;
  noseed["monte_carlo"].erase("seed");
  const std::string path = scenario("noseed", noseed);
  unsetenv("TOURNEY_SEED");
  CHECK(run({"verify", "-c", path}).code == 2);
  setenv("TOURNEY_SEED", "5", 1);
  CHECK(run({"verify", "-c", path}).code == 0);
  unsetenv("TOURNEY_SEED");
}

TEST_CASE("cli: artifacts are reproducible") {
  const std::string path = scenario("exp", kExponential);
  REQUIRE(run({"verify", "-c", path, "-o", "cli_test/a"}).code == 0);
  REQUIRE(run({"verify", "-c", path, "-o", "cli_test/b", "--workers", "1"}).code == 0);
  CHECK(slurp("cli_test/a/verify.json") == slurp("cli_test/b/verify.json"));
  CHECK(slurp("cli_test/a/payoff_curve.csv") == slurp("cli_test/b/payoff_curve.csv"));
}

TEST_CASE("cli: figures") {
  const Run r = run({"figures", "fig2", "-o", "cli_test/fig"});
  REQUIRE(r.code == 0);
  const std::string csv = slurp("cli_test/fig/fig2_marginal_benefit.csv");
  CHECK(slurp("cli_test/fig/fig2_marginal_benefit.svg") == render_svg(csv, "fig2 marginal_benefit"));
  // Row t = 0: g(0; EPS) = f(0)/3 = 2/3 beats the other schedules.
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line) && (line[0] == '#' || line[0] == 't')) {
  }
  double t, wta, two, eps;
  char c;
  std::istringstream row(line);
  row >> t >> c >> wta >> c >> two >> c >> eps;
  CHECK(t == 0.0);
  CHECK(eps == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(eps > two);
  CHECK(two > wta);
}

TEST_CASE("cli: fig1 panels") {
  const Figure fig = make_figure("fig1");
  REQUIRE(fig.panels.size() == 4);
  const Panel& g = fig.panels[3];
  CHECK(g.columns.size() == 10);
  CHECK(g.comments.front() == "normalization red 1.65625");
  const auto& t = g.values[0];
  const auto& red_wta = g.values[1];
  const auto best = std::max_element(red_wta.begin(), red_wta.end()) - red_wta.begin();
  CHECK(std::abs(t[best] - 1.0) <= 1.75 * 2e-4);
}

TEST_CASE("cli: adapters") {
  const json t = json::parse(run({"tullock", "-n", "2"}).out);
  CHECK(t["effort"].get<double>() == doctest::Approx(0.283834).epsilon(1e-6));
  const json fm = json::parse(run({"fm", "-n", "2", "--idea", "uniform"}).out);
  CHECK(fm["standard"].get<double>() == doctest::Approx(0.02951).epsilon(1e-3));
  const json race = json::parse(run({"race", "-n", "2"}).out);
  CHECK(race["deadline"].get<double>() == doctest::Approx(3.5232).epsilon(1e-4));
}

TEST_CASE("cli: audit") {
  fs::create_directories("cli_test");
  {
    std::ofstream out("cli_test/sample.csv");
    out << "performance\n";
    for (int i = 0; i < 1000; ++i) out << std::sin(i * 12.9898) * 0.5 + std::cos(i * 78.233) * 0.5 << "\n";
  }
  const Run r = run({"audit", "--sample", "cli_test/sample.csv", "--standard", "-5", "--bootstrap", "50", "--seed", "1"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["recommendation"] == "raise");
  CHECK(run({"audit", "--sample", "cli_test/sample.csv", "--bootstrap", "20"}).code == 2);
}
