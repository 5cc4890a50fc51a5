#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tourney/audit.hpp"
#include "tourney/config.hpp"
#include "tourney/equilibrium.hpp"
#include "tourney/prizes.hpp"

namespace tourney {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kInvalidInput = 2, kNumericFailure = 3, kVerificationFailed = 4 };

nlohmann::json to_json(const EquilibriumSolution& sol);
nlohmann::json to_json(const PrizeDesignReport& report);
nlohmann::json to_json(const AuditReport& report);

/// Solves the scenario: optimal prizes when requested, then the equilibrium.
nlohmann::json cmd_solve(const ScenarioConfig& cfg);

/// Rank scores and the prize regime at the optimal (or given) threshold.
nlohmann::json cmd_prizes(const ScenarioConfig& cfg);

/// Best-response certification, Monte-Carlo versus quadrature prize
/// probabilities, finite-difference marginals and, optionally, the pay-scheme
/// bound battery. The "passed" field is false when any check fails.
nlohmann::json cmd_verify(const ScenarioConfig& cfg);

nlohmann::json cmd_audit(const PerformanceSample& sample, const AuditOptions& options);

/// Parses arguments (without the program name), runs the subcommand, and maps
/// errors to exit codes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tourney
