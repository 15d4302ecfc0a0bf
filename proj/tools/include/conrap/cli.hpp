#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conrap/dual_solver.hpp"

namespace conrap {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInfeasible = 1;  ///< infeasible instance or failed certificate
inline constexpr int kExitError = 2;

nlohmann::json report_to_json(const SolveReport& report);
nlohmann::json kkt_to_json(const KktResiduals& kkt);

/// Entry point of the `conrap` tool: generate | solve | verify | bench | profile.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace conrap
