// Copyright 2026 The lbgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LBGAME_TOOLS_COMMANDS_H_
#define LBGAME_TOOLS_COMMANDS_H_

// Subcommands of the `lbgame` driver. Each Cmd* function returns the process
// exit code and writes diagnostics to `err`:
//   0  success
//   1  bad input: parse/validation/usage errors, oversized oracle grids
//   2  infeasible: InfeasibleLoad or InfeasibleInitial
//   3  run did not converge within max_rounds / the step bound

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lbgame/dynamics.h"
#include "lbgame/oracle.h"
#include "lbgame/scenario.h"

namespace lbgame::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 1,
  kExitInfeasible = 2,
  kExitNotConverged = 3,
};

// LB_STABILITY_SLACK if set and parseable, else kDefaultStabilitySlack.
double DefaultSlackFromEnv();

std::string TraceCsv(const EquilibriumReport& report);
std::string LoadRatioCsv(const EquilibriumReport& report);
// round, then one column per client cost after that step.
std::string CostsCsv(const EquilibriumReport& report);
std::string ReportJson(const EquilibriumReport& report);
std::string CertificateJson(const NashCertificate& certificate);

// Final state and config of a report written by ReportJson.
struct LoadedReport {
  SystemState final_state;
  GameConfig config;
  bool converged = false;
};
LoadedReport ParseReportJson(std::string_view text);

// Moves `client` entirely onto the stable server where its cost is highest.
SystemState PerturbToWorstServer(const SystemState& state, int client,
                                 double stability_slack);

int CmdRun(const std::filesystem::path& scenario_path,
           const std::filesystem::path& out_dir, std::ostream& out,
           std::ostream& err);
int CmdSweep(const std::filesystem::path& scenario_path,
             const std::vector<double>& epsilons,
             const std::filesystem::path& out_dir, std::ostream& out,
             std::ostream& err);
int CmdGen(const std::string& kind, int num_clients, int num_servers,
           std::uint64_t seed, const std::filesystem::path& out_file,
           std::ostream& out, std::ostream& err);
int CmdVerify(const std::filesystem::path& report_path, int grid_G,
              std::optional<int> perturb_client,
              std::optional<std::filesystem::path> out_file,
              std::ostream& out, std::ostream& err);

// Full command line, argv[0] included.
int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace lbgame::cli

#endif  // LBGAME_TOOLS_COMMANDS_H_
