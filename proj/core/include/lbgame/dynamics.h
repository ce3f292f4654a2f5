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

#ifndef LBGAME_DYNAMICS_H_
#define LBGAME_DYNAMICS_H_

// Round-robin epsilon-Nash dynamics. Clients move one at a time in index
// order; a client adopts its capacity-proportional row only when the move is
// an epsilon-move. The run stops after a full pass with no accepted move.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lbgame/best_response.h"
#include "lbgame/game_core.h"

namespace lbgame {

struct TraceRecord {
  std::int64_t round = 0;  // 1-based step index
  int mover = 0;
  bool accepted = false;
  double cost_before = 0.0;
  double cost_after = 0.0;  // candidate cost, whether or not accepted
  double potential = 0.0;   // SystemPotential of the post-step state
  std::vector<double> load_ratios;
  std::vector<double> per_client_costs;

  bool operator==(const TraceRecord&) const = default;
};

struct EquilibriumReport {
  SystemState final_state;
  GameConfig config;
  std::int64_t rounds = 0;  // steps taken
  std::int64_t passes = 0;  // full round-robin passes started
  // Empty when epsilon = 0.
  std::optional<std::int64_t> theoretical_bound;
  bool converged = false;
  std::vector<TraceRecord> trace;
  // Filled in by AttachBestResponseGaps (oracle.h); empty otherwise. One grid
  // resolution per client.
  std::vector<double> best_response_gaps;
  std::vector<int> gap_grid_G;
};

// mu_max_i minus the load every other client places on server i.
ResidualRates ResidualRatesFor(const SystemState& state, int client);

struct StepResult {
  SystemState state;
  TraceRecord record;
};

StepResult Step(const SystemState& state, int client, const GameConfig& config,
                std::int64_t round = 1);

EquilibriumReport Run(const SystemState& initial, const GameConfig& config);

// ceil(m * alpha / epsilon * ln(m * C)), with the log term floored at 1.
// Saturates at INT64_MAX. Throws UnboundedFor when epsilon == 0.
std::int64_t ConvergenceBound(int num_players, double alpha, double epsilon,
                              double cost_upper_bound);

// Bound for a run of `config` from `initial`: alpha from SystemAlpha, C from
// config.cost_upper_bound or the largest initial client cost.
std::int64_t ConvergenceBoundFor(const SystemState& initial,
                                 const GameConfig& config);

// Throws InfeasibleInitial when the matrix violates stability.
StrategyMatrix InitialStrategy(std::span<const ServerSpec> servers,
                               std::span<const ClientSpec> clients,
                               InitialKind kind,
                               double stability_slack = kDefaultStabilitySlack);

SystemState MakeInitialState(std::vector<ServerSpec> servers,
                             std::vector<ClientSpec> clients,
                             const GameConfig& config);

}  // namespace lbgame

#endif  // LBGAME_DYNAMICS_H_
