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

#ifndef LBGAME_SCENARIO_H_
#define LBGAME_SCENARIO_H_

// Scenario documents (JSON) and seeded workload generators.
//
// Document layout:
//   {
//     "version": 1,
//     "servers": [{"id": 0, "mu_max": 20.0, "lambda_max": 19.0}, ...],
//     "clients": [{"id": 0, "phi": 4.5}, ...],
//     "config": {"epsilon": 6.1e-05, "eps_mode": "relative",
//                "phi_max": 4.5, "stability_slack": 1e-09,
//                "initial_kind": "own-server", "seed": 7,
//                "max_rounds": "bound", "grid_G": 100}
//   }
// Field order is irrelevant and unknown keys are rejected. `max_rounds` is a
// nonnegative integer or the string "bound". `stability_slack` may be omitted
// and then takes the caller's default.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lbgame/game_core.h"

namespace lbgame {

inline constexpr int kScenarioVersion = 1;

struct Scenario {
  int version = kScenarioVersion;
  std::vector<ServerSpec> servers;
  std::vector<ClientSpec> clients;
  GameConfig config;

  bool operator==(const Scenario&) const = default;
};

enum class WorkloadKind { kHigh, kLow, kGaussianAverage };

std::string ToString(WorkloadKind kind);
std::optional<WorkloadKind> ParseWorkloadKind(const std::string& text);

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::kGaussianAverage;
  // Target sum(phi) / sum(mu_max).
  double target_utilization = 0.5;
  // Per-client rate distribution before rescaling. Gaussian kinds draw
  // N(mean, sigma) truncated to positive values; the others draw
  // U[0.5, 1.5) * mean.
  double rate_mean = 1.0;
  double rate_sigma = 0.25;
  double mu_low = 5.0;
  double mu_high = 50.0;
  double lambda_fraction = 0.95;  // lambda_max = fraction * mu_max
};

// high: 0.9, low: 0.15, gaussian-average: 0.5 utilization.
WorkloadSpec DefaultWorkload(WorkloadKind kind);

// Draws a feasible scenario. Throws GenerationFailed after 100 attempts.
Scenario Generate(const WorkloadSpec& workload, int num_clients,
                  int num_servers, std::uint64_t seed,
                  double stability_slack = kDefaultStabilitySlack);

// Throws ValidationError naming the first violated constraint.
void ValidateScenario(const Scenario& scenario);

// Throws ParseError (malformed or unknown keys) or ValidationError.
Scenario ParseScenario(std::string_view text,
                       double default_slack = kDefaultStabilitySlack);
std::string SerializeScenario(const Scenario& scenario);

Scenario LoadScenarioFile(const std::string& path,
                          double default_slack = kDefaultStabilitySlack);

// State at the scenario's configured initial strategy.
SystemState InitialState(const Scenario& scenario);

}  // namespace lbgame

#endif  // LBGAME_SCENARIO_H_
