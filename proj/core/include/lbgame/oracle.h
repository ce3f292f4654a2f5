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

#ifndef LBGAME_ORACLE_H_
#define LBGAME_ORACLE_H_

// Brute-force verification over the discretized strategy simplex. Client
// costs here are evaluated by a separate direct implementation of R_j so the
// oracle and the game core check each other.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lbgame/dynamics.h"
#include "lbgame/game_core.h"

namespace lbgame {

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

// All rows with entries in {0, 1/G, ..., 1} summing to 1.
struct GridSpec {
  int n = 1;
  int G = 100;
};

// C(G + n - 1, n - 1), saturating at UINT64_MAX.
std::uint64_t SimplexPointCount(int n, int G);

// Visits every composition of G into n parts (as integer counts) in
// lexicographic order. Throws ResourceLimit if the count exceeds `cap`.
void ForEachSimplexPoint(
    int n, int G, const std::function<void(std::span<const int>)>& visit,
    std::uint64_t cap = kDefaultEnumerationCap);

std::vector<std::vector<double>> EnumerateSimplex(
    int n, int G, std::uint64_t cap = kDefaultEnumerationCap);

// R_j with client j's row replaced by `row`; +infinity if any server would be
// unstable.
double DirectClientCost(const SystemState& state, int client,
                        std::span<const double> row);

struct GridResponse {
  std::vector<double> row;
  double cost = 0.0;
};

// Cheapest stable grid row for `client` with everyone else fixed; ties go to
// the lexicographically first point. Throws NoFeasiblePoint.
GridResponse BruteBestResponse(const SystemState& state, int client,
                               const GridSpec& grid,
                               std::uint64_t cap = kDefaultEnumerationCap);

struct NashCertificate {
  double epsilon_checked = 0.0;
  GridSpec grid;
  // 1 - best_grid_cost / current_cost, per client.
  std::vector<double> per_client_gap;
  bool holds = false;
  // Twice the largest relative cost change of one 1/G step around each
  // client's grid optimum.
  double grid_slack = 0.0;
  bool holds_with_slack = false;
};

NashCertificate VerifyEpsilonNash(const SystemState& state, double epsilon,
                                  const GridSpec& grid,
                                  std::uint64_t cap = kDefaultEnumerationCap);

// (cost of the capacity-proportional row - best grid cost) / best grid cost,
// both in client j's current residual environment.
double BestResponseGap(const SystemState& state, int client,
                       const GridSpec& grid, const GameConfig& config,
                       std::uint64_t cap = kDefaultEnumerationCap);

// Largest G <= max_G whose simplex has at most `point_budget` points (>= 1).
int GridForBudget(int n, int max_G, std::uint64_t point_budget);

// Fills report.best_response_gaps for every client of the final state, using
// the report's grid_G reduced to fit `point_budget` points per client. A
// client whose grid has no stable point gets the next finer grid that does,
// up to kDefaultEnumerationCap points; past that NoFeasiblePoint propagates.
void AttachBestResponseGaps(EquilibriumReport& report,
                            std::uint64_t point_budget = 200'000);

}  // namespace lbgame

#endif  // LBGAME_ORACLE_H_
