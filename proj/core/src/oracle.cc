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

#include "lbgame/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "lbgame/best_response.h"

namespace lbgame {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Load every client except `client` places on each server.
std::vector<double> OtherLoads(const SystemState& state, int client) {
  std::vector<double> load(state.servers.size(), 0.0);
  for (std::size_t k = 0; k < state.clients.size(); ++k) {
    if (static_cast<int>(k) == client) continue;
    for (std::size_t i = 0; i < state.servers.size(); ++i) {
      load[i] += state.strategy(static_cast<int>(k), static_cast<int>(i)) *
                 state.clients[k].phi;
    }
  }
  return load;
}

double CostAgainst(const SystemState& state, std::span<const double> others,
                   double phi, std::span<const double> row) {
  double cost = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    const double beta = others[i] + row[i] * phi;
    const double mu = state.servers[i].mu_max;
    if (!(beta < mu)) return kInf;
    if (row[i] != 0.0) cost += row[i] / (mu - beta);
  }
  return cost;
}

void CheckGrid(const SystemState& state, const GridSpec& grid) {
  if (grid.n != state.num_servers()) {
    throw std::invalid_argument("grid dimension must equal the server count");
  }
  if (grid.G < 1) throw std::invalid_argument("grid resolution must be >= 1");
}

}  // namespace

std::uint64_t SimplexPointCount(int n, int G) {
  if (n < 1 || G < 0) return 0;
  // C(G + k, k) for k = n - 1, built incrementally. Each partial product is a
  // binomial coefficient, so after cancelling gcd(count, k) the remaining
  // divisor k / g divides G + k exactly.
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t count = 1;
  for (std::uint64_t k = 1; k <= static_cast<std::uint64_t>(n - 1); ++k) {
    const std::uint64_t g = std::gcd(count, k);
    const std::uint64_t factor = (G + k) / (k / g);
    const std::uint64_t base = count / g;
    if (base > kMax / factor) return kMax;
    count = base * factor;
  }
  return count;
}

void ForEachSimplexPoint(
    int n, int G, const std::function<void(std::span<const int>)>& visit,
    std::uint64_t cap) {
  if (n < 1 || G < 0) {
    throw std::invalid_argument("simplex needs n >= 1 and G >= 0");
  }
  const std::uint64_t count = SimplexPointCount(n, G);
  if (count > cap) {
    std::ostringstream msg;
    msg << "simplex with n=" << n << ", G=" << G << " has more than " << cap
        << " points; use a smaller grid or fewer servers";
    throw ResourceLimit(msg.str());
  }
  // Lexicographic successor: increment the rightmost part p < n-1 whose
  // suffix still holds units, zero the parts after it, and put the remaining
  // suffix mass minus one on the last part.
  std::vector<int> parts(n, 0);
  parts[n - 1] = G;
  while (true) {
    visit(parts);
    int suffix = parts[n - 1];
    int p = n - 2;
    while (p >= 0 && suffix == 0) {
      suffix += parts[p];
      --p;
    }
    if (p < 0) return;
    ++parts[p];
    for (int q = p + 1; q < n - 1; ++q) parts[q] = 0;
    parts[n - 1] = suffix - 1;
  }
}

std::vector<std::vector<double>> EnumerateSimplex(int n, int G,
                                                  std::uint64_t cap) {
  std::vector<std::vector<double>> points;
  ForEachSimplexPoint(
      n, G,
      [&](std::span<const int> parts) {
        std::vector<double> row(parts.size());
        for (std::size_t i = 0; i < parts.size(); ++i) {
          row[i] = static_cast<double>(parts[i]) / G;
        }
        points.push_back(std::move(row));
      },
      cap);
  return points;
}

double DirectClientCost(const SystemState& state, int client,
                        std::span<const double> row) {
  const auto others = OtherLoads(state, client);
  return CostAgainst(state, others, state.clients[client].phi, row);
}

GridResponse BruteBestResponse(const SystemState& state, int client,
                               const GridSpec& grid, std::uint64_t cap) {
  CheckGrid(state, grid);
  const auto others = OtherLoads(state, client);
  const double phi = state.clients[client].phi;
  GridResponse best{{}, kInf};
  std::vector<double> row(grid.n);
  ForEachSimplexPoint(
      grid.n, grid.G,
      [&](std::span<const int> parts) {
        for (int i = 0; i < grid.n; ++i) {
          row[i] = static_cast<double>(parts[i]) / grid.G;
        }
        const double cost = CostAgainst(state, others, phi, row);
        if (cost < best.cost) best = {row, cost};
      },
      cap);
  if (best.row.empty()) {
    throw NoFeasiblePoint("no stable grid point for client " +
                          std::to_string(client));
  }
  return best;
}

namespace {

// Largest relative cost change from shifting 1/G of load between two servers
// around `row`.
double StepSensitivity(const SystemState& state, int client,
                       const std::vector<double>& row, int G) {
  const auto others = OtherLoads(state, client);
  const double phi = state.clients[client].phi;
  const double base = CostAgainst(state, others, phi, row);
  double worst = 0.0;
  std::vector<double> moved = row;
  const double step = 1.0 / G;
  for (std::size_t a = 0; a < row.size(); ++a) {
    if (row[a] < step - 1e-15) continue;
    for (std::size_t b = 0; b < row.size(); ++b) {
      if (a == b) continue;
      moved = row;
      moved[a] = std::max(0.0, moved[a] - step);
      moved[b] += step;
      const double cost = CostAgainst(state, others, phi, moved);
      if (std::isfinite(cost)) {
        worst = std::max(worst, std::abs(cost - base) / base);
      }
    }
  }
  return worst;
}

}  // namespace

NashCertificate VerifyEpsilonNash(const SystemState& state, double epsilon,
                                  const GridSpec& grid, std::uint64_t cap) {
  CheckGrid(state, grid);
  NashCertificate cert;
  cert.epsilon_checked = epsilon;
  cert.grid = grid;
  double sensitivity = 0.0;
  for (int j = 0; j < state.num_clients(); ++j) {
    const double current =
        DirectClientCost(state, j, state.strategy.row(j));
    const auto best = BruteBestResponse(state, j, grid, cap);
    cert.per_client_gap.push_back(1.0 - best.cost / current);
    sensitivity =
        std::max(sensitivity, StepSensitivity(state, j, best.row, grid.G));
  }
  cert.grid_slack = 2.0 * sensitivity;
  cert.holds = std::all_of(cert.per_client_gap.begin(),
                           cert.per_client_gap.end(),
                           [&](double g) { return g <= epsilon; });
  cert.holds_with_slack = std::all_of(
      cert.per_client_gap.begin(), cert.per_client_gap.end(),
      [&](double g) { return g <= epsilon + cert.grid_slack; });
  return cert;
}

double BestResponseGap(const SystemState& state, int client,
                       const GridSpec& grid, const GameConfig& config,
                       std::uint64_t cap) {
  const auto best = BruteBestResponse(state, client, grid, cap);
  const StrategyRow row = Optimal(ResidualRatesFor(state, client),
                                  state.clients[client].phi, config);
  const double cost = DirectClientCost(state, client, row);
  return (cost - best.cost) / best.cost;
}

int GridForBudget(int n, int max_G, std::uint64_t point_budget) {
  int G = std::max(1, max_G);
  while (G > 1 && SimplexPointCount(n, G) > point_budget) {
    // Shrink geometrically then refine; counts grow polynomially in G.
    const int smaller = G * 3 / 4;
    G = SimplexPointCount(n, smaller) > point_budget ? smaller : G - 1;
  }
  return G;
}

void AttachBestResponseGaps(EquilibriumReport& report,
                            std::uint64_t point_budget) {
  const SystemState& state = report.final_state;
  const int n = state.num_servers();
  const int base_G = GridForBudget(n, report.config.grid_G, point_budget);
  report.best_response_gaps.clear();
  report.gap_grid_G.clear();
  for (int j = 0; j < state.num_clients(); ++j) {
    // Near saturation a coarse grid may miss the stable region entirely.
    for (int G = base_G;; ++G) {
      const std::uint64_t count = SimplexPointCount(n, G);
      const std::uint64_t cap = std::max(point_budget, count);
      try {
        report.best_response_gaps.push_back(
            BestResponseGap(state, j, {n, G}, report.config, cap));
        report.gap_grid_G.push_back(G);
        break;
      } catch (const NoFeasiblePoint&) {
        if (n == 1 || SimplexPointCount(n, G + 1) > kDefaultEnumerationCap) {
          throw;
        }
      }
    }
  }
}

}  // namespace lbgame
