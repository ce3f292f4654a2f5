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

#include "lbgame/dynamics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lbgame {
namespace {

void RequireValid(const SystemState& state, double slack) {
  auto violations = StateViolations(state, slack);
  if (violations.empty()) return;
  std::ostringstream msg;
  for (std::size_t k = 0; k < violations.size(); ++k) {
    msg << (k ? "; " : "") << violations[k];
  }
  if (!IsStable(state, slack)) throw InfeasibleInitial(msg.str());
  throw ValidationError("state", msg.str());
}

}  // namespace

ResidualRates ResidualRatesFor(const SystemState& state, int client) {
  if (client < 0 || client >= state.num_clients()) {
    throw std::out_of_range("client index out of range");
  }
  std::vector<double> mu(state.num_servers());
  for (int i = 0; i < state.num_servers(); ++i) {
    double others = 0.0;
    for (int k = 0; k < state.num_clients(); ++k) {
      if (k != client) others += state.strategy(k, i) * state.clients[k].phi;
    }
    mu[i] = state.servers[i].mu_max - others;
  }
  return ResidualRates(std::move(mu));
}

StepResult Step(const SystemState& state, int client, const GameConfig& config,
                std::int64_t round) {
  const StrategyRow candidate = Optimal(ResidualRatesFor(state, client),
                                        state.clients[client].phi, config);

  TraceRecord record;
  record.round = round;
  record.mover = client;
  record.cost_before = ClientCost(state, client);
  record.cost_after = ClientCostWithRow(state, client, candidate);

  StepResult result{state, {}};
  if (IsEpsilonMove(record.cost_before, record.cost_after, config)) {
    result.state.strategy.SetRow(client, candidate);
    // CanAssign bounds the load against the residual rate; the state
    // invariant bounds it against mu_max. Reject the rare candidate that
    // satisfies the first but not the second.
    if (IsStable(result.state, config.stability_slack)) {
      record.accepted = true;
    } else {
      result.state.strategy = state.strategy;
    }
  }
  record.per_client_costs = ClientCosts(result.state);
  record.potential = SystemPotential(result.state);
  record.load_ratios = LoadRatios(result.state);
  result.record = std::move(record);
  return result;
}

EquilibriumReport Run(const SystemState& initial, const GameConfig& config) {
  RequireValid(initial, config.stability_slack);

  EquilibriumReport report;
  report.config = config;
  if (config.epsilon > 0.0) {
    report.theoretical_bound = ConvergenceBoundFor(initial, config);
  }
  const std::int64_t cap =
      config.max_rounds ? *config.max_rounds
                        : ConvergenceBoundFor(initial, config);

  SystemState state = initial;
  const int m = state.num_clients();
  bool done = m == 0;
  report.converged = done;
  while (!done) {
    if (report.rounds >= cap) break;
    ++report.passes;
    bool moved = false;
    for (int j = 0; j < m; ++j) {
      if (report.rounds >= cap) {
        moved = true;
        break;
      }
      auto result = Step(state, j, config, report.rounds + 1);
      ++report.rounds;
      moved = moved || result.record.accepted;
      state = std::move(result.state);
      report.trace.push_back(std::move(result.record));
    }
    if (!moved) {
      report.converged = true;
      done = true;
    }
  }
  report.final_state = std::move(state);
  return report;
}

std::int64_t ConvergenceBound(int num_players, double alpha, double epsilon,
                              double cost_upper_bound) {
  if (!(epsilon > 0.0)) {
    throw UnboundedFor(
        "epsilon = 0 has no finite step bound; set max_rounds explicitly");
  }
  if (num_players < 1 || !(alpha >= 1.0) || !(cost_upper_bound > 0.0)) {
    throw std::invalid_argument(
        "bound needs num_players >= 1, alpha >= 1 and C > 0");
  }
  const double log_term =
      std::max(1.0, std::log(num_players * cost_upper_bound));
  const double steps = num_players * alpha / epsilon * log_term;
  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
  if (!(steps < static_cast<double>(kMax))) return kMax;
  return static_cast<std::int64_t>(std::ceil(steps));
}

std::int64_t ConvergenceBoundFor(const SystemState& initial,
                                 const GameConfig& config) {
  double cost_bound = 0.0;
  if (config.cost_upper_bound) {
    cost_bound = *config.cost_upper_bound;
  } else {
    for (double c : ClientCosts(initial)) cost_bound = std::max(cost_bound, c);
  }
  return ConvergenceBound(std::max(1, initial.num_clients()),
                          SystemAlpha(initial.servers, config.phi_max),
                          config.epsilon, cost_bound);
}

StrategyMatrix InitialStrategy(std::span<const ServerSpec> servers,
                               std::span<const ClientSpec> clients,
                               InitialKind kind, double stability_slack) {
  const int m = static_cast<int>(clients.size());
  const int n = static_cast<int>(servers.size());
  if (n == 0) throw InfeasibleInitial("no servers");
  StrategyMatrix strategy(m, n);
  double total_mu = 0.0;
  for (const auto& s : servers) total_mu += s.mu_max;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) {
      switch (kind) {
        case InitialKind::kOwnServer:
          strategy(j, i) = i == j % n ? 1.0 : 0.0;
          break;
        case InitialKind::kUniform:
          strategy(j, i) = 1.0 / n;
          break;
        case InitialKind::kProportional:
          strategy(j, i) = servers[i].mu_max / total_mu;
          break;
      }
    }
  }
  SystemState state{{servers.begin(), servers.end()},
                    {clients.begin(), clients.end()},
                    strategy};
  if (!IsStable(state, stability_slack)) {
    std::ostringstream msg;
    msg << ToString(kind) << " initial strategy violates server stability";
    for (const auto& v : StateViolations(state, stability_slack)) {
      msg << "; " << v;
    }
    throw InfeasibleInitial(msg.str());
  }
  return strategy;
}

SystemState MakeInitialState(std::vector<ServerSpec> servers,
                             std::vector<ClientSpec> clients,
                             const GameConfig& config) {
  StrategyMatrix strategy = InitialStrategy(servers, clients,
                                            config.initial_kind,
                                            config.stability_slack);
  return {std::move(servers), std::move(clients), std::move(strategy)};
}

}  // namespace lbgame
