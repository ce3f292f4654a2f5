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

#include "lbgame/game_core.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lbgame {
namespace {

template <typename... Args>
std::string Concat(const Args&... args) {
  std::ostringstream out;
  out.precision(17);
  (out << ... << args);
  return out.str();
}

void CheckServerIndex(const SystemState& state, int server) {
  if (server < 0 || server >= state.num_servers()) {
    throw std::out_of_range(Concat("server index ", server, " out of range"));
  }
}

void CheckClientIndex(const SystemState& state, int client) {
  if (client < 0 || client >= state.num_clients()) {
    throw std::out_of_range(Concat("client index ", client, " out of range"));
  }
}

}  // namespace

std::string ToString(EpsilonMode mode) {
  return mode == EpsilonMode::kRelative ? "relative" : "absolute";
}

std::string ToString(InitialKind kind) {
  switch (kind) {
    case InitialKind::kOwnServer:
      return "own-server";
    case InitialKind::kUniform:
      return "uniform";
    case InitialKind::kProportional:
      return "proportional";
  }
  return "unknown";
}

std::optional<EpsilonMode> ParseEpsilonMode(const std::string& text) {
  if (text == "relative") return EpsilonMode::kRelative;
  if (text == "absolute") return EpsilonMode::kAbsolute;
  return std::nullopt;
}

std::optional<InitialKind> ParseInitialKind(const std::string& text) {
  if (text == "own-server") return InitialKind::kOwnServer;
  if (text == "uniform") return InitialKind::kUniform;
  if (text == "proportional") return InitialKind::kProportional;
  return std::nullopt;
}

StrategyMatrix::StrategyMatrix(int num_clients, int num_servers)
    : num_clients_(num_clients),
      num_servers_(num_servers),
      entries_(static_cast<std::size_t>(num_clients) * num_servers, 0.0) {
  if (num_clients < 0 || num_servers < 0) {
    throw std::invalid_argument("strategy matrix dimensions must be >= 0");
  }
}

StrategyMatrix StrategyMatrix::FromRows(
    const std::vector<std::vector<double>>& rows) {
  const int m = static_cast<int>(rows.size());
  const int n = m == 0 ? 0 : static_cast<int>(rows.front().size());
  StrategyMatrix matrix(m, n);
  for (int j = 0; j < m; ++j) {
    if (static_cast<int>(rows[j].size()) != n) {
      throw std::invalid_argument("strategy rows must all have equal length");
    }
    matrix.SetRow(j, rows[j]);
  }
  return matrix;
}

std::span<const double> StrategyMatrix::row(int client) const {
  return std::span<const double>(entries_).subspan(Index(client, 0),
                                                   num_servers_);
}

std::span<double> StrategyMatrix::row(int client) {
  return std::span<double>(entries_).subspan(Index(client, 0), num_servers_);
}

void StrategyMatrix::SetRow(int client, std::span<const double> fractions) {
  if (static_cast<int>(fractions.size()) != num_servers_) {
    throw std::invalid_argument("row length does not match server count");
  }
  std::copy(fractions.begin(), fractions.end(), row(client).begin());
}

std::vector<std::vector<double>> StrategyMatrix::ToRows() const {
  std::vector<std::vector<double>> rows;
  rows.reserve(num_clients_);
  for (int j = 0; j < num_clients_; ++j) {
    auto r = row(j);
    rows.emplace_back(r.begin(), r.end());
  }
  return rows;
}

std::vector<std::string> ServerViolations(const ServerSpec& server) {
  std::vector<std::string> out;
  if (!(server.mu_max > 0.0) || !std::isfinite(server.mu_max)) {
    out.push_back(Concat("server ", server.id, ": mu_max must be > 0"));
  }
  if (!(server.lambda_max > 0.0 && server.lambda_max < server.mu_max)) {
    out.push_back(
        Concat("server ", server.id, ": need 0 < lambda_max < mu_max"));
  }
  return out;
}

std::vector<std::string> ClientViolations(const ClientSpec& client) {
  std::vector<std::string> out;
  if (!(client.phi > 0.0) || !std::isfinite(client.phi)) {
    out.push_back(Concat("client ", client.id, ": phi must be > 0"));
  }
  return out;
}

std::vector<std::string> ConfigViolations(
    const GameConfig& config, std::span<const ClientSpec> clients) {
  std::vector<std::string> out;
  if (!(config.epsilon >= 0.0 && config.epsilon < 1.0)) {
    out.push_back("epsilon must lie in [0, 1)");
  }
  double max_phi = 0.0;
  for (const auto& c : clients) max_phi = std::max(max_phi, c.phi);
  if (!(config.phi_max >= max_phi)) {
    out.push_back("phi_max must be >= every client's phi");
  }
  if (!(config.stability_slack >= 0.0 && config.stability_slack < 1.0)) {
    out.push_back("stability_slack must lie in [0, 1)");
  }
  if (config.grid_G < 2) out.push_back("grid_G must be >= 2");
  if (config.max_rounds && *config.max_rounds < 0) {
    out.push_back("max_rounds must be >= 0");
  }
  if (config.cost_upper_bound && !(*config.cost_upper_bound > 0.0)) {
    out.push_back("cost upper bound must be > 0");
  }
  return out;
}

std::vector<std::string> RowViolations(std::span<const double> row) {
  std::vector<std::string> out;
  double sum = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (!(row[i] >= 0.0 && row[i] <= 1.0)) {
      out.push_back(Concat("entry ", i, " = ", row[i], " outside [0, 1]"));
    }
    sum += row[i];
  }
  if (!(std::abs(sum - 1.0) <= kRowSumTolerance)) {
    out.push_back(Concat("row sums to ", sum, ", not 1"));
  }
  return out;
}

bool IsRowStochastic(std::span<const double> row) {
  return RowViolations(row).empty();
}

std::vector<std::string> StateViolations(const SystemState& state,
                                         double stability_slack) {
  std::vector<std::string> out;
  const auto& s = state.strategy;
  if (s.num_clients() != state.num_clients() ||
      s.num_servers() != state.num_servers()) {
    out.push_back(Concat("strategy is ", s.num_clients(), "x",
                         s.num_servers(), " but the system has ",
                         state.num_clients(), " clients and ",
                         state.num_servers(), " servers"));
    return out;
  }
  for (int j = 0; j < s.num_clients(); ++j) {
    for (const auto& v : RowViolations(s.row(j))) {
      out.push_back(Concat("client ", j, ": ", v));
    }
  }
  for (int i = 0; i < state.num_servers(); ++i) {
    const double beta = ArrivalRate(state, i);
    const double mu = state.servers[i].mu_max;
    if (!(beta < mu)) {
      out.push_back(Concat("server ", i, ": arrival rate ", beta,
                           " >= mu_max ", mu));
    } else if (!(beta <= mu * (1.0 - stability_slack))) {
      out.push_back(Concat("server ", i, ": arrival rate ", beta,
                           " exceeds mu_max * (1 - slack) = ",
                           mu * (1.0 - stability_slack)));
    }
  }
  return out;
}

bool IsStable(const SystemState& state, double stability_slack) {
  for (int i = 0; i < state.num_servers(); ++i) {
    const double beta = ArrivalRate(state, i);
    const double mu = state.servers[i].mu_max;
    if (!(beta < mu && beta <= mu * (1.0 - stability_slack))) return false;
  }
  return true;
}

double ArrivalRate(const SystemState& state, int server) {
  CheckServerIndex(state, server);
  double beta = 0.0;
  for (int j = 0; j < state.num_clients(); ++j) {
    beta += state.strategy(j, server) * state.clients[j].phi;
  }
  return beta;
}

std::vector<double> ArrivalRates(const SystemState& state) {
  std::vector<double> rates(state.num_servers());
  for (int i = 0; i < state.num_servers(); ++i) {
    rates[i] = ArrivalRate(state, i);
  }
  return rates;
}

int ActiveClientCount(const SystemState& state, int server) {
  CheckServerIndex(state, server);
  int count = 0;
  for (int j = 0; j < state.num_clients(); ++j) {
    if (state.strategy(j, server) > 0.0) ++count;
  }
  return count;
}

double ServerDelay(double mu, double beta) {
  if (!(beta < mu)) throw UnstableServer(-1, mu, beta);
  return 1.0 / (mu - beta);
}

namespace {

// Cost of `row` given per-server arrival rates that already include it.
double CostFromRates(const SystemState& state, std::span<const double> row,
                     std::span<const double> betas) {
  for (int i = 0; i < state.num_servers(); ++i) {
    if (!(betas[i] < state.servers[i].mu_max)) {
      throw UnstableServer(i, state.servers[i].mu_max, betas[i]);
    }
  }
  double cost = 0.0;
  for (int i = 0; i < state.num_servers(); ++i) {
    if (row[i] > 0.0) {
      cost += row[i] * ServerDelay(state.servers[i].mu_max, betas[i]);
    }
  }
  return cost;
}

}  // namespace

double ClientCost(const SystemState& state, int client) {
  CheckClientIndex(state, client);
  const auto betas = ArrivalRates(state);
  return CostFromRates(state, state.strategy.row(client), betas);
}

double ClientCostWithRow(const SystemState& state, int client,
                         std::span<const double> row) {
  CheckClientIndex(state, client);
  if (static_cast<int>(row.size()) != state.num_servers()) {
    throw std::invalid_argument("row length does not match server count");
  }
  std::vector<double> betas(state.num_servers(), 0.0);
  for (int i = 0; i < state.num_servers(); ++i) {
    for (int k = 0; k < state.num_clients(); ++k) {
      const double frac = k == client ? row[i] : state.strategy(k, i);
      betas[i] += frac * state.clients[k].phi;
    }
  }
  return CostFromRates(state, row, betas);
}

std::vector<double> ClientCosts(const SystemState& state) {
  const auto betas = ArrivalRates(state);
  std::vector<double> costs(state.num_clients());
  for (int j = 0; j < state.num_clients(); ++j) {
    costs[j] = CostFromRates(state, state.strategy.row(j), betas);
  }
  return costs;
}

double SystemPotential(const SystemState& state) {
  const auto betas = ArrivalRates(state);
  double potential = 0.0;
  for (int i = 0; i < state.num_servers(); ++i) {
    const double mu = state.servers[i].mu_max;
    if (!(betas[i] < mu)) throw UnstableServer(i, mu, betas[i]);
    double weight = 0.0;
    for (int j = 0; j < state.num_clients(); ++j) {
      weight += state.strategy(j, i);
    }
    if (weight > 0.0) potential += weight * ServerDelay(mu, betas[i]);
  }
  return potential;
}

double RosenthalPotentialPure(const SystemState& state) {
  if (state.num_clients() == 0) return 0.0;
  const double phi = state.clients.front().phi;
  for (const auto& c : state.clients) {
    if (c.phi != phi) {
      throw NotPureUnitWeight("clients do not share a common phi");
    }
  }
  for (int j = 0; j < state.num_clients(); ++j) {
    int ones = 0;
    for (double v : state.strategy.row(j)) {
      if (v == 1.0) {
        ++ones;
      } else if (v != 0.0) {
        throw NotPureUnitWeight(Concat("client ", j, " has a fractional row"));
      }
    }
    if (ones != 1) {
      throw NotPureUnitWeight(Concat("client ", j, " is not on one server"));
    }
  }
  double potential = 0.0;
  for (int i = 0; i < state.num_servers(); ++i) {
    const int users = ActiveClientCount(state, i);
    const double mu = state.servers[i].mu_max;
    if (users > 0 && !(users * phi < mu)) {
      throw UnstableServer(i, mu, users * phi);
    }
    for (int t = 1; t <= users; ++t) potential += ServerDelay(mu, t * phi);
  }
  return potential;
}

double LoadRatio(const ServerSpec& server, double beta) {
  return beta / server.mu_max;
}

std::vector<double> LoadRatios(const SystemState& state) {
  const auto betas = ArrivalRates(state);
  std::vector<double> ratios(state.num_servers());
  for (int i = 0; i < state.num_servers(); ++i) {
    ratios[i] = LoadRatio(state.servers[i], betas[i]);
  }
  return ratios;
}

double AlphaBound(const ServerSpec& server, double phi_max) {
  return 1.0 + phi_max / (server.mu_max - server.lambda_max);
}

double SystemAlpha(std::span<const ServerSpec> servers, double phi_max) {
  double alpha = 1.0;
  for (const auto& s : servers) alpha = std::max(alpha, AlphaBound(s, phi_max));
  return alpha;
}

bool IsEpsilonMove(double cost_old, double cost_new,
                   const GameConfig& config) {
  if (config.eps_mode == EpsilonMode::kRelative) {
    return cost_new < (1.0 - config.epsilon) * cost_old;
  }
  return cost_old - cost_new > config.epsilon;
}

}  // namespace lbgame
