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

#ifndef LBGAME_GAME_CORE_H_
#define LBGAME_GAME_CORE_H_

// Domain types of the client/server load-balancing game and its closed-form
// quantities: arrival rates, M/M/1 delays, client costs, potentials, load
// ratios, the bounded-jump constant and the epsilon-move predicate.
//
// Units are jobs/second for rates and seconds for delays and costs.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lbgame/errors.h"

namespace lbgame {

inline constexpr double kRowSumTolerance = 1e-9;
inline constexpr double kDefaultStabilitySlack = 1e-9;

enum class EpsilonMode {
  kRelative,  // c_new < (1 - eps) * c_old
  kAbsolute,  // c_old - c_new > eps
};

enum class InitialKind {
  kOwnServer,     // client j entirely on server j mod n
  kUniform,       // 1/n everywhere
  kProportional,  // mu_max_i / sum(mu_max) everywhere
};

std::string ToString(EpsilonMode mode);
std::string ToString(InitialKind kind);
std::optional<EpsilonMode> ParseEpsilonMode(const std::string& text);
std::optional<InitialKind> ParseInitialKind(const std::string& text);

struct ServerSpec {
  int id = 0;
  double mu_max = 0.0;      // maximum processing rate
  double lambda_max = 0.0;  // tolerated arrival cap, 0 < lambda_max < mu_max

  bool operator==(const ServerSpec&) const = default;
};

struct ClientSpec {
  int id = 0;
  double phi = 0.0;  // job generation rate

  bool operator==(const ClientSpec&) const = default;
};

// m x n matrix of load fractions; row j is client j's strategy.
class StrategyMatrix {
 public:
  StrategyMatrix() = default;
  StrategyMatrix(int num_clients, int num_servers);

  static StrategyMatrix FromRows(const std::vector<std::vector<double>>& rows);

  int num_clients() const { return num_clients_; }
  int num_servers() const { return num_servers_; }

  double operator()(int client, int server) const {
    return entries_[Index(client, server)];
  }
  double& operator()(int client, int server) {
    return entries_[Index(client, server)];
  }

  std::span<const double> row(int client) const;
  std::span<double> row(int client);
  void SetRow(int client, std::span<const double> fractions);

  std::vector<std::vector<double>> ToRows() const;

  bool operator==(const StrategyMatrix&) const = default;

 private:
  std::size_t Index(int client, int server) const {
    return static_cast<std::size_t>(client) * num_servers_ + server;
  }

  int num_clients_ = 0;
  int num_servers_ = 0;
  std::vector<double> entries_;
};

struct GameConfig {
  double epsilon = 6.1e-5;
  EpsilonMode eps_mode = EpsilonMode::kRelative;
  double phi_max = 0.0;
  double stability_slack = kDefaultStabilitySlack;
  InitialKind initial_kind = InitialKind::kOwnServer;
  std::uint64_t seed = 0;
  // Step cap for the dynamics; empty means "use the theoretical bound".
  std::optional<std::int64_t> max_rounds;
  int grid_G = 100;
  // Cost upper bound C in the step bound. Library-only override; defaults to
  // the largest initial client cost.
  std::optional<double> cost_upper_bound;

  bool operator==(const GameConfig&) const = default;
};

struct SystemState {
  std::vector<ServerSpec> servers;
  std::vector<ClientSpec> clients;
  StrategyMatrix strategy;

  int num_servers() const { return static_cast<int>(servers.size()); }
  int num_clients() const { return static_cast<int>(clients.size()); }

  bool operator==(const SystemState&) const = default;
};

// Invariant checks. Each returns a human-readable description of every
// violation found; an empty list means the value is valid.
std::vector<std::string> ServerViolations(const ServerSpec& server);
std::vector<std::string> ClientViolations(const ClientSpec& client);
std::vector<std::string> ConfigViolations(const GameConfig& config,
                                          std::span<const ClientSpec> clients);
std::vector<std::string> RowViolations(std::span<const double> row);
// Row-stochastic strategy plus beta_i <= mu_max_i * (1 - slack) and
// beta_i < mu_max_i for every server.
std::vector<std::string> StateViolations(const SystemState& state,
                                         double stability_slack);

bool IsRowStochastic(std::span<const double> row);
bool IsStable(const SystemState& state, double stability_slack);

// beta_i = sum_j S[j][i] * phi_j.
double ArrivalRate(const SystemState& state, int server);
std::vector<double> ArrivalRates(const SystemState& state);

// f(i): number of clients with a nonzero fraction on server i.
int ActiveClientCount(const SystemState& state, int server);

// M/M/1 expected response time 1 / (mu - beta). Throws UnstableServer when
// beta >= mu.
double ServerDelay(double mu, double beta);

// R_j = sum_i S[j][i] / (mu_max_i - beta_i). All servers must be stable.
double ClientCost(const SystemState& state, int client);

// Client j's cost when its row is replaced by `row`, everything else fixed.
double ClientCostWithRow(const SystemState& state, int client,
                         std::span<const double> row);

std::vector<double> ClientCosts(const SystemState& state);

// Weighted potential sum_i sum_j S[j][i] * delay_i; equals sum_j R_j.
double SystemPotential(const SystemState& state);

// Rosenthal's potential sum_i sum_{t=1}^{f(i)} 1 / (mu_i - t * phi) for pure
// assignments where every client has the same rate phi.
double RosenthalPotentialPure(const SystemState& state);

// beta / mu_max, i.e. (mu_max - mu_effective) / mu_max.
double LoadRatio(const ServerSpec& server, double beta);
std::vector<double> LoadRatios(const SystemState& state);

// 1 + phi_max / (mu_max - lambda_max).
double AlphaBound(const ServerSpec& server, double phi_max);
// Largest AlphaBound over all servers.
double SystemAlpha(std::span<const ServerSpec> servers, double phi_max);

bool IsEpsilonMove(double cost_old, double cost_new, const GameConfig& config);

}  // namespace lbgame

#endif  // LBGAME_GAME_CORE_H_
