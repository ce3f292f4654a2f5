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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "lbgame/random.h"
#include "test_util.h"

namespace lbgame {
namespace {

using testing::MakeState;
using testing::RelClose;

TEST(ArrivalRateTest, SingleTerm) {
  auto state = MakeState({10}, {2}, {{1}});
  EXPECT_DOUBLE_EQ(ArrivalRate(state, 0), 2.0);
}

TEST(ArrivalRateTest, SymmetricSplit) {
  auto state = MakeState({10, 10}, {4, 4}, {{0.5, 0.5}, {0.5, 0.5}});
  EXPECT_DOUBLE_EQ(ArrivalRate(state, 0), 4.0);
}

TEST(ArrivalRateTest, UnusedServerIsZero) {
  auto state = MakeState({10, 10}, {4, 4}, {{1, 0}, {1, 0}});
  EXPECT_EQ(ArrivalRate(state, 1), 0.0);
  EXPECT_EQ(ActiveClientCount(state, 1), 0);
  EXPECT_EQ(ActiveClientCount(state, 0), 2);
}

TEST(ServerDelayTest, Examples) {
  EXPECT_DOUBLE_EQ(ServerDelay(10, 0), 0.1);
  EXPECT_DOUBLE_EQ(ServerDelay(10, 8), 0.5);
  EXPECT_THROW(ServerDelay(10, 10), UnstableServer);
  EXPECT_THROW(ServerDelay(10, 11), UnstableServer);
}

TEST(ServerDelayTest, StrictlyIncreasingInArrivalRate) {
  Xoshiro256StarStar rng(11);
  for (int trial = 0; trial < 10000; ++trial) {
    const double mu = rng.Uniform(1, 100);
    double a = rng.Uniform(0, mu);
    double b = rng.Uniform(0, mu);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    EXPECT_LT(ServerDelay(mu, a), ServerDelay(mu, b));
  }
}

TEST(ClientCostTest, SingleServer) {
  auto state = MakeState({10}, {2}, {{1}});
  EXPECT_DOUBLE_EQ(ClientCost(state, 0), 0.125);
}

TEST(ClientCostTest, SymmetricSplit) {
  auto state = MakeState({10, 10}, {4}, {{0.5, 0.5}});
  EXPECT_DOUBLE_EQ(ClientCost(state, 0), 0.125);
}

TEST(ClientCostTest, HeterogeneousTwoByTwo) {
  auto state = MakeState({10, 5}, {2, 2}, {{1, 0}, {0, 1}});
  EXPECT_DOUBLE_EQ(ClientCost(state, 0), 1.0 / 8);
  EXPECT_DOUBLE_EQ(ClientCost(state, 1), 1.0 / 3);
}

TEST(ClientCostTest, UnstableServerPropagates) {
  auto state = MakeState({10, 5}, {2, 6}, {{1, 0}, {0, 1}});
  EXPECT_THROW(ClientCost(state, 0), UnstableServer);
  try {
    ClientCost(state, 1);
    FAIL();
  } catch (const UnstableServer& e) {
    EXPECT_EQ(e.server(), 1);
  }
}

TEST(ClientCostTest, WithRowMatchesSubstitutedState) {
  auto state = MakeState({10, 8}, {2, 3}, {{0.25, 0.75}, {0.5, 0.5}});
  const std::vector<double> row = {0.9, 0.1};
  auto substituted = state;
  substituted.strategy.SetRow(0, row);
  EXPECT_DOUBLE_EQ(ClientCostWithRow(state, 0, row),
                   ClientCost(substituted, 0));
}

TEST(SystemPotentialTest, Examples) {
  EXPECT_DOUBLE_EQ(SystemPotential(MakeState({10}, {2}, {{1}})), 0.125);
  auto state = MakeState({10, 5}, {2, 2}, {{1, 0}, {0, 1}});
  EXPECT_DOUBLE_EQ(SystemPotential(state), 0.125 + 1.0 / 3);
}

TEST(SystemPotentialTest, AllClientsOnOneServer) {
  auto state = MakeState({10, 7}, {1, 2, 3}, {{1, 0}, {1, 0}, {1, 0}});
  // Three unit-multiplier terms at beta = 6.
  EXPECT_DOUBLE_EQ(SystemPotential(state), 3 * ServerDelay(10, 6));
  double sum = 0;
  for (int j = 0; j < 3; ++j) sum += ClientCost(state, j);
  EXPECT_DOUBLE_EQ(SystemPotential(state), sum);
}

// Random row-stochastic state that keeps every server below 90% load.
SystemState RandomStableState(Xoshiro256StarStar& rng, int m, int n) {
  std::vector<double> mu(n), phi(m);
  std::vector<std::vector<double>> rows(m, std::vector<double>(n));
  for (auto& r : rows) {
    double total = 0;
    for (auto& v : r) total += v = rng.NextDouble();
    for (auto& v : r) v /= total;
  }
  for (auto& p : phi) p = rng.Uniform(0.5, 5);
  for (int i = 0; i < n; ++i) {
    double beta = 0;
    for (int j = 0; j < m; ++j) beta += rows[j][i] * phi[j];
    mu[i] = beta / rng.Uniform(0.05, 0.9) + 1e-3;
  }
  return MakeState(mu, phi, rows);
}

TEST(SystemPotentialTest, EqualsSumOfClientCosts) {
  Xoshiro256StarStar rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 8);
    const int n = 1 + static_cast<int>(rng() % 8);
    auto state = RandomStableState(rng, m, n);
    double sum = 0;
    for (double c : ClientCosts(state)) sum += c;
    EXPECT_TRUE(RelClose(SystemPotential(state), sum, 1e-12));
  }
}

TEST(RosenthalPotentialTest, Examples) {
  EXPECT_EQ(RosenthalPotentialPure(MakeState({10, 10}, {}, {})), 0.0);
  EXPECT_DOUBLE_EQ(RosenthalPotentialPure(MakeState({10}, {2}, {{1}})),
                   1.0 / 8);
  EXPECT_DOUBLE_EQ(
      RosenthalPotentialPure(MakeState({10}, {2, 2}, {{1}, {1}})),
      1.0 / 8 + 1.0 / 6);
}

TEST(RosenthalPotentialTest, RejectsFractionalOrWeightedStates) {
  EXPECT_THROW(RosenthalPotentialPure(MakeState({10, 10}, {2}, {{0.5, 0.5}})),
               NotPureUnitWeight);
  EXPECT_THROW(
      RosenthalPotentialPure(MakeState({10, 10}, {2, 3}, {{1, 0}, {0, 1}})),
      NotPureUnitWeight);
  EXPECT_THROW(RosenthalPotentialPure(MakeState({5}, {2, 2, 2}, {{1}, {1}, {1}})),
               UnstableServer);
}

// Every pure assignment of m unit clients (phi = 1) to n servers (mu = 10),
// and every single-client reassignment from it.
void ForEachPureMove(
    int m, int n,
    const std::function<void(const SystemState&, const SystemState&, int, int,
                             int)>& visit) {
  std::vector<int> assign(m, 0);
  while (true) {
    std::vector<std::vector<double>> rows(m, std::vector<double>(n, 0.0));
    for (int j = 0; j < m; ++j) rows[j][assign[j]] = 1.0;
    const auto before =
        MakeState(std::vector<double>(n, 10.0), std::vector<double>(m, 1.0),
                  rows);
    for (int j = 0; j < m; ++j) {
      for (int b = 0; b < n; ++b) {
        if (b == assign[j]) continue;
        auto after = before;
        std::vector<double> row(n, 0.0);
        row[b] = 1.0;
        after.strategy.SetRow(j, row);
        visit(before, after, j, assign[j], b);
      }
    }
    int pos = 0;
    while (pos < m && ++assign[pos] == n) assign[pos++] = 0;
    if (pos == m) return;
  }
}

TEST(RosenthalPotentialTest, MirrorsMoverDelayExhaustively) {
  int moves = 0;
  for (int m = 1; m <= 4; ++m) {
    for (int n = 1; n <= 4; ++n) {
      ForEachPureMove(m, n, [&](const SystemState& before,
                                const SystemState& after, int j, int a,
                                int b) {
        const double phi = 1.0;
        const double cost_before =
            ServerDelay(10, ActiveClientCount(before, a) * phi);
        const double cost_after =
            ServerDelay(10, ActiveClientCount(after, b) * phi);
        const double d_potential =
            RosenthalPotentialPure(after) - RosenthalPotentialPure(before);
        const double d_cost = cost_after - cost_before;
        // Relative to the potential's magnitude so zero-change moves compare
        // at round-off scale.
        const double scale =
            std::max({std::abs(d_cost), RosenthalPotentialPure(before)});
        EXPECT_LE(std::abs(d_potential - d_cost), 1e-12 * scale)
            << "m=" << m << " n=" << n << " client " << j;
        // The mover's delay is exactly its client cost in a pure state.
        EXPECT_DOUBLE_EQ(ClientCost(before, j), cost_before);
        EXPECT_DOUBLE_EQ(ClientCost(after, j), cost_after);
        ++moves;
      });
    }
  }
  EXPECT_GT(moves, 0);
}

TEST(LoadRatioTest, Examples) {
  const ServerSpec server{0, 10, 9.5};
  EXPECT_EQ(LoadRatio(server, 0), 0.0);
  EXPECT_DOUBLE_EQ(LoadRatio(server, 10 - 4), 0.6);
  EXPECT_LT(LoadRatio(server, std::nextafter(10.0, 0.0)), 1.0);
}

TEST(AlphaBoundTest, Examples) {
  EXPECT_DOUBLE_EQ(AlphaBound({0, 10, 8}, 1), 1.5);
  EXPECT_DOUBLE_EQ(AlphaBound({0, 10, 8}, 0), 1.0);
  EXPECT_NEAR(AlphaBound({0, 10, 9.9}, 2), 21.0, 1e-12);
  EXPECT_DOUBLE_EQ(SystemAlpha(testing::Servers({10, 20}), 1.0),
                   1.0 + 1.0 / (10 - 9.5));
}

TEST(AlphaBoundTest, DelayRatioMatchesClosedFormAndIsBounded) {
  Xoshiro256StarStar rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const double mu = rng.Uniform(5, 50);
    const ServerSpec server{0, mu, rng.Uniform(0.5, 0.99) * mu};
    const double phi_max = rng.Uniform(0.1, 10);
    const double share = rng.NextDouble() * rng.Uniform(0, phi_max);
    const double added = std::min(share, server.lambda_max);
    double load = 0;
    const int t = 1 + static_cast<int>(rng() % 10);
    for (int k = 0; k < t; ++k) {
      const double x = rng.NextDouble() * rng.Uniform(0, phi_max);
      if (load + x + added <= server.lambda_max) load += x;
    }
    const double ratio = ServerDelay(mu, load + added) / ServerDelay(mu, load);
    const double closed = 1 + added / (mu - (load + added));
    EXPECT_TRUE(RelClose(ratio, closed, 1e-12));
    EXPECT_LE(ratio, AlphaBound(server, phi_max));
  }
}

TEST(EpsilonMoveTest, Examples) {
  GameConfig relative;
  relative.epsilon = 0.1;
  EXPECT_TRUE(IsEpsilonMove(1.0, 0.89, relative));
  EXPECT_FALSE(IsEpsilonMove(1.0, 0.9, relative));
  GameConfig absolute;
  absolute.eps_mode = EpsilonMode::kAbsolute;
  absolute.epsilon = 6.1e-5;
  EXPECT_TRUE(IsEpsilonMove(0.5, 0.4999, absolute));
  EXPECT_FALSE(IsEpsilonMove(0.5, 0.49995, absolute));
}

TEST(EpsilonMoveTest, Monotone) {
  Xoshiro256StarStar rng(3);
  for (auto mode : {EpsilonMode::kRelative, EpsilonMode::kAbsolute}) {
    for (int trial = 0; trial < 5000; ++trial) {
      GameConfig cfg;
      cfg.eps_mode = mode;
      cfg.epsilon = rng.NextDouble() * 0.5;
      const double c_old = rng.Uniform(0, 2);
      const double c_new = rng.Uniform(0, 2);
      const bool base = IsEpsilonMove(c_old, c_new, cfg);
      if (base) {
        EXPECT_TRUE(IsEpsilonMove(c_old, c_new * rng.NextDouble(), cfg));
      }
      GameConfig larger = cfg;
      larger.epsilon = cfg.epsilon + rng.NextDouble() * (1 - cfg.epsilon);
      if (!base) EXPECT_FALSE(IsEpsilonMove(c_old, c_new, larger));
    }
  }
}

TEST(InvariantTest, RowAndStateViolations) {
  EXPECT_TRUE(IsRowStochastic(std::vector<double>{0.25, 0.75}));
  EXPECT_TRUE(IsRowStochastic(std::vector<double>{0.5, 0.5 + 5e-10}));
  EXPECT_FALSE(IsRowStochastic(std::vector<double>{0.5, 0.6}));
  EXPECT_FALSE(IsRowStochastic(std::vector<double>{1.5, -0.5}));

  auto ok = MakeState({10, 10}, {3, 3}, {{1, 0}, {0, 1}});
  EXPECT_TRUE(StateViolations(ok, 1e-9).empty());
  auto overloaded = MakeState({10, 10}, {6, 6}, {{1, 0}, {1, 0}});
  EXPECT_FALSE(IsStable(overloaded, 1e-9));
  EXPECT_EQ(StateViolations(overloaded, 1e-9).size(), 1u);
  // Inside mu_max but within the slack margin.
  auto marginal = MakeState({10}, {9.95}, {{1}});
  EXPECT_TRUE(IsStable(marginal, 1e-9));
  EXPECT_FALSE(IsStable(marginal, 0.01));
}

TEST(InvariantTest, SpecViolations) {
  EXPECT_TRUE(ServerViolations({0, 10, 9.5}).empty());
  EXPECT_FALSE(ServerViolations({0, 0, 0}).empty());
  EXPECT_FALSE(ServerViolations({0, 10, 10}).empty());
  EXPECT_FALSE(ClientViolations({0, 0}).empty());
  GameConfig cfg;
  cfg.phi_max = 1;
  const auto clients = testing::Clients({0.5, 2.0});
  EXPECT_FALSE(ConfigViolations(cfg, clients).empty());
  cfg.phi_max = 2;
  EXPECT_TRUE(ConfigViolations(cfg, clients).empty());
  cfg.epsilon = 1.0;
  EXPECT_FALSE(ConfigViolations(cfg, clients).empty());
}

TEST(StrategyMatrixTest, RowsRoundTrip) {
  const std::vector<std::vector<double>> rows = {{0.5, 0.5}, {1, 0}, {0, 1}};
  auto matrix = StrategyMatrix::FromRows(rows);
  EXPECT_EQ(matrix.num_clients(), 3);
  EXPECT_EQ(matrix.num_servers(), 2);
  EXPECT_EQ(matrix.ToRows(), rows);
  EXPECT_THROW(StrategyMatrix::FromRows({{1}, {0.5, 0.5}}),
               std::invalid_argument);
}

}  // namespace
}  // namespace lbgame
