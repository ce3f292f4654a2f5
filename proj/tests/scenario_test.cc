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

#include "lbgame/scenario.h"

#include <gtest/gtest.h>

#include <numeric>
#include <string>

#include "lbgame/dynamics.h"

namespace lbgame {
namespace {

constexpr const char* kTwoByTwo = R"({
  "version": 1,
  "servers": [{"id": 1, "mu_max": 10, "lambda_max": 9.5},
              {"id": 0, "mu_max": 10, "lambda_max": 9.5}],
  "clients": [{"id": 0, "phi": 3}, {"id": 1, "phi": 3}],
  "config": {"epsilon": 6.1e-05, "eps_mode": "relative", "phi_max": 3,
             "initial_kind": "uniform", "seed": 7, "max_rounds": "bound",
             "grid_G": 100}
})";

double Utilization(const Scenario& s) {
  double phi = 0, mu = 0;
  for (const auto& c : s.clients) phi += c.phi;
  for (const auto& v : s.servers) mu += v.mu_max;
  return phi / mu;
}

TEST(GenerateTest, UtilizationMatchesWorkload) {
  for (auto kind :
       {WorkloadKind::kHigh, WorkloadKind::kLow, WorkloadKind::kGaussianAverage}) {
    const auto workload = DefaultWorkload(kind);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto s = Generate(workload, 6, 6, seed);
      EXPECT_NEAR(Utilization(s), workload.target_utilization, 1e-12);
      EXPECT_NO_THROW(ValidateScenario(s));
      EXPECT_EQ(s.config.seed, seed);
      EXPECT_TRUE(IsStable(InitialState(s), s.config.stability_slack));
      for (const auto& v : s.servers) {
        EXPECT_GE(v.mu_max, workload.mu_low);
        EXPECT_LT(v.mu_max, workload.mu_high);
        EXPECT_DOUBLE_EQ(v.lambda_max, 0.95 * v.mu_max);
      }
    }
  }
  EXPECT_GE(DefaultWorkload(WorkloadKind::kHigh).target_utilization, 0.85);
  EXPECT_LE(DefaultWorkload(WorkloadKind::kLow).target_utilization, 0.2);
}

TEST(GenerateTest, DeterministicPerSeed) {
  const auto workload = DefaultWorkload(WorkloadKind::kGaussianAverage);
  EXPECT_EQ(Generate(workload, 5, 4, 11), Generate(workload, 5, 4, 11));
  EXPECT_NE(Generate(workload, 5, 4, 11), Generate(workload, 5, 4, 12));
}

TEST(GenerateTest, ZeroSigmaGivesEqualRates) {
  auto workload = DefaultWorkload(WorkloadKind::kGaussianAverage);
  workload.rate_sigma = 0;
  const auto s = Generate(workload, 4, 3, 5);
  for (const auto& c : s.clients) EXPECT_DOUBLE_EQ(c.phi, s.clients[0].phi);
}

TEST(GenerateTest, RejectsBadSizes) {
  const auto workload = DefaultWorkload(WorkloadKind::kLow);
  EXPECT_THROW(Generate(workload, 0, 3, 1), std::invalid_argument);
  EXPECT_THROW(Generate(workload, 3, 0, 1), std::invalid_argument);
}

TEST(WorkloadKindTest, RoundTrips) {
  for (auto kind :
       {WorkloadKind::kHigh, WorkloadKind::kLow, WorkloadKind::kGaussianAverage}) {
    EXPECT_EQ(ParseWorkloadKind(ToString(kind)), kind);
  }
  EXPECT_FALSE(ParseWorkloadKind("medium").has_value());
}

TEST(ParseTest, SortsByIdAndDefaultsSlack) {
  const auto s = ParseScenario(kTwoByTwo, 1e-6);
  ASSERT_EQ(s.servers.size(), 2u);
  EXPECT_EQ(s.servers[0].id, 0);
  EXPECT_EQ(s.servers[1].id, 1);
  EXPECT_EQ(s.config.stability_slack, 1e-6);
  EXPECT_EQ(s.config.initial_kind, InitialKind::kUniform);
  EXPECT_FALSE(s.config.max_rounds.has_value());
  EXPECT_EQ(s.config.grid_G, 100);
}

TEST(ParseTest, RoundTripsGeneratedScenarios) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto kind = static_cast<WorkloadKind>(seed % 3);
    auto s = Generate(DefaultWorkload(kind), 1 + seed % 7, 1 + seed % 5, seed);
    if (seed % 2 == 0) s.config.max_rounds = seed * 3;
    s.config.eps_mode = seed % 4 == 1 ? EpsilonMode::kAbsolute
                                      : EpsilonMode::kRelative;
    const auto text = SerializeScenario(s);
    const auto back = ParseScenario(text);
    EXPECT_EQ(back, s) << text;
    EXPECT_EQ(SerializeScenario(back), text);
  }
}

std::string Replace(std::string text, const std::string& from,
                    const std::string& to) {
  const auto pos = text.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return text.replace(pos, from.size(), to);
}

TEST(ParseTest, ReportsLocationOfSyntaxErrors) {
  try {
    ParseScenario(Replace(kTwoByTwo, "\"phi\": 3}]", "\"phi\": }]"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.where().rfind("byte ", 0), 0u) << e.where();
  }
}

TEST(ParseTest, ReportsJsonPointerForSchemaErrors) {
  struct Case {
    std::string from, to, where;
  };
  const Case cases[] = {
      {"\"seed\": 7", "\"seed\": 7, \"colour\": 1", "/config/colour"},
      {"\"eps_mode\": \"relative\"", "\"eps_mode\": \"loose\"",
       "/config/eps_mode"},
      {"\"max_rounds\": \"bound\"", "\"max_rounds\": \"never\"",
       "/config/max_rounds"},
      {"\"seed\": 7", "\"seed\": -7", "/config/seed"},
      {"{\"id\": 0, \"phi\": 3}", "{\"id\": 0, \"phi\": \"3\"}",
       "/clients/0/phi"},
      {"\"grid_G\": 100", "\"grid_G\": 1.5", "/config/grid_G"},
  };
  for (const auto& c : cases) {
    try {
      ParseScenario(Replace(kTwoByTwo, c.from, c.to));
      ADD_FAILURE() << "accepted " << c.to;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.where(), c.where) << e.what();
    }
  }
  try {
    ParseScenario(R"({"version": 1, "servers": []})");
    ADD_FAILURE();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.where(), "");
  }
}

TEST(ValidateTest, NamesViolatedConstraint) {
  struct Case {
    std::string from, to, constraint;
  };
  const Case cases[] = {
      {"\"version\": 1", "\"version\": 2", "version"},
      {"{\"id\": 1, \"mu_max\"", "{\"id\": 2, \"mu_max\"",
       "servers.ids_dense"},
      {"\"lambda_max\": 9.5}]", "\"lambda_max\": 10}]",
       "server.lambda_max_range"},
      {"{\"id\": 1, \"phi\": 3}", "{\"id\": 1, \"phi\": 0}",
       "client.phi_positive"},
      {"\"epsilon\": 6.1e-05", "\"epsilon\": 1", "config.epsilon_range"},
      {"\"phi_max\": 3", "\"phi_max\": 2", "config.phi_max"},
      {"\"grid_G\": 100", "\"grid_G\": 1", "config.grid_G"},
      {"\"max_rounds\": \"bound\"", "\"max_rounds\": -1", "config.max_rounds"},
      {"\"phi\": 3}]", "\"phi\": 17}]", "feasibility"},
  };
  for (const auto& c : cases) {
    auto text = Replace(kTwoByTwo, c.from, c.to);
    if (c.constraint == "feasibility") {
      text = Replace(text, "\"phi_max\": 3", "\"phi_max\": 17");
    }
    try {
      ParseScenario(text);
      ADD_FAILURE() << "accepted " << c.to;
    } catch (const ValidationError& e) {
      EXPECT_EQ(e.constraint(), c.constraint) << e.what();
    }
  }
}

TEST(InitialStateTest, UsesConfiguredKind) {
  const auto s = ParseScenario(kTwoByTwo);
  const auto state = InitialState(s);
  EXPECT_EQ(state.strategy.ToRows(),
            (std::vector<std::vector<double>>{{0.5, 0.5}, {0.5, 0.5}}));
}

}  // namespace
}  // namespace lbgame
