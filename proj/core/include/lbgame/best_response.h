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

#ifndef LBGAME_BEST_RESPONSE_H_
#define LBGAME_BEST_RESPONSE_H_

// Per-client capacity-proportional strategy computation: sort servers by
// residual rate, prune the slow tail, then split the client's demand across
// the remaining servers in proportion to their residual rates.

#include <span>
#include <vector>

#include "lbgame/game_core.h"

namespace lbgame {

// Effective rates a client sees: mu_max minus every other client's load,
// indexed by original server id.
class ResidualRates {
 public:
  ResidualRates() = default;
  explicit ResidualRates(std::vector<double> mu);

  const std::vector<double>& mu() const { return mu_; }
  int size() const { return static_cast<int>(mu_.size()); }
  double total() const;

  // Server indices by decreasing rate; ties keep ascending index.
  std::vector<int> SortedOrder() const;

 private:
  std::vector<double> mu_;
};

using StrategyRow = std::vector<double>;

// Number of fastest servers kept by the pruning loop: while the total rate of
// the kept prefix minus `phi` is at least the slowest kept rate, drop that
// server. Never returns less than 1. `sorted_mu` must be nonincreasing.
int PruneServers(std::span<const double> sorted_mu, double phi);

// True iff placing `fraction` of `phi` on a server with residual rate
// `residual_mu` keeps it stable with the configured slack.
bool CanAssign(double fraction, double phi, double residual_mu,
               const GameConfig& config);

// Client strategy row against `residual`, in original server order.
// Throws InfeasibleLoad when sum(residual) <= phi or no eligible set can take
// the load.
StrategyRow Optimal(const ResidualRates& residual, double phi,
                    const GameConfig& config);

}  // namespace lbgame

#endif  // LBGAME_BEST_RESPONSE_H_
