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

#include "lbgame/best_response.h"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace lbgame {

ResidualRates::ResidualRates(std::vector<double> mu) : mu_(std::move(mu)) {}

double ResidualRates::total() const {
  return std::accumulate(mu_.begin(), mu_.end(), 0.0);
}

std::vector<int> ResidualRates::SortedOrder() const {
  std::vector<int> order(mu_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [this](int a, int b) { return mu_[a] > mu_[b]; });
  return order;
}

int PruneServers(std::span<const double> sorted_mu, double phi) {
  int k = static_cast<int>(sorted_mu.size());
  if (k == 0) return 0;
  double total = std::accumulate(sorted_mu.begin(), sorted_mu.end(), 0.0);
  while (k > 1 && total - phi >= sorted_mu[k - 1]) {
    total -= sorted_mu[k - 1];
    --k;
  }
  return k;
}

bool CanAssign(double fraction, double phi, double residual_mu,
               const GameConfig& config) {
  if (fraction == 0.0) return true;
  return fraction * phi <= residual_mu * (1.0 - config.stability_slack);
}

StrategyRow Optimal(const ResidualRates& residual, double phi,
                    const GameConfig& config) {
  const int n = residual.size();
  if (n == 0 || !(residual.total() > phi)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "demand " << phi << " exceeds total residual capacity "
        << residual.total();
    throw InfeasibleLoad(msg.str());
  }

  // Servers with no residual capacity never take load.
  std::vector<int> order;
  for (int i : residual.SortedOrder()) {
    if (residual.mu()[i] > 0.0) order.push_back(i);
  }
  std::vector<double> sorted_mu;
  for (int i : order) sorted_mu.push_back(residual.mu()[i]);

  int kept = PruneServers(sorted_mu, phi);
  StrategyRow row(n, 0.0);
  // Proportional pass with restart on rejection. When rejections empty the
  // pruned prefix, the fastest pruned server is re-admitted.
  while (kept <= static_cast<int>(order.size())) {
    std::vector<int> eligible(order.begin(), order.begin() + kept);
    while (!eligible.empty()) {
      double sum = 0.0;
      for (int i : eligible) sum += residual.mu()[i];
      std::vector<int> accepted;
      for (int i : eligible) {
        if (CanAssign(residual.mu()[i] / sum, phi, residual.mu()[i], config)) {
          accepted.push_back(i);
        }
      }
      if (accepted.size() == eligible.size()) {
        for (int i : eligible) row[i] = residual.mu()[i] / sum;
        return row;
      }
      eligible = std::move(accepted);
    }
    ++kept;
  }
  std::ostringstream msg;
  msg.precision(17);
  msg << "no eligible server set can absorb demand " << phi;
  throw InfeasibleLoad(msg.str());
}

}  // namespace lbgame
