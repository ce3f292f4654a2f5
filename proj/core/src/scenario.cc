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

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lbgame/dynamics.h"
#include "lbgame/random.h"

namespace lbgame {
namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

constexpr int kMaxAttempts = 100;

// Reads typed fields out of one JSON object and rejects keys it never read.
class ObjectReader {
 public:
  ObjectReader(const Json& object, std::string path)
      : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) throw ParseError(path_, "expected an object");
  }

  const Json* Find(const std::string& key) {
    seen_.insert(key);
    auto it = object_.find(key);
    return it == object_.end() ? nullptr : &*it;
  }

  const Json& Require(const std::string& key) {
    const Json* value = Find(key);
    if (value == nullptr) throw ParseError(path_, "missing key \"" + key + "\"");
    return *value;
  }

  double Number(const std::string& key) {
    const Json& v = Require(key);
    if (!v.is_number()) throw ParseError(Path(key), "expected a number");
    return v.get<double>();
  }

  std::int64_t Integer(const std::string& key) {
    const Json& v = Require(key);
    if (!v.is_number_integer()) {
      throw ParseError(Path(key), "expected an integer");
    }
    if (v.is_number_unsigned() &&
        v.get<std::uint64_t>() >
            static_cast<std::uint64_t>(
                std::numeric_limits<std::int64_t>::max())) {
      throw ParseError(Path(key), "integer out of range");
    }
    return v.get<std::int64_t>();
  }

  std::uint64_t Unsigned(const std::string& key) {
    const Json& v = Require(key);
    if (!v.is_number_unsigned() &&
        !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ParseError(Path(key), "expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string String(const std::string& key) {
    const Json& v = Require(key);
    if (!v.is_string()) throw ParseError(Path(key), "expected a string");
    return v.get<std::string>();
  }

  void RejectUnknown() const {
    for (const auto& [key, value] : object_.items()) {
      if (!seen_.contains(key)) throw ParseError(Path(key), "unknown key");
    }
  }

  std::string Path(const std::string& key) const { return path_ + "/" + key; }

 private:
  const Json& object_;
  std::string path_;
  std::set<std::string> seen_;
};

int CheckedInt(std::int64_t value, const std::string& path) {
  if (value < std::numeric_limits<int>::min() ||
      value > std::numeric_limits<int>::max()) {
    throw ParseError(path, "integer out of range");
  }
  return static_cast<int>(value);
}

GameConfig ParseConfig(const Json& value, double default_slack) {
  ObjectReader reader(value, "/config");
  GameConfig config;
  config.epsilon = reader.Number("epsilon");
  const auto mode = ParseEpsilonMode(reader.String("eps_mode"));
  if (!mode) {
    throw ParseError(reader.Path("eps_mode"),
                     "expected \"relative\" or \"absolute\"");
  }
  config.eps_mode = *mode;
  config.phi_max = reader.Number("phi_max");
  config.stability_slack = default_slack;
  if (const Json* slack = reader.Find("stability_slack")) {
    if (!slack->is_number()) {
      throw ParseError(reader.Path("stability_slack"), "expected a number");
    }
    config.stability_slack = slack->get<double>();
  }
  const auto kind = ParseInitialKind(reader.String("initial_kind"));
  if (!kind) {
    throw ParseError(reader.Path("initial_kind"),
                     "expected \"own-server\", \"uniform\" or \"proportional\"");
  }
  config.initial_kind = *kind;
  config.seed = reader.Unsigned("seed");
  const Json& rounds = reader.Require("max_rounds");
  if (rounds.is_string() && rounds.get<std::string>() == "bound") {
    config.max_rounds.reset();
  } else if (rounds.is_number_integer()) {
    config.max_rounds = reader.Integer("max_rounds");
  } else {
    throw ParseError(reader.Path("max_rounds"),
                     "expected an integer or \"bound\"");
  }
  config.grid_G =
      CheckedInt(reader.Integer("grid_G"), reader.Path("grid_G"));
  reader.RejectUnknown();
  return config;
}

OrderedJson ConfigToJson(const GameConfig& config) {
  OrderedJson out;
  out["epsilon"] = config.epsilon;
  out["eps_mode"] = ToString(config.eps_mode);
  out["phi_max"] = config.phi_max;
  out["stability_slack"] = config.stability_slack;
  out["initial_kind"] = ToString(config.initial_kind);
  out["seed"] = config.seed;
  if (config.max_rounds) {
    out["max_rounds"] = *config.max_rounds;
  } else {
    out["max_rounds"] = "bound";
  }
  out["grid_G"] = config.grid_G;
  return out;
}

std::optional<InitialKind> FirstStableInitialKind(const Scenario& scenario) {
  for (InitialKind kind : {InitialKind::kOwnServer, InitialKind::kUniform,
                           InitialKind::kProportional}) {
    try {
      InitialStrategy(scenario.servers, scenario.clients, kind,
                      scenario.config.stability_slack);
      return kind;
    } catch (const InfeasibleInitial&) {
    }
  }
  return std::nullopt;
}

}  // namespace

std::string ToString(WorkloadKind kind) {
  switch (kind) {
    case WorkloadKind::kHigh:
      return "high";
    case WorkloadKind::kLow:
      return "low";
    case WorkloadKind::kGaussianAverage:
      return "gaussian-average";
  }
  return "unknown";
}

std::optional<WorkloadKind> ParseWorkloadKind(const std::string& text) {
  if (text == "high") return WorkloadKind::kHigh;
  if (text == "low") return WorkloadKind::kLow;
  if (text == "gaussian-average") return WorkloadKind::kGaussianAverage;
  return std::nullopt;
}

WorkloadSpec DefaultWorkload(WorkloadKind kind) {
  WorkloadSpec spec;
  spec.kind = kind;
  switch (kind) {
    case WorkloadKind::kHigh:
      spec.target_utilization = 0.9;
      break;
    case WorkloadKind::kLow:
      spec.target_utilization = 0.15;
      break;
    case WorkloadKind::kGaussianAverage:
      spec.target_utilization = 0.5;
      break;
  }
  return spec;
}

Scenario Generate(const WorkloadSpec& workload, int num_clients,
                  int num_servers, std::uint64_t seed,
                  double stability_slack) {
  if (num_clients < 1 || num_servers < 1) {
    throw std::invalid_argument("need at least one client and one server");
  }
  if (!(workload.target_utilization > 0.0) ||
      !(workload.mu_low > 0.0 && workload.mu_low <= workload.mu_high) ||
      !(workload.lambda_fraction > 0.0 && workload.lambda_fraction < 1.0) ||
      !(workload.rate_mean > 0.0) || !(workload.rate_sigma >= 0.0)) {
    throw std::invalid_argument("invalid workload parameters");
  }
  Xoshiro256StarStar rng(seed);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Scenario scenario;
    for (int i = 0; i < num_servers; ++i) {
      const double mu = rng.Uniform(workload.mu_low, workload.mu_high);
      scenario.servers.push_back({i, mu, workload.lambda_fraction * mu});
    }
    std::vector<double> raw(num_clients);
    for (double& r : raw) {
      if (workload.kind == WorkloadKind::kGaussianAverage) {
        r = 0.0;
        for (int draw = 0; draw < 1000 && !(r > 0.0); ++draw) {
          r = rng.Gaussian(workload.rate_mean, workload.rate_sigma);
        }
        if (!(r > 0.0)) r = workload.rate_mean;
      } else {
        r = workload.rate_mean * rng.Uniform(0.5, 1.5);
      }
    }
    double total_mu = 0.0;
    for (const auto& s : scenario.servers) total_mu += s.mu_max;
    const double total_raw = std::accumulate(raw.begin(), raw.end(), 0.0);
    const double scale = workload.target_utilization * total_mu / total_raw;
    double phi_max = 0.0;
    for (int j = 0; j < num_clients; ++j) {
      scenario.clients.push_back({j, raw[j] * scale});
      phi_max = std::max(phi_max, raw[j] * scale);
    }
    scenario.config.phi_max = phi_max;
    scenario.config.stability_slack = stability_slack;
    scenario.config.seed = seed;
    try {
      ValidateScenario(scenario);
    } catch (const ValidationError&) {
      continue;
    }
    if (auto kind = FirstStableInitialKind(scenario)) {
      scenario.config.initial_kind = *kind;
      return scenario;
    }
  }
  throw GenerationFailed("no feasible " + ToString(workload.kind) +
                         " scenario after " + std::to_string(kMaxAttempts) +
                         " attempts");
}

void ValidateScenario(const Scenario& scenario) {
  if (scenario.version != kScenarioVersion) {
    throw ValidationError("version", "unsupported scenario version " +
                                         std::to_string(scenario.version));
  }
  if (scenario.servers.empty()) {
    throw ValidationError("servers.nonempty", "at least one server required");
  }
  if (scenario.clients.empty()) {
    throw ValidationError("clients.nonempty", "at least one client required");
  }
  for (std::size_t i = 0; i < scenario.servers.size(); ++i) {
    if (scenario.servers[i].id != static_cast<int>(i)) {
      throw ValidationError("servers.ids_dense",
                            "server ids must be 0..n-1 without gaps");
    }
    const auto& s = scenario.servers[i];
    if (!(s.mu_max > 0.0)) {
      throw ValidationError("server.mu_max_positive",
                            "server " + std::to_string(i) +
                                ": mu_max must be > 0");
    }
    if (!(s.lambda_max > 0.0 && s.lambda_max < s.mu_max)) {
      throw ValidationError("server.lambda_max_range",
                            "server " + std::to_string(i) +
                                ": need 0 < lambda_max < mu_max");
    }
  }
  for (std::size_t j = 0; j < scenario.clients.size(); ++j) {
    if (scenario.clients[j].id != static_cast<int>(j)) {
      throw ValidationError("clients.ids_dense",
                            "client ids must be 0..m-1 without gaps");
    }
    if (!(scenario.clients[j].phi > 0.0)) {
      throw ValidationError("client.phi_positive",
                            "client " + std::to_string(j) +
                                ": phi must be > 0");
    }
  }
  const auto& c = scenario.config;
  if (!(c.epsilon >= 0.0 && c.epsilon < 1.0)) {
    throw ValidationError("config.epsilon_range", "epsilon must be in [0, 1)");
  }
  double max_phi = 0.0;
  double total_phi = 0.0;
  for (const auto& client : scenario.clients) {
    max_phi = std::max(max_phi, client.phi);
    total_phi += client.phi;
  }
  if (!(c.phi_max >= max_phi)) {
    throw ValidationError("config.phi_max",
                          "phi_max must be >= every client's phi");
  }
  if (!(c.stability_slack >= 0.0 && c.stability_slack < 1.0)) {
    throw ValidationError("config.stability_slack_range",
                          "stability_slack must be in [0, 1)");
  }
  if (c.grid_G < 2) {
    throw ValidationError("config.grid_G", "grid_G must be >= 2");
  }
  if (c.max_rounds && *c.max_rounds < 0) {
    throw ValidationError("config.max_rounds", "max_rounds must be >= 0");
  }
  double capacity = 0.0;
  for (const auto& s : scenario.servers) {
    capacity += s.mu_max * (1.0 - c.stability_slack);
  }
  if (!(total_phi < capacity)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "total demand " << total_phi
        << " must be below total capacity * (1 - slack) = " << capacity;
    throw ValidationError("feasibility", msg.str());
  }
}

Scenario ParseScenario(std::string_view text, double default_slack) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), e.what());
  }
  ObjectReader root(doc, "");
  Scenario scenario;
  scenario.version = CheckedInt(root.Integer("version"), "/version");

  const Json& servers = root.Require("servers");
  if (!servers.is_array()) throw ParseError("/servers", "expected an array");
  for (std::size_t i = 0; i < servers.size(); ++i) {
    ObjectReader reader(servers[i], "/servers/" + std::to_string(i));
    ServerSpec spec;
    spec.id = CheckedInt(reader.Integer("id"), reader.Path("id"));
    spec.mu_max = reader.Number("mu_max");
    spec.lambda_max = reader.Number("lambda_max");
    reader.RejectUnknown();
    scenario.servers.push_back(spec);
  }

  const Json& clients = root.Require("clients");
  if (!clients.is_array()) throw ParseError("/clients", "expected an array");
  for (std::size_t j = 0; j < clients.size(); ++j) {
    ObjectReader reader(clients[j], "/clients/" + std::to_string(j));
    ClientSpec spec;
    spec.id = CheckedInt(reader.Integer("id"), reader.Path("id"));
    spec.phi = reader.Number("phi");
    reader.RejectUnknown();
    scenario.clients.push_back(spec);
  }

  scenario.config = ParseConfig(root.Require("config"), default_slack);
  root.RejectUnknown();

  std::stable_sort(scenario.servers.begin(), scenario.servers.end(),
                   [](const auto& a, const auto& b) { return a.id < b.id; });
  std::stable_sort(scenario.clients.begin(), scenario.clients.end(),
                   [](const auto& a, const auto& b) { return a.id < b.id; });
  ValidateScenario(scenario);
  return scenario;
}

std::string SerializeScenario(const Scenario& scenario) {
  OrderedJson doc;
  doc["version"] = scenario.version;
  doc["servers"] = OrderedJson::array();
  for (const auto& s : scenario.servers) {
    doc["servers"].push_back(
        {{"id", s.id}, {"mu_max", s.mu_max}, {"lambda_max", s.lambda_max}});
  }
  doc["clients"] = OrderedJson::array();
  for (const auto& c : scenario.clients) {
    doc["clients"].push_back({{"id", c.id}, {"phi", c.phi}});
  }
  doc["config"] = ConfigToJson(scenario.config);
  return doc.dump(2) + "\n";
}

Scenario LoadScenarioFile(const std::string& path, double default_slack) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseScenario(buffer.str(), default_slack);
}

SystemState InitialState(const Scenario& scenario) {
  return MakeInitialState(scenario.servers, scenario.clients, scenario.config);
}

}  // namespace lbgame
