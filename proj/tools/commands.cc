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

#include "commands.h"

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

namespace lbgame::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

std::string Num(double value) { return fmt::format("{:.17g}", value); }

std::string Bool(bool value) { return value ? "true" : "false"; }

void WriteFile(const fs::path& path, const std::string& contents) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  file << contents;
  if (!file) throw std::runtime_error("failed writing " + path.string());
}

std::string ReadFile(const fs::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ParseError(path.string(), "cannot open file");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

Scenario ScenarioOf(const SystemState& state, const GameConfig& config) {
  Scenario scenario;
  scenario.servers = state.servers;
  scenario.clients = state.clients;
  scenario.config = config;
  return scenario;
}

double TotalCost(const SystemState& state) {
  double total = 0.0;
  for (double c : ClientCosts(state)) total += c;
  return total;
}

std::vector<double> ParseEpsilonList(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.empty()) throw std::invalid_argument("empty epsilon entry");
    std::size_t used = 0;
    const double value = std::stod(item, &used);
    if (used != item.size()) {
      throw std::invalid_argument("bad epsilon \"" + item + "\"");
    }
    values.push_back(value);
  }
  return values;
}

}  // namespace

double DefaultSlackFromEnv() {
  const char* raw = std::getenv("LB_STABILITY_SLACK");
  if (raw == nullptr || *raw == '\0') return kDefaultStabilitySlack;
  char* end = nullptr;
  const double value = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(value >= 0.0 && value < 1.0)) {
    return kDefaultStabilitySlack;
  }
  return value;
}

std::string TraceCsv(const EquilibriumReport& report) {
  std::string csv = "round,mover,accepted,cost_before,cost_after,potential\n";
  for (const auto& r : report.trace) {
    csv += fmt::format("{},{},{},{},{},{}\n", r.round, r.mover,
                       Bool(r.accepted), Num(r.cost_before),
                       Num(r.cost_after), Num(r.potential));
  }
  return csv;
}

std::string LoadRatioCsv(const EquilibriumReport& report) {
  std::string csv = "server,mu_max,beta,LR\n";
  const auto& state = report.final_state;
  const auto betas = ArrivalRates(state);
  for (int i = 0; i < state.num_servers(); ++i) {
    csv += fmt::format("{},{},{},{}\n", state.servers[i].id,
                       Num(state.servers[i].mu_max), Num(betas[i]),
                       Num(LoadRatio(state.servers[i], betas[i])));
  }
  return csv;
}

std::string CostsCsv(const EquilibriumReport& report) {
  std::string csv = "round";
  for (int j = 0; j < report.final_state.num_clients(); ++j) {
    csv += fmt::format(",cost_{}", j);
  }
  csv += "\n";
  for (const auto& r : report.trace) {
    csv += std::to_string(r.round);
    for (double c : r.per_client_costs) csv += "," + Num(c);
    csv += "\n";
  }
  return csv;
}

std::string ReportJson(const EquilibriumReport& report) {
  const auto& state = report.final_state;
  OrderedJson doc;
  doc["converged"] = report.converged;
  doc["rounds"] = report.rounds;
  doc["passes"] = report.passes;
  if (report.theoretical_bound) {
    doc["theoretical_bound"] = *report.theoretical_bound;
  } else {
    doc["theoretical_bound"] = nullptr;
  }
  doc["scenario"] =
      OrderedJson::parse(SerializeScenario(ScenarioOf(state, report.config)));
  doc["final_strategy"] = state.strategy.ToRows();
  doc["final_client_costs"] = ClientCosts(state);
  doc["final_total_cost"] = TotalCost(state);
  doc["final_potential"] = SystemPotential(state);
  doc["final_load_ratios"] = LoadRatios(state);
  doc["best_response_gaps"] = report.best_response_gaps;
  doc["gap_grid_G"] = report.gap_grid_G;
  OrderedJson trace = OrderedJson::array();
  for (const auto& r : report.trace) {
    OrderedJson rec;
    rec["round"] = r.round;
    rec["mover"] = r.mover;
    rec["accepted"] = r.accepted;
    rec["cost_before"] = r.cost_before;
    rec["cost_after"] = r.cost_after;
    rec["potential"] = r.potential;
    rec["load_ratios"] = r.load_ratios;
    rec["per_client_costs"] = r.per_client_costs;
    trace.push_back(std::move(rec));
  }
  doc["trace"] = std::move(trace);
  return doc.dump(2) + "\n";
}

std::string CertificateJson(const NashCertificate& certificate) {
  OrderedJson doc;
  doc["epsilon_checked"] = certificate.epsilon_checked;
  doc["grid_G"] = certificate.grid.G;
  doc["num_servers"] = certificate.grid.n;
  doc["per_client_gap"] = certificate.per_client_gap;
  doc["holds"] = certificate.holds;
  doc["grid_slack"] = certificate.grid_slack;
  doc["epsilon_with_slack"] =
      certificate.epsilon_checked + certificate.grid_slack;
  doc["holds_with_slack"] = certificate.holds_with_slack;
  return doc.dump(2) + "\n";
}

LoadedReport ParseReportJson(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), e.what());
  }
  if (!doc.is_object()) throw ParseError("", "expected an object");
  for (const char* key : {"scenario", "final_strategy", "converged"}) {
    if (!doc.contains(key)) {
      throw ParseError("", std::string("missing key \"") + key + "\"");
    }
  }
  const Scenario scenario = ParseScenario(doc["scenario"].dump());
  LoadedReport loaded;
  loaded.config = scenario.config;
  if (!doc["converged"].is_boolean()) {
    throw ParseError("/converged", "expected a boolean");
  }
  loaded.converged = doc["converged"].get<bool>();
  std::vector<std::vector<double>> rows;
  try {
    rows = doc["final_strategy"].get<std::vector<std::vector<double>>>();
  } catch (const Json::exception& e) {
    throw ParseError("/final_strategy", e.what());
  }
  if (rows.size() != scenario.clients.size()) {
    throw ParseError("/final_strategy", "one row per client expected");
  }
  for (const auto& row : rows) {
    if (row.size() != scenario.servers.size()) {
      throw ParseError("/final_strategy", "one column per server expected");
    }
  }
  loaded.final_state = {scenario.servers, scenario.clients,
                        StrategyMatrix::FromRows(rows)};
  const auto violations =
      StateViolations(loaded.final_state, scenario.config.stability_slack);
  if (!violations.empty()) {
    throw ValidationError("state", violations.front());
  }
  return loaded;
}

SystemState PerturbToWorstServer(const SystemState& state, int client,
                                 double stability_slack) {
  if (client < 0 || client >= state.num_clients()) {
    throw std::out_of_range("perturbed client index out of range");
  }
  const auto residual = ResidualRatesFor(state, client);
  const double phi = state.clients[client].phi;
  GameConfig slack_only;
  slack_only.stability_slack = stability_slack;
  int worst = -1;
  for (int i = 0; i < state.num_servers(); ++i) {
    if (!CanAssign(1.0, phi, residual.mu()[i], slack_only)) continue;
    // Single-server cost is 1 / (residual - phi): the worst stable server has
    // the smallest residual rate.
    if (worst < 0 || residual.mu()[i] < residual.mu()[worst]) worst = i;
  }
  if (worst < 0) {
    throw InfeasibleLoad("client " + std::to_string(client) +
                         " fits on no single server");
  }
  SystemState perturbed = state;
  std::vector<double> row(state.num_servers(), 0.0);
  row[worst] = 1.0;
  perturbed.strategy.SetRow(client, row);
  return perturbed;
}

int CmdRun(const fs::path& scenario_path, const fs::path& out_dir,
           std::ostream& out, std::ostream& err) {
  EquilibriumReport report;
  try {
    const Scenario scenario =
        LoadScenarioFile(scenario_path.string(), DefaultSlackFromEnv());
    report = Run(InitialState(scenario), scenario.config);
    AttachBestResponseGaps(report);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const UnboundedFor& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InfeasibleInitial& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const InfeasibleLoad& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  }

  // Render everything before touching the output directory.
  const std::string trace = TraceCsv(report);
  const std::string load_ratio = LoadRatioCsv(report);
  const std::string costs = CostsCsv(report);
  const std::string json = ReportJson(report);
  fs::create_directories(out_dir);
  WriteFile(out_dir / "trace.csv", trace);
  WriteFile(out_dir / "load_ratio.csv", load_ratio);
  WriteFile(out_dir / "costs.csv", costs);
  WriteFile(out_dir / "report.json", json);

  out << fmt::format("converged={} rounds={} passes={} total_cost={}\n",
                     Bool(report.converged), report.rounds, report.passes,
                     Num(TotalCost(report.final_state)));
  if (!report.converged) {
    err << "run stopped at " << report.rounds
        << " rounds without converging\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

int CmdSweep(const fs::path& scenario_path,
             const std::vector<double>& epsilons, const fs::path& out_dir,
             std::ostream& out, std::ostream& err) {
  if (epsilons.empty()) {
    err << "usage error: --eps needs at least one value\n";
    return kExitInput;
  }
  for (double eps : epsilons) {
    if (!(eps >= 0.0 && eps < 1.0)) {
      err << "usage error: epsilon " << Num(eps) << " outside [0, 1)\n";
      return kExitInput;
    }
  }
  Scenario scenario;
  SystemState initial;
  try {
    scenario = LoadScenarioFile(scenario_path.string(), DefaultSlackFromEnv());
    initial = InitialState(scenario);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InfeasibleInitial& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  }

  struct Row {
    std::int64_t rounds = 0;
    double total_cost = 0.0;
    double potential = 0.0;
    bool converged = false;
    std::string error;
  };
  std::vector<std::future<Row>> pending;
  for (double eps : epsilons) {
    pending.push_back(std::async(std::launch::async, [&, eps] {
      Row row;
      GameConfig config = scenario.config;
      config.epsilon = eps;
      try {
        const auto report = Run(initial, config);
        row.rounds = report.rounds;
        row.total_cost = TotalCost(report.final_state);
        row.potential = SystemPotential(report.final_state);
        row.converged = report.converged;
      } catch (const Error& e) {
        row.error = e.what();
      }
      return row;
    }));
  }

  std::string csv =
      "epsilon,rounds,final_total_cost,final_potential,converged,error\n";
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    const Row row = pending[k].get();
    if (row.error.empty()) {
      csv += fmt::format("{},{},{},{},{},\n", Num(epsilons[k]), row.rounds,
                         Num(row.total_cost), Num(row.potential),
                         Bool(row.converged));
    } else {
      std::string message = row.error;
      for (char& c : message) {
        if (c == '"') c = '\'';
      }
      csv += fmt::format("{},,,,false,\"{}\"\n", Num(epsilons[k]), message);
      err << "epsilon " << Num(epsilons[k]) << ": " << row.error << "\n";
    }
  }
  fs::create_directories(out_dir);
  WriteFile(out_dir / "sweep.csv", csv);
  out << "wrote " << (out_dir / "sweep.csv").string() << "\n";
  return kExitOk;
}

int CmdGen(const std::string& kind, int num_clients, int num_servers,
           std::uint64_t seed, const fs::path& out_file, std::ostream& out,
           std::ostream& err) {
  const auto workload = ParseWorkloadKind(kind);
  if (!workload) {
    err << "usage error: kind must be high, low or gaussian-average\n";
    return kExitInput;
  }
  if (num_clients < 1 || num_servers < 1) {
    err << "usage error: m and n must be >= 1\n";
    return kExitInput;
  }
  std::string text;
  try {
    text = SerializeScenario(Generate(DefaultWorkload(*workload), num_clients,
                                      num_servers, seed,
                                      DefaultSlackFromEnv()));
  } catch (const GenerationFailed& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  if (out_file.has_parent_path()) {
    fs::create_directories(out_file.parent_path());
  }
  WriteFile(out_file, text);
  out << "wrote " << out_file.string() << "\n";
  return kExitOk;
}

int CmdVerify(const fs::path& report_path, int grid_G,
              std::optional<int> perturb_client,
              std::optional<fs::path> out_file, std::ostream& out,
              std::ostream& err) {
  if (grid_G < 1) {
    err << "usage error: --grid must be >= 1\n";
    return kExitInput;
  }
  try {
    LoadedReport loaded = ParseReportJson(ReadFile(report_path));
    if (!loaded.converged) {
      err << "error: report did not converge; nothing to certify\n";
      return kExitInput;
    }
    SystemState state = loaded.final_state;
    if (perturb_client) {
      state = PerturbToWorstServer(state, *perturb_client,
                                   loaded.config.stability_slack);
    }
    const GridSpec grid{state.num_servers(), grid_G};
    const auto certificate =
        VerifyEpsilonNash(state, loaded.config.epsilon, grid);
    const fs::path target = out_file ? *out_file
                                     : report_path.parent_path() /
                                           "certificate.json";
    WriteFile(target, CertificateJson(certificate));
    out << fmt::format("holds={} holds_with_slack={} slack={}\n",
                       Bool(certificate.holds),
                       Bool(certificate.holds_with_slack),
                       Num(certificate.grid_slack));
    return kExitOk;
  } catch (const ResourceLimit& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::out_of_range& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InfeasibleLoad& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  }
}

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Load balancing as an epsilon-congestion game"};
  app.require_subcommand(1);

  std::string run_scenario, run_out;
  auto* run = app.add_subcommand("run", "Run the dynamics on a scenario");
  run->add_option("scenario", run_scenario, "Scenario JSON")->required();
  run->add_option("--out", run_out, "Output directory")->required();

  std::string sweep_scenario, sweep_eps, sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Run once per epsilon");
  sweep->add_option("scenario", sweep_scenario, "Scenario JSON")->required();
  sweep->add_option("--eps", sweep_eps, "Comma-separated epsilon list")
      ->required();
  sweep->add_option("--out", sweep_out, "Output directory")->required();

  std::string gen_kind, gen_out;
  int gen_m = 0, gen_n = 0;
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("gen", "Generate a scenario file");
  gen->add_option("kind", gen_kind, "high | low | gaussian-average")
      ->required();
  gen->add_option("m", gen_m, "Number of clients")->required();
  gen->add_option("n", gen_n, "Number of servers")->required();
  gen->add_option("--seed", gen_seed, "RNG seed")->required();
  gen->add_option("--out", gen_out, "Output file")->required();

  std::string verify_report, verify_out;
  int verify_grid = 100;
  std::optional<int> verify_perturb;
  auto* verify = app.add_subcommand("verify", "Certify a converged report");
  verify->add_option("report", verify_report, "report.json from run")
      ->required();
  verify->add_option("--grid", verify_grid, "Simplex grid resolution G")
      ->required();
  verify->add_option("--perturb", verify_perturb,
                     "Move this client to its worst server first");
  verify->add_option("--out", verify_out,
                     "Certificate path (default: next to the report)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*run) return CmdRun(run_scenario, run_out, out, err);
    if (*sweep) {
      std::vector<double> epsilons;
      try {
        epsilons = ParseEpsilonList(sweep_eps);
      } catch (const std::exception& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitInput;
      }
      return CmdSweep(sweep_scenario, epsilons, sweep_out, out, err);
    }
    if (*gen) {
      return CmdGen(gen_kind, gen_m, gen_n, gen_seed, gen_out, out, err);
    }
    if (*verify) {
      std::optional<fs::path> target;
      if (!verify_out.empty()) target = verify_out;
      return CmdVerify(verify_report, verify_grid, verify_perturb, target,
                       out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace lbgame::cli
