// Copyright 2026 The Grassroots Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <grassroots/cli/commands.hpp>
#include <grassroots/cli/scenario_file.hpp>
#include <grassroots/currency.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace grassroots::cli {

namespace {

std::string file_name(Query q) { return std::string(to_string(q)) + ".txt"; }

// issued == sum of holdings, for every currency in one agent's replay.
std::optional<std::string> conservation_failure(const Blocklace& local) {
  auto ledger = replay_all(local).ledger;
  std::map<AgentId, std::uint64_t> held;
  for (const auto& [key, amount] : ledger.holdings()) held[key.second] += amount;
  for (const auto& c : ledger.currencies())
    if (held[c] != ledger.issued(c)) return "currency " + c.display();
  for (const auto& [c, amount] : held)
    if (ledger.issued(c) != amount) return "currency " + c.display();
  return std::nullopt;
}

bool is_ruling(const Block& b) {
  auto* c = std::get_if<CoinOp>(&b.payload);
  return c && std::holds_alternative<coin::IssuerRuling>(*c);
}

}  // namespace

CheckedRun execute(const Scenario& scenario, const Overrides& overrides) {
  NetConfig net = scenario.net;
  if (overrides.seed) net.seed = *overrides.seed;
  auto max_ticks = overrides.max_ticks.value_or(scenario.max_ticks);

  std::set<std::string> violations;
  std::map<AgentId, std::size_t> checked_size;
  TickObserver observer;
  if (scenario.protocol == ProtocolKind::kCurrency) {
    observer = [&](std::uint64_t tick, const std::vector<Agent>& agents) {
      for (const auto& a : agents) {
        auto size = a.local().size();
        if (checked_size[a.id()] == size) continue;
        checked_size[a.id()] = size;
        if (auto bad = conservation_failure(a.local()))
          violations.insert("conservation (" + *bad + " at " + a.id().display() + ", tick " + std::to_string(tick) +
                            ")");
      }
    };
  }

  CheckedRun out{run(scenario, net, max_ticks, observer), {}, {}};
  const auto& stats = out.result.stats;
  if (stats.cordiality_violations > 0) violations.insert("cordiality");
  if (stats.locality_violations > 0) violations.insert("locality");
  if (stats.invalid_dropped > 0) violations.insert("block validity");

  auto state = final_state(out.result, scenario.protocol);
  for (const auto& [id, local] : state.locals)
    if (!replay_all(local).ledger.ruling_equivocators().empty()) violations.insert("single ruling");

  out.files["trace.tsv"] = out.result.trace.to_text();
  for (auto q : all_queries()) out.files[file_name(q)] = render(state, q);

  auto replayed = replay_trace(Trace::parse(out.files["trace.tsv"]));
  bool faithful = replayed.roster == state.roster;
  for (const auto& id : state.roster) faithful = faithful && replayed.locals.at(id) == state.locals.at(id);
  for (auto q : all_queries()) faithful = faithful && render(replayed, q) == out.files[file_name(q)];
  if (!faithful) violations.insert("replay fidelity");

  out.violations.assign(violations.begin(), violations.end());
  out.files["summary.txt"] = render_summary(scenario, out);
  return out;
}

std::string render_summary(const Scenario& scenario, const CheckedRun& checked) {
  const auto& r = checked.result;
  const auto& s = r.stats;
  std::set<std::pair<BlockHash, BlockHash>> equivocations;
  std::set<BlockHash> rulings;
  for (const auto& a : r.agents) {
    const auto& local = a.local();
    for (const auto& creator : local.creators())
      for (const auto& pair : local.detect_equivocation(creator)) equivocations.insert(pair);
    for (const auto& h : local.resolved_order())
      if (is_ruling(local.at(h))) rulings.insert(h);
  }
  std::uint64_t total = 0, worst = 0;
  for (const auto& [key, tick] : s.resolved_at) {
    auto latency = tick - s.created_at.at(key.second);
    total += latency;
    worst = std::max(worst, latency);
  }

  std::ostringstream os;
  if (!scenario.name.empty()) os << "scenario " << scenario.name << '\n';
  os << "protocol " << to_string(scenario.protocol) << '\n';
  os << "agents " << scenario.agents.size() << '\n';
  os << "ticks " << r.ticks_run << (r.quiescent ? " quiescent" : " max-ticks") << '\n';
  os << "blocks-created " << s.blocks_created << '\n';
  os << "messages-sent " << s.messages_sent << '\n';
  os << "messages-dropped " << s.messages_dropped << '\n';
  os << "messages-duplicated " << s.messages_duplicated << '\n';
  os << "messages-delivered " << s.messages_delivered << '\n';
  os << "equivocations-detected " << equivocations.size() << '\n';
  os << "rulings " << rulings.size() << '\n';
  os << "resolution-latency samples=" << s.resolved_at.size();
  if (!s.resolved_at.empty()) {
    os << " mean=" << std::fixed << std::setprecision(2)
       << static_cast<double>(total) / static_cast<double>(s.resolved_at.size()) << " max=" << worst;
  }
  os << '\n';
  if (checked.violations.empty()) {
    os << "invariants ok\n";
  } else {
    for (const auto& v : checked.violations) os << "invariant-violated " << v << '\n';
  }
  return os.str();
}

int cmd_run(const RunCommand& command, std::ostream& out, std::ostream& err) {
  Scenario scenario;
  try {
    scenario = load_scenario(command.scenario_path);
  } catch (const ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }
  CheckedRun checked;
  try {
    checked = execute(scenario, command.overrides);
  } catch (const ScenarioError& e) {
    err << command.scenario_path << ": " << e.what() << '\n';
    return kExitUsage;
  }

  std::string dir = command.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv("GRASSROOTS_OUT");
    dir = env && *env ? env : "grassroots-out";
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    err << "cannot create " << dir << ": " << ec.message() << '\n';
    return kExitIo;
  }
  for (const auto& [name, content] : checked.files) {
    std::ofstream file(std::filesystem::path(dir) / name, std::ios::binary);
    file << content;
    if (!file) {
      err << "cannot write " << name << '\n';
      return kExitIo;
    }
  }
  out << checked.files.at("summary.txt");
  if (!checked.violations.empty()) {
    for (const auto& v : checked.violations) err << "invariant violated: " << v << '\n';
    return kExitInvariant;
  }
  return kExitOk;
}

int cmd_inspect(const InspectCommand& command, std::ostream& out, std::ostream& err) {
  auto query = parse_query(command.query);
  if (!query) {
    err << "unknown query '" << command.query << "' (expected feed, ledger, graph, equivocations, order, metrics)\n";
    return kExitUsage;
  }
  std::ifstream in(command.trace_path, std::ios::binary);
  if (!in) {
    err << "cannot open " << command.trace_path << '\n';
    return kExitIo;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    auto state = replay_trace(Trace::parse(buffer.str()));
    out << render(state, *query, command.options);
  } catch (const ScenarioError& e) {
    err << command.trace_path << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const QueryError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grassroots social network simulator"};
  app.require_subcommand(1);

  RunCommand run_cmd;
  std::uint64_t seed = 0, max_ticks = 0;
  auto* run = app.add_subcommand("run", "Run a scenario and write trace and state dumps");
  run->add_option("scenario", run_cmd.scenario_path, "Scenario file")->required();
  auto* seed_opt = run->add_option("--seed", seed, "Override the network seed");
  auto* ticks_opt = run->add_option("--max-ticks", max_ticks, "Override the tick limit")->check(CLI::PositiveNumber);
  run->add_option("--out", run_cmd.out_dir, "Output directory (default $GRASSROOTS_OUT)");

  InspectCommand inspect_cmd;
  std::string agent, anchor;
  auto* inspect = app.add_subcommand("inspect", "Replay a trace and print a view of the final state");
  inspect->add_option("trace", inspect_cmd.trace_path, "Trace file written by run")->required();
  inspect->add_option("--query", inspect_cmd.query, "feed, ledger, graph, equivocations, order or metrics")
      ->required();
  auto* agent_opt = inspect->add_option("--agent", agent, "Restrict to one agent");
  auto* anchor_opt = inspect->add_option("--anchor", anchor, "Order anchor: label, hash or hash prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (run->parsed()) {
    if (*seed_opt) run_cmd.overrides.seed = seed;
    if (*ticks_opt) run_cmd.overrides.max_ticks = max_ticks;
    return cmd_run(run_cmd, out, err);
  }
  if (*agent_opt) inspect_cmd.options.agent = agent;
  if (*anchor_opt) inspect_cmd.options.anchor = anchor;
  return cmd_inspect(inspect_cmd, out, err);
}

}  // namespace grassroots::cli
