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

#include <grassroots/cli/report.hpp>
#include <grassroots/currency.hpp>
#include <grassroots/ordering.hpp>

#include <sstream>

namespace grassroots::cli {

namespace {

std::string join_names(const std::set<AgentId>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ',';
    out += id.display();
  }
  return out.empty() ? "-" : out;
}

void feed_section(std::ostream& os, const ReplayedRun& state, const Blocklace& local, const AgentId& viewer) {
  auto latest = local.latest_by(viewer);
  if (!latest) {
    os << "(no blocks)\n";
    return;
  }
  switch (state.protocol) {
    case ProtocolKind::kTwitter:
      for (const auto& author : state.roster) {
        auto feed = assemble_feed(local, author, *latest);
        if (feed.posts.empty()) continue;
        os << "-- feed " << author.display() << '\n' << export_feed(feed);
      }
      break;
    case ProtocolKind::kWhatsApp: {
      auto graph = derive_graph_at(local, *latest);
      for (const auto& [id, group] : graph.groups()) {
        os << "-- group " << id.prefix() << " founder=" << group.founder.display() << '\n'
           << export_feed(assemble_group_feed(local, id, *latest));
      }
      break;
    }
    case ProtocolKind::kCurrency:
      break;
  }
}

void graph_section(std::ostream& os, const ReplayedRun& state, const Blocklace& local, const AgentId& viewer) {
  auto graph = derive_graph_all(local);
  for (const auto& [from, to] : graph.follow_edges())
    os << "follow " << from.display() << " -> " << to.display() << '\n';
  for (const auto& [id, g] : graph.groups()) {
    std::set<AgentId> pending;
    for (const auto& q : g.invited)
      if (!g.members.contains(q)) pending.insert(q);
    os << "group " << id.prefix() << " founder=" << g.founder.display() << " members=" << join_names(g.members)
       << " invited=" << join_names(pending) << '\n';
  }
  for (const auto& p : state.roster)
    for (const auto& q : graph.credit().offered_by(p))
      os << "credit " << p.display() << " -> " << q.display() << (graph.credit().mutual(p, q) ? " mutual" : "")
         << '\n';
  os << "friends " << join_names(graph.friends_of(viewer, state.protocol)) << '\n';
  for (const auto& d : graph.diagnostics()) os << "diagnostic " << d.block.prefix() << ' ' << d.message << '\n';
}

void equivocation_section(std::ostream& os, const Blocklace& local) {
  for (const auto& creator : local.creators())
    for (const auto& [a, b] : local.detect_equivocation(creator))
      os << creator.display() << '\t' << a.prefix() << '\t' << b.prefix() << '\n';
}

void ledger_section(std::ostream& os, const Blocklace& local) {
  auto replay = replay_all(local);
  os << dump_ledger(replay.ledger);
  for (const auto& h : replay.exclusions) os << "excluded " << h.prefix() << '\n';
  for (const auto& d : replay.ledger.diagnostics()) os << "diagnostic " << d.block.prefix() << ' ' << d.message << '\n';
}

void metrics_section(std::ostream& os, const ReplayedRun& state, const Blocklace& local) {
  auto replay = replay_all(local);
  for (const auto& [currency, s] : supply_metrics(replay.ledger))
    os << "supply " << currency.display() << " issued=" << s.issued << " circulation=" << s.in_circulation
       << " issuer=" << s.held_by_issuer << '\n';
  for (const auto& p : state.roster) os << "net-worth " << p.display() << ' ' << net_worth(replay.ledger, p) << '\n';
  os << "discredited " << join_names(discredited_issuers(local, replay.ledger)) << '\n';
  os << "blocks " << local.resolved_size() << " pending " << local.size() - local.resolved_size() << '\n';
}

void order_section(std::ostream& os, const ReplayedRun& state, const Blocklace& local, const AgentId& viewer,
                   const std::optional<std::string>& anchor_text) {
  std::optional<BlockHash> anchor;
  if (anchor_text) {
    anchor = resolve_anchor(state, local, *anchor_text);
    if (!local.is_resolved(*anchor)) {
      os << "(anchor not held)\n";
      return;
    }
  } else {
    anchor = local.latest_by(viewer);
    if (!anchor) {
      os << "(no blocks)\n";
      return;
    }
  }
  os << "anchor " << anchor->hex() << '\n';
  std::size_t i = 0;
  for (const auto& h : order_cone(local, *anchor).sequence) os << i++ << '\t' << debug_string(local.at(h)) << '\n';
}

}  // namespace

std::optional<Query> parse_query(std::string_view text) {
  for (auto q : all_queries())
    if (to_string(q) == text) return q;
  return std::nullopt;
}

std::string_view to_string(Query q) {
  switch (q) {
    case Query::kFeed:
      return "feed";
    case Query::kLedger:
      return "ledger";
    case Query::kGraph:
      return "graph";
    case Query::kEquivocations:
      return "equivocations";
    case Query::kOrder:
      return "order";
    case Query::kMetrics:
      return "metrics";
  }
  return "unknown";
}

const std::vector<Query>& all_queries() {
  static const std::vector<Query> queries{Query::kFeed,          Query::kLedger, Query::kGraph,
                                          Query::kEquivocations, Query::kOrder,  Query::kMetrics};
  return queries;
}

ReplayedRun final_state(const RunResult& run, ProtocolKind protocol) {
  ReplayedRun state;
  state.protocol = protocol;
  state.labels = run.labels;
  for (const auto& a : run.agents) {
    state.roster.push_back(a.id());
    state.locals.emplace(a.id(), a.local());
  }
  return state;
}

BlockHash resolve_anchor(const ReplayedRun& state, const Blocklace& local, const std::string& anchor) {
  if (auto it = state.labels.find(anchor); it != state.labels.end()) return it->second;
  std::optional<BlockHash> match;
  for (const auto& h : local.stored()) {
    if (h.hex().rfind(anchor, 0) != 0) continue;
    if (match) throw QueryError("ambiguous anchor '" + anchor + "'");
    match = h;
  }
  if (!match) throw QueryError("unknown anchor '" + anchor + "'");
  return *match;
}

std::string render(const ReplayedRun& state, Query query, const QueryOptions& options) {
  std::vector<AgentId> viewers = state.roster;
  if (options.agent) {
    auto it = std::find_if(state.roster.begin(), state.roster.end(),
                           [&](const AgentId& id) { return id.display() == *options.agent; });
    if (it == state.roster.end()) throw QueryError("unknown agent '" + *options.agent + "'");
    viewers = {*it};
  }
  std::ostringstream os;
  for (const auto& viewer : viewers) {
    const auto& local = state.locals.at(viewer);
    os << "== " << viewer.display() << '\n';
    switch (query) {
      case Query::kFeed:
        feed_section(os, state, local, viewer);
        break;
      case Query::kLedger:
        ledger_section(os, local);
        break;
      case Query::kGraph:
        graph_section(os, state, local, viewer);
        break;
      case Query::kEquivocations:
        equivocation_section(os, local);
        break;
      case Query::kOrder:
        order_section(os, state, local, viewer, options.anchor);
        break;
      case Query::kMetrics:
        metrics_section(os, state, local);
        break;
    }
  }
  return os.str();
}

}  // namespace grassroots::cli
