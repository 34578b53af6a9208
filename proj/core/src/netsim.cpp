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

#include <grassroots/netsim.hpp>
#include <grassroots/wire.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace grassroots {

namespace {

bool needs_target(ActionKind k) {
  switch (k) {
    case ActionKind::kFollow:
    case ActionKind::kUnfollow:
    case ActionKind::kGroupInvite:
    case ActionKind::kGroupRemove:
    case ActionKind::kOpenCredit:
    case ActionKind::kCloseCredit:
    case ActionKind::kPay:
      return true;
    default:
      return false;
  }
}

bool needs_group(ActionKind k) {
  switch (k) {
    case ActionKind::kGroupInvite:
    case ActionKind::kGroupRemove:
    case ActionKind::kGroupJoin:
    case ActionKind::kGroupLeave:
    case ActionKind::kGroupPost:
      return true;
    default:
      return false;
  }
}

bool allowed_in(ActionKind k, ProtocolKind p) {
  switch (k) {
    case ActionKind::kFollow:
    case ActionKind::kUnfollow:
    case ActionKind::kPost:
      return p == ProtocolKind::kTwitter;
    case ActionKind::kGroupCreate:
    case ActionKind::kGroupInvite:
    case ActionKind::kGroupRemove:
    case ActionKind::kGroupJoin:
    case ActionKind::kGroupLeave:
    case ActionKind::kGroupPost:
      return p == ProtocolKind::kWhatsApp;
    case ActionKind::kOpenCredit:
    case ActionKind::kCloseCredit:
    case ActionKind::kIssue:
    case ActionKind::kPay:
    case ActionKind::kRedeem:
      return p == ProtocolKind::kCurrency;
    case ActionKind::kByzantine:
      return true;
  }
  return false;
}

std::string where(const Action& a) { return a.line > 0 ? "line " + std::to_string(a.line) + ": " : ""; }

void validate_net(const NetConfig& net, const std::set<AgentId>& roster) {
  if (!(net.drop >= 0.0 && net.drop <= 1.0)) throw ScenarioError("drop probability outside [0,1]");
  if (!(net.duplicate >= 0.0 && net.duplicate <= 1.0)) throw ScenarioError("duplicate probability outside [0,1]");
  if (net.delay_min < 1 || net.delay_min > net.delay_max) throw ScenarioError("delay range must satisfy 1 <= min <= max");
  for (const auto& r : net.roaming) {
    if (!roster.contains(r.agent)) throw ScenarioError("roaming event for unknown agent " + r.agent.display());
    if (r.address.empty()) throw ScenarioError("roaming event with empty address");
  }
}

Payload payload_for(const Action& a, const std::map<std::string, BlockHash>& labels) {
  auto label = [&](const std::string& l) { return labels.at(l); };
  switch (a.kind) {
    case ActionKind::kFollow:
      return Follow{a.target};
    case ActionKind::kUnfollow:
      return Unfollow{a.target};
    case ActionKind::kPost:
      return FeedPost{a.text, std::nullopt};
    case ActionKind::kGroupCreate:
      return GroupOp{GroupOpKind::kCreate, BlockHash{}, a.agent};
    case ActionKind::kGroupInvite:
      return GroupOp{GroupOpKind::kInvite, label(a.group_label), a.target};
    case ActionKind::kGroupRemove:
      return GroupOp{GroupOpKind::kRemove, label(a.group_label), a.target};
    case ActionKind::kGroupJoin:
      return GroupOp{GroupOpKind::kJoin, label(a.group_label), a.agent};
    case ActionKind::kGroupLeave:
      return GroupOp{GroupOpKind::kLeave, label(a.group_label), a.agent};
    case ActionKind::kGroupPost:
      return FeedPost{a.text, label(a.group_label)};
    case ActionKind::kOpenCredit:
      return CoinOp{coin::OpenCredit{a.target}};
    case ActionKind::kCloseCredit:
      return CoinOp{coin::CloseCredit{a.target}};
    case ActionKind::kIssue:
      return CoinOp{coin::Issue{a.amount}};
    case ActionKind::kPay:
      return CoinOp{coin::Pay{a.target, a.currency, a.amount}};
    case ActionKind::kRedeem:
      return CoinOp{coin::RedeemRequest{a.currency, a.amount, label(a.paired_label)}};
    case ActionKind::kByzantine:
      break;
  }
  throw ScenarioError("action creates no block");
}

struct InFlight {
  AgentId from;
  std::string from_address;
  std::string to_address;
  std::string to_name;
  Bytes batch;
};

class Simulator {
 public:
  Simulator(const Scenario& scenario, const NetConfig& net, const TickObserver& observer)
      : scenario_(scenario), net_(net), observer_(observer), rng_(net.seed) {
    std::map<AgentId, std::string> directory;
    for (const auto& a : scenario.agents) directory[a.id] = a.address;
    for (const auto& a : scenario.agents) {
      result_.agents.emplace_back(a.id, scenario.protocol, a.address, directory, scenario.dissemination);
      index_[a.id] = result_.agents.size() - 1;
    }
    for (const auto& a : scenario.actions) last_event_ = std::max(last_event_, a.tick);
    for (const auto& r : net.roaming) last_event_ = std::max(last_event_, r.tick);

    auto& h = result_.trace.header;
    h.push_back("grassroots-trace 1");
    if (!scenario.name.empty()) h.push_back("scenario " + scenario.name);
    h.push_back("protocol " + std::string(to_string(scenario.protocol)));
    h.push_back("seed " + std::to_string(net.seed));
    for (const auto& a : scenario.agents) h.push_back("agent " + a.id.hex() + " " + a.id.display() + " " + a.address);
  }

  RunResult run(std::uint64_t max_ticks) {
    for (std::uint64_t t = 0; t < max_ticks; ++t) {
      now_ = t;
      bool emitted = false;
      if (t == 0)
        for (auto& agent : result_.agents) record_created(agent, [&] { agent.disclose(); });
      roam();
      scripted();
      deliver();
      for (auto& agent : result_.agents) emitted = step(agent) || emitted;
      result_.ticks_run = t + 1;
      if (observer_) observer_(t, result_.agents);
      if (!emitted && queue_.empty() && t >= last_event_) {
        result_.quiescent = true;
        break;
      }
    }
    for (const auto& [label, h] : result_.labels) result_.trace.footer.push_back("label " + label + " " + h.hex());
    for (const auto& agent : result_.agents) result_.stats.invalid_dropped += agent.invalid_dropped();
    return std::move(result_);
  }

 private:
  Agent& agent(const AgentId& id) { return result_.agents[index_.at(id)]; }

  void event(std::string kind, std::string from, std::string to, std::string summary) {
    result_.trace.events.push_back({now_, std::move(kind), std::move(from), std::move(to), std::move(summary)});
  }

  static std::string endpoint(const AgentId& id, const std::string& address) { return id.display() + "@" + address; }

  template <typename F>
  std::optional<BlockHash> record_created(Agent& a, F&& body, const std::string& label = {}) {
    auto before = a.local().blocks_by(a.id());
    std::optional<BlockHash> made;
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
    } else {
      made = body();
    }
    auto after = a.local().blocks_by(a.id());
    std::vector<BlockHash> fresh;
    for (const auto& h : after)
      if (!before.contains(h)) fresh.push_back(h);
    std::sort(fresh.begin(), fresh.end(), [&](const BlockHash& x, const BlockHash& y) {
      auto sx = a.local().at(x).seq, sy = a.local().at(y).seq;
      return sx != sy ? sx < sy : x < y;
    });
    for (const auto& h : fresh) {
      const auto& b = a.local().at(h);
      std::string summary = "hash=" + h.hex() + " block=" + to_hex(encode_block(b));
      if (made && *made == h && !label.empty()) summary += " label=" + label;
      summary += " :: " + debug_string(b);
      event("block-created", a.id().display(), "-", std::move(summary));
      result_.stats.created_at.emplace(h, now_);
      ++result_.stats.blocks_created;
    }
    return made;
  }

  void roam() {
    for (const auto& r : net_.roaming) {
      if (r.tick != now_) continue;
      auto& a = agent(r.agent);
      auto old = a.address();
      a.change_address(r.address);
      event("address-change", a.id().display(), r.address, "old=" + old);
    }
  }

  void scripted() {
    for (const auto& action : scenario_.actions) {
      if (action.tick != now_) continue;
      auto& a = agent(action.agent);
      if (action.kind == ActionKind::kByzantine) {
        a.set_behavior(action.behavior);
        continue;
      }
      auto payload = payload_for(action, result_.labels);
      auto h = record_created(a, [&] { return a.act(payload); }, action.label);
      if (!action.label.empty()) result_.labels[action.label] = *h;
    }
  }

  void deliver() {
    while (!queue_.empty() && queue_.begin()->first.first <= now_) {
      auto node = queue_.extract(queue_.begin());
      auto id = node.key().second;
      auto& msg = node.mapped();
      auto from = endpoint(msg.from, msg.from_address);
      auto to = msg.to_name + "@" + msg.to_address;
      auto target = std::find_if(result_.agents.begin(), result_.agents.end(),
                                 [&](const Agent& a) { return a.address() == msg.to_address; });
      if (target == result_.agents.end()) {
        event("drop", from, to, "msg=" + std::to_string(id) + " reason=stale-address");
        ++result_.stats.messages_dropped;
        continue;
      }
      auto blocks = decode_batch(msg.batch);
      std::string hashes;
      for (const auto& b : blocks) {
        if (!hashes.empty()) hashes += ',';
        hashes += block_hash(b).hex();
      }
      event("deliver", from, endpoint(target->id(), target->address()),
            "msg=" + std::to_string(id) + " blocks=" + hashes);
      auto received = target->on_receive(msg.from, msg.from_address, blocks);
      ++result_.stats.messages_delivered;
      result_.stats.blocks_delivered += blocks.size();
      for (const auto& h : received.resolved)
        if (target->local().at(h).creator != target->id())
          result_.stats.resolved_at.emplace(std::pair{target->id(), h}, now_);
    }
  }

  bool step(Agent& a) {
    std::vector<Outgoing> out;
    record_created(a, [&] { out = a.tick(); });
    auto contacts = a.graph().contacts_of(a.id(), scenario_.protocol);
    for (auto& o : out) {
      for (const auto& b : o.blocks)
        if (a.acked_by(o.to, block_hash(b))) ++result_.stats.cordiality_violations;
      if (!contacts.contains(o.to)) ++result_.stats.locality_violations;
      send(a, o);
    }
    return !out.empty();
  }

  void send(const Agent& a, const Outgoing& o) {
    auto id = next_message_++;
    InFlight msg{a.id(), a.address(), o.address, o.to.display(), encode_batch(o.blocks)};
    auto from = endpoint(a.id(), a.address());
    auto to = endpoint(o.to, o.address);
    event("send", from, to, "msg=" + std::to_string(id) + " blocks=" + std::to_string(o.blocks.size()));
    ++result_.stats.messages_sent;
    if (rng_.chance(net_.drop)) {
      event("drop", from, to, "msg=" + std::to_string(id) + " reason=loss");
      ++result_.stats.messages_dropped;
      return;
    }
    auto when = now_ + rng_.between(net_.delay_min, net_.delay_max);
    if (rng_.chance(net_.duplicate)) {
      auto copy = next_message_++;
      event("duplicate", from, to, "msg=" + std::to_string(id) + " copy=" + std::to_string(copy));
      ++result_.stats.messages_duplicated;
      queue_.emplace(std::pair{now_ + rng_.between(net_.delay_min, net_.delay_max), copy}, msg);
    }
    queue_.emplace(std::pair{when, id}, std::move(msg));
  }

  const Scenario& scenario_;
  const NetConfig& net_;
  const TickObserver& observer_;
  SimRng rng_;
  RunResult result_;
  std::map<AgentId, std::size_t> index_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, InFlight> queue_;
  std::uint64_t next_message_ = 0;
  std::uint64_t now_ = 0;
  std::uint64_t last_event_ = 0;
};

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::string name_of(const std::string& endpoint) { return endpoint.substr(0, endpoint.find('@')); }

std::string field_value(const std::string& summary, std::string_view key) {
  for (const auto& token : split(summary, ' ')) {
    if (token == "::") break;
    if (token.size() > key.size() && token.compare(0, key.size(), key) == 0 && token[key.size()] == '=')
      return token.substr(key.size() + 1);
  }
  return {};
}

}  // namespace

void validate(const Scenario& scenario) {
  if (scenario.agents.empty()) throw ScenarioError("scenario has no agents");
  std::set<AgentId> roster;
  std::set<std::string> names, addresses;
  for (const auto& a : scenario.agents) {
    if (a.id.is_zero()) throw ScenarioError("agent with empty id");
    if (!roster.insert(a.id).second) throw ScenarioError("duplicate agent " + a.id.display());
    if (!names.insert(a.id.display()).second) throw ScenarioError("ambiguous agent name " + a.id.display());
    if (a.address.empty() || a.address.find_first_of(" \t@") != std::string::npos)
      throw ScenarioError("bad address for agent " + a.id.display());
    if (!addresses.insert(a.address).second) throw ScenarioError("duplicate address " + a.address);
  }
  try {
    scenario.faults.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(e.what());
  }
  if (scenario.faults.n != scenario.agents.size()) throw ScenarioError("fault config n differs from roster size");
  validate_net(scenario.net, roster);
  if (scenario.dissemination.batch_cap == 0 || scenario.dissemination.disclosure_period == 0)
    throw ScenarioError("dissemination batch cap and disclosure period must be positive");

  std::map<std::string, std::pair<std::uint64_t, ActionKind>> labels;
  std::uint64_t previous_tick = 0;
  for (const auto& a : scenario.actions) {
    auto at = where(a);
    if (a.tick < previous_tick) throw ScenarioError(at + "actions out of tick order");
    previous_tick = a.tick;
    if (!roster.contains(a.agent)) throw ScenarioError(at + "unknown agent " + a.agent.display());
    if (!allowed_in(a.kind, scenario.protocol))
      throw ScenarioError(at + "action not available under protocol " + std::string(to_string(scenario.protocol)));
    if (needs_target(a.kind) && !roster.contains(a.target))
      throw ScenarioError(at + "unknown agent " + a.target.display());
    if (needs_target(a.kind) && a.target == a.agent) throw ScenarioError(at + "action targets its own agent");
    if ((a.kind == ActionKind::kPay || a.kind == ActionKind::kRedeem) && !roster.contains(a.currency))
      throw ScenarioError(at + "unknown currency " + a.currency.display());
    if ((a.kind == ActionKind::kIssue || a.kind == ActionKind::kPay || a.kind == ActionKind::kRedeem) && a.amount == 0)
      throw ScenarioError(at + "amount must be positive");
    if ((a.kind == ActionKind::kPost || a.kind == ActionKind::kGroupPost) && !wire::is_valid_utf8(a.text))
      throw ScenarioError(at + "post text is not UTF-8");
    if (a.kind == ActionKind::kByzantine && a.behavior == ByzantineBehavior::kNone)
      throw ScenarioError(at + "unknown byzantine behavior");
    auto resolve = [&](const std::string& label, ActionKind want, const char* what) {
      auto it = labels.find(label);
      if (it == labels.end()) throw ScenarioError(at + "undefined label " + label);
      if (it->second.second != want) throw ScenarioError(at + "label " + label + " is not a " + what);
    };
    if (needs_group(a.kind)) resolve(a.group_label, ActionKind::kGroupCreate, "group");
    if (a.kind == ActionKind::kRedeem) resolve(a.paired_label, ActionKind::kPay, "payment");
    if (!a.label.empty()) {
      if (a.kind == ActionKind::kByzantine) throw ScenarioError(at + "byzantine actions cannot be labelled");
      if (!labels.emplace(a.label, std::pair{a.tick, a.kind}).second)
        throw ScenarioError(at + "duplicate label " + a.label);
    }
  }
}

Scenario inject_byzantine(Scenario scenario, const AgentId& agent, ByzantineBehavior behavior) {
  if (behavior == ByzantineBehavior::kNone) throw ScenarioError("unknown byzantine behavior");
  if (std::none_of(scenario.agents.begin(), scenario.agents.end(), [&](const AgentSpec& a) { return a.id == agent; }))
    throw ScenarioError("unknown agent " + agent.display());
  Action a;
  a.tick = 0;
  a.agent = agent;
  a.kind = ActionKind::kByzantine;
  a.behavior = behavior;
  scenario.actions.insert(scenario.actions.begin(), std::move(a));
  return scenario;
}

Scenario inject_byzantine(Scenario scenario, const AgentId& agent, std::string_view behavior) {
  auto parsed = parse_byzantine_behavior(behavior);
  if (!parsed) throw ScenarioError("unknown byzantine behavior " + std::string(behavior));
  return inject_byzantine(std::move(scenario), agent, *parsed);
}

std::string Trace::to_text() const {
  std::ostringstream os;
  for (const auto& h : header) os << "# " << h << '\n';
  for (const auto& e : events)
    os << e.tick << '\t' << e.kind << '\t' << e.from << '\t' << e.to << '\t' << e.summary << '\n';
  for (const auto& f : footer) os << "# " << f << '\n';
  return os.str();
}

Trace Trace::parse(std::string_view text) {
  Trace trace;
  std::size_t number = 0;
  for (const auto& line : split(text, '\n')) {
    ++number;
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      (trace.events.empty() ? trace.header : trace.footer).push_back(line.substr(2));
      continue;
    }
    auto cols = split(line, '\t');
    if (cols.size() != 5) throw ScenarioError("trace line " + std::to_string(number) + ": expected 5 columns");
    TraceEvent e;
    try {
      std::size_t used = 0;
      e.tick = std::stoull(cols[0], &used);
      if (used != cols[0].size()) throw std::invalid_argument("tick");
    } catch (const std::exception&) {
      throw ScenarioError("trace line " + std::to_string(number) + ": bad tick");
    }
    e.kind = cols[1];
    e.from = cols[2];
    e.to = cols[3];
    e.summary = cols[4];
    trace.events.push_back(std::move(e));
  }
  return trace;
}

const Agent& RunResult::agent(const AgentId& id) const {
  for (const auto& a : agents)
    if (a.id() == id) return a;
  throw ScenarioError("unknown agent " + id.display());
}

RunResult run(const Scenario& scenario, const NetConfig& net, std::uint64_t max_ticks, const TickObserver& observer) {
  validate(scenario);
  std::set<AgentId> roster;
  for (const auto& a : scenario.agents) roster.insert(a.id);
  validate_net(net, roster);
  std::set<std::string> addresses;
  for (const auto& a : scenario.agents) addresses.insert(a.address);
  for (const auto& r : net.roaming)
    if (!addresses.insert(r.address).second) throw ScenarioError("roaming reuses address " + r.address);
  Simulator sim(scenario, net, observer);
  return sim.run(max_ticks);
}

namespace {

ReplayedRun replay_unchecked(const Trace& trace) {
  ReplayedRun out;
  std::map<std::string, AgentId> by_name;
  bool protocol_seen = false;
  auto bad = [](const std::string& why) { return ScenarioError("trace: " + why); };
  for (const auto& h : trace.header) {
    auto words = split(h, ' ');
    if (words[0] == "protocol" && words.size() == 2) {
      auto kind = parse_protocol_kind(words[1]);
      if (!kind) throw bad("unknown protocol " + words[1]);
      out.protocol = *kind;
      protocol_seen = true;
    } else if (words[0] == "agent" && words.size() == 4) {
      AgentId id;
      id.bytes = AgentId::from_hex_string(words[1]).bytes;
      by_name[words[2]] = id;
      out.roster.push_back(id);
      out.locals[id];
    }
  }
  if (!protocol_seen || out.roster.empty()) throw bad("missing header");
  for (const auto& f : trace.footer) {
    auto words = split(f, ' ');
    if (words[0] != "label" || words.size() != 3) continue;
    out.labels[words[1]] = BlockHash::from_hex(words[2]);
  }

  auto agent_named = [&](const std::string& endpoint) -> Blocklace& {
    auto it = by_name.find(name_of(endpoint));
    if (it == by_name.end()) throw bad("unknown agent " + endpoint);
    return out.locals[it->second];
  };
  std::map<BlockHash, Block> created;
  for (const auto& e : trace.events) {
    if (e.kind == "block-created") {
      auto block = decode_block(from_hex(field_value(e.summary, "block")));
      auto h = block_hash(block);
      created.emplace(h, block);
      agent_named(e.from).insert(block);
    } else if (e.kind == "deliver") {
      auto& local = agent_named(e.to);
      auto list = field_value(e.summary, "blocks");
      if (list.empty()) continue;
      for (const auto& hex : split(list, ',')) {
        auto h = BlockHash::from_hex(hex);
        if (!created.contains(h)) throw bad("delivery of unknown block " + hex);
        local.insert(created.at(h));
      }
    }
  }
  return out;
}

}  // namespace

ReplayedRun replay_trace(const Trace& trace) {
  try {
    return replay_unchecked(trace);
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& e) {
    throw ScenarioError(std::string("trace: ") + e.what());
  }
}

}  // namespace grassroots
