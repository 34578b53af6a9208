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

#include <grassroots/cli/scenario_file.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace grassroots::cli {

namespace {

struct Line {
  int number = 0;
  std::string text;                 // comment stripped, trimmed
  std::vector<std::string> words;   // whitespace separated
  std::vector<std::size_t> starts;  // offset of each word in text
};

Line tokenize(int number, std::string_view raw) {
  Line line;
  line.number = number;
  auto hash = raw.find('#');
  if (hash != std::string_view::npos) raw = raw.substr(0, hash);
  auto first = raw.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return line;
  auto last = raw.find_last_not_of(" \t\r");
  line.text = std::string(raw.substr(first, last - first + 1));
  std::size_t i = 0;
  while (i < line.text.size()) {
    if (line.text[i] == ' ' || line.text[i] == '\t') {
      ++i;
      continue;
    }
    auto j = line.text.find_first_of(" \t", i);
    if (j == std::string::npos) j = line.text.size();
    line.starts.push_back(i);
    line.words.push_back(line.text.substr(i, j - i));
    i = j;
  }
  return line;
}

class Parser {
 public:
  explicit Parser(std::string file) : file_(std::move(file)) {}

  Scenario parse(std::string_view text) {
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      ++number;
      auto line = tokenize(number, text.substr(pos, end - pos));
      if (!line.words.empty()) directive(line);
      if (end == text.size()) break;
      pos = end + 1;
    }
    if (!protocol_seen_) fail(number, "missing protocol directive");
    if (scenario_.agents.empty()) fail(number, "no agents declared");
    if (!faults_seen_) scenario_.faults = {static_cast<std::uint32_t>(scenario_.agents.size()), 0, true};
    try {
      validate(scenario_);
    } catch (const ScenarioError& e) {
      // Action errors carry "line N: "; lift that into the location.
      std::string message = e.what();
      int at = number;
      if (message.rfind("line ", 0) == 0) {
        auto colon = message.find(": ");
        at = std::stoi(message.substr(5, colon - 5));
        message = message.substr(colon + 2);
      }
      fail(at, message);
    }
    return std::move(scenario_);
  }

 private:
  [[noreturn]] void fail(int line, const std::string& message) const { throw ParseError(file_, line, message); }

  void directive(const Line& line) {
    const auto& w = line.words;
    const auto& d = w[0];
    if (d == "scenario") {
      expect_count(line, 2);
      once(line, "scenario");
      scenario_.name = w[1];
    } else if (d == "protocol") {
      expect_count(line, 2);
      once(line, "protocol");
      auto kind = parse_protocol_kind(w[1]);
      if (!kind) fail(line.number, "unknown protocol '" + w[1] + "'");
      scenario_.protocol = *kind;
      protocol_seen_ = true;
    } else if (d == "agent") {
      expect_count(line, 3);
      if (started_) fail(line.number, "agents must be declared before roam and at lines");
      auto id = agent_name(line, w[1], false);
      if (names_.contains(w[1])) fail(line.number, "duplicate agent '" + w[1] + "'");
      names_[w[1]] = id;
      scenario_.agents.push_back({id, w[2]});
    } else if (d == "faults") {
      once(line, "faults");
      auto kv = pairs(line, 1, {"n", "f", "classical"});
      scenario_.faults.n = static_cast<std::uint32_t>(number(line, require(line, kv, "n"), 1, 1u << 20));
      scenario_.faults.f = static_cast<std::uint32_t>(number(line, require(line, kv, "f"), 0, 1u << 20));
      if (kv.contains("classical")) scenario_.faults.classical = boolean(line, kv["classical"]);
      faults_seen_ = true;
    } else if (d == "net") {
      once(line, "net");
      auto kv = pairs(line, 1, {"drop", "dup", "delay", "seed"});
      auto& net = scenario_.net;
      if (kv.contains("drop")) net.drop = probability(line, kv["drop"]);
      if (kv.contains("dup")) net.duplicate = probability(line, kv["dup"]);
      if (kv.contains("seed")) net.seed = number(line, kv["seed"], 0, UINT64_MAX);
      if (kv.contains("delay")) {
        const auto& r = kv["delay"];
        auto dots = r.find("..");
        if (dots == std::string::npos) {
          net.delay_min = net.delay_max = static_cast<std::uint32_t>(number(line, r, 1, 1000));
        } else {
          net.delay_min = static_cast<std::uint32_t>(number(line, r.substr(0, dots), 1, 1000));
          net.delay_max = static_cast<std::uint32_t>(number(line, r.substr(dots + 2), 1, 1000));
        }
        if (net.delay_min > net.delay_max) fail(line.number, "delay range is empty");
      }
    } else if (d == "max-ticks") {
      expect_count(line, 2);
      once(line, "max-ticks");
      scenario_.max_ticks = number(line, w[1], 1, 1'000'000);
    } else if (d == "dissemination") {
      once(line, "dissemination");
      auto kv = pairs(line, 1, {"batch", "disclose-every", "resend", "announce"});
      auto& c = scenario_.dissemination;
      if (kv.contains("batch")) c.batch_cap = number(line, kv["batch"], 1, 1'000'000);
      if (kv.contains("disclose-every"))
        c.disclosure_period = static_cast<std::uint32_t>(number(line, kv["disclose-every"], 1, 1000));
      if (kv.contains("resend")) c.resend_interval = static_cast<std::uint32_t>(number(line, kv["resend"], 0, 1000));
      if (kv.contains("announce"))
        c.announce_ticks = static_cast<std::uint32_t>(number(line, kv["announce"], 1, 1000));
    } else if (d == "roam") {
      expect_count(line, 4);
      started_ = true;
      auto tick = number(line, w[1], 0, 1'000'000);
      scenario_.net.roaming.push_back({tick, agent_name(line, w[2], true), w[3]});
    } else if (d == "at") {
      started_ = true;
      action(line);
    } else {
      fail(line.number, "unknown directive '" + d + "'");
    }
  }

  void action(const Line& line) {
    const auto& w = line.words;
    if (w.size() < 4) fail(line.number, "expected: at TICK AGENT [as=LABEL] ACTION ...");
    Action a;
    a.line = line.number;
    a.tick = number(line, w[1], 0, 1'000'000);
    if (a.tick < last_tick_) fail(line.number, "at lines must be in non-decreasing tick order");
    last_tick_ = a.tick;
    a.agent = agent_name(line, w[2], true);
    std::size_t i = 3;
    if (w[i].rfind("as=", 0) == 0) {
      a.label = w[i].substr(3);
      if (a.label.empty()) fail(line.number, "empty label");
      ++i;
      if (i >= w.size()) fail(line.number, "missing action");
    }
    const auto& verb = w[i];
    std::size_t argc = w.size() - i - 1;
    auto args = [&](std::size_t n) {
      if (argc != n) fail(line.number, verb + " takes " + std::to_string(n) + " argument(s)");
    };
    auto rest = [&](std::size_t from) {
      if (i + from >= w.size()) fail(line.number, verb + " needs text");
      return line.text.substr(line.starts[i + from]);
    };
    auto arg = [&](std::size_t k) -> const std::string& { return w[i + k]; };

    if (verb == "follow" || verb == "unfollow") {
      args(1);
      a.kind = verb == "follow" ? ActionKind::kFollow : ActionKind::kUnfollow;
      a.target = agent_name(line, arg(1), true);
    } else if (verb == "post") {
      a.kind = ActionKind::kPost;
      a.text = rest(1);
    } else if (verb == "group-create") {
      args(0);
      a.kind = ActionKind::kGroupCreate;
    } else if (verb == "group-invite" || verb == "group-remove") {
      args(2);
      a.kind = verb == "group-invite" ? ActionKind::kGroupInvite : ActionKind::kGroupRemove;
      a.group_label = arg(1);
      a.target = agent_name(line, arg(2), true);
    } else if (verb == "group-join" || verb == "group-leave") {
      args(1);
      a.kind = verb == "group-join" ? ActionKind::kGroupJoin : ActionKind::kGroupLeave;
      a.group_label = arg(1);
    } else if (verb == "group-post") {
      a.kind = ActionKind::kGroupPost;
      if (argc < 2) fail(line.number, "group-post needs a group label and text");
      a.group_label = arg(1);
      a.text = rest(2);
    } else if (verb == "open-credit" || verb == "close-credit") {
      args(1);
      a.kind = verb == "open-credit" ? ActionKind::kOpenCredit : ActionKind::kCloseCredit;
      a.target = agent_name(line, arg(1), true);
    } else if (verb == "issue") {
      args(1);
      a.kind = ActionKind::kIssue;
      a.amount = number(line, arg(1), 1, UINT64_MAX);
    } else if (verb == "pay") {
      args(3);
      a.kind = ActionKind::kPay;
      a.target = agent_name(line, arg(1), true);
      a.currency = agent_name(line, arg(2), true);
      a.amount = number(line, arg(3), 1, UINT64_MAX);
    } else if (verb == "redeem") {
      args(3);
      a.kind = ActionKind::kRedeem;
      a.currency = agent_name(line, arg(1), true);
      a.amount = number(line, arg(2), 1, UINT64_MAX);
      a.paired_label = arg(3);
    } else if (verb == "byzantine") {
      args(1);
      a.kind = ActionKind::kByzantine;
      auto behavior = parse_byzantine_behavior(arg(1));
      if (!behavior) fail(line.number, "unknown byzantine behavior '" + arg(1) + "'");
      a.behavior = *behavior;
    } else {
      fail(line.number, "unknown action '" + verb + "'");
    }
    scenario_.actions.push_back(std::move(a));
  }

  AgentId agent_name(const Line& line, const std::string& name, bool declared) {
    if (declared) {
      auto it = names_.find(name);
      if (it == names_.end()) fail(line.number, "unknown agent '" + name + "'");
      return it->second;
    }
    if (name.size() > AgentId::kSize) fail(line.number, "agent name longer than 32 bytes");
    for (char c : name)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
        fail(line.number, "agent names use [A-Za-z0-9_-]");
    return AgentId::from_name(name);
  }

  void expect_count(const Line& line, std::size_t n) const {
    if (line.words.size() != n)
      fail(line.number, line.words[0] + " takes " + std::to_string(n - 1) + " argument(s)");
  }

  void once(const Line& line, const std::string& key) {
    if (!seen_.insert(key).second) fail(line.number, "duplicate " + key + " directive");
  }

  std::map<std::string, std::string> pairs(const Line& line, std::size_t from, const std::set<std::string>& keys) {
    std::map<std::string, std::string> out;
    for (std::size_t i = from; i < line.words.size(); ++i) {
      const auto& word = line.words[i];
      auto eq = word.find('=');
      if (eq == std::string::npos || eq == 0) fail(line.number, "expected key=value, got '" + word + "'");
      auto key = word.substr(0, eq);
      if (!keys.contains(key)) fail(line.number, "unknown key '" + key + "'");
      if (!out.emplace(key, word.substr(eq + 1)).second) fail(line.number, "duplicate key '" + key + "'");
    }
    return out;
  }

  std::string require(const Line& line, const std::map<std::string, std::string>& kv, const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end()) fail(line.number, "missing key '" + key + "'");
    return it->second;
  }

  std::uint64_t number(const Line& line, const std::string& text, std::uint64_t lo, std::uint64_t hi) const {
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || end != text.data() + text.size()) fail(line.number, "bad number '" + text + "'");
    if (v < lo || v > hi) fail(line.number, "number out of range '" + text + "'");
    return v;
  }

  double probability(const Line& line, const std::string& text) const {
    double v = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || end != text.data() + text.size()) fail(line.number, "bad probability '" + text + "'");
    if (!(v >= 0.0 && v <= 1.0)) fail(line.number, "probability outside [0,1]");
    return v;
  }

  bool boolean(const Line& line, const std::string& text) const {
    if (text == "yes") return true;
    if (text == "no") return false;
    fail(line.number, "expected yes or no, got '" + text + "'");
  }

  std::string file_;
  Scenario scenario_;
  std::map<std::string, AgentId> names_;
  std::set<std::string> seen_;
  bool protocol_seen_ = false;
  bool faults_seen_ = false;
  bool started_ = false;
  std::uint64_t last_tick_ = 0;
};

}  // namespace

Scenario parse_scenario(std::string_view text, const std::string& file) { return Parser(file).parse(text); }

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path);
}

}  // namespace grassroots::cli
