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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace grassroots::cli {
namespace {

namespace fs = std::filesystem;

const std::string kScenarios = GRASSROOTS_SCENARIO_DIR;

std::string scenario_path(const std::string& name) { return kScenarios + "/" + name + ".scn"; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class TempDir {
 public:
  TempDir() {
    static int serial = 0;
    path_ = fs::temp_directory_path() / ("grassroots-cli-" + std::to_string(::getpid()) + "-" +
                                         ::testing::UnitTest::GetInstance()->current_test_info()->name() + "-" +
                                         std::to_string(serial++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

struct Invocation {
  int code;
  std::string out, err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "grassroots");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Lines of `section` ("== viewer") up to the next viewer header.
std::string section(const std::string& text, const std::string& viewer) {
  auto start = text.find("== " + viewer + "\n");
  if (start == std::string::npos) return {};
  auto end = text.find("\n== ", start + 1);
  return text.substr(start, end == std::string::npos ? std::string::npos : end + 1 - start);
}

// The "-- feed author" block inside a viewer section.
std::string feed_block(const std::string& viewer_section, const std::string& author) {
  auto start = viewer_section.find("-- feed " + author + "\n");
  if (start == std::string::npos) return {};
  auto end = viewer_section.find("\n-- ", start + 1);
  return viewer_section.substr(start, end == std::string::npos ? std::string::npos : end + 1 - start);
}

TEST(ScenarioFile, BundledScenariosLoad) {
  for (const auto& entry : fs::directory_iterator(kScenarios)) {
    if (entry.path().extension() != ".scn") continue;
    EXPECT_NO_THROW(validate(load_scenario(entry.path().string()))) << entry.path();
  }
}

TEST(ScenarioFile, ParsesDirectivesAndActions) {
  auto s = parse_scenario(
      "scenario tiny  # trailing comment\n"
      "protocol currency\n"
      "agent p 1.1.1.1\n"
      "agent q 2.2.2.2\n"
      "faults n=2 f=0\n"
      "net drop=0.25 dup=0.5 delay=2..4 seed=99\n"
      "max-ticks 30\n"
      "roam 5 q 3.3.3.3\n"
      "at 1 p open-credit q\n"
      "at 1 q open-credit p\n"
      "at 2 p issue 10\n"
      "at 3 p as=first pay q p 4\n");
  EXPECT_EQ(s.name, "tiny");
  EXPECT_EQ(s.protocol, ProtocolKind::kCurrency);
  ASSERT_EQ(s.agents.size(), 2u);
  EXPECT_EQ(s.agents[1].address, "2.2.2.2");
  EXPECT_EQ(s.net.drop, 0.25);
  EXPECT_EQ(s.net.duplicate, 0.5);
  EXPECT_EQ(s.net.delay_min, 2u);
  EXPECT_EQ(s.net.delay_max, 4u);
  EXPECT_EQ(s.net.seed, 99u);
  EXPECT_EQ(s.max_ticks, 30u);
  ASSERT_EQ(s.net.roaming.size(), 1u);
  EXPECT_EQ(s.net.roaming[0].address, "3.3.3.3");
  ASSERT_EQ(s.actions.size(), 4u);
  const auto& pay = s.actions.back();
  EXPECT_EQ(pay.kind, ActionKind::kPay);
  EXPECT_EQ(pay.label, "first");
  EXPECT_EQ(pay.amount, 4u);
  EXPECT_EQ(pay.target, AgentId::from_name("q"));
  EXPECT_EQ(pay.currency, AgentId::from_name("p"));
  EXPECT_EQ(pay.line, 12);
}

TEST(ScenarioFile, ErrorsNameTheLine) {
  auto line_of = [](const std::string& text) {
    try {
      parse_scenario(text, "bad.scn");
    } catch (const ParseError& e) {
      EXPECT_EQ(std::string(e.what()).rfind("bad.scn:" + std::to_string(e.line()) + ": ", 0), 0u) << e.what();
      return e.line();
    }
    return 0;
  };
  const std::string head = "scenario s\nprotocol twitter\nagent a x\nagent b y\n";
  EXPECT_EQ(line_of(head + "at 1 a dance b\n"), 5);
  EXPECT_EQ(line_of(head + "at 1 a follow zed\n"), 5);
  EXPECT_EQ(line_of(head + "at 2 a post x\nat 1 b post y\n"), 6);
  EXPECT_EQ(line_of(head + "net drop=lots\n"), 5);
  EXPECT_EQ(line_of(head + "net drop=0 drop=0\n"), 5);
  EXPECT_EQ(line_of(head + "max-ticks 10\nmax-ticks 11\n"), 6);
  EXPECT_EQ(line_of("scenario s\nprotocol gopher\n"), 2);
  EXPECT_EQ(line_of(head + "at 1 a issue 5\n"), 5);
  EXPECT_GT(line_of("scenario s\n"), 0);
}

TEST(Run, CorruptedScenarioExitsWithUsageError) {
  TempDir tmp;
  auto text = slurp(scenario_path("twitter_basic"));
  text.replace(text.find("follow bob"), 6, "fxllow");
  auto file = tmp.path() / "broken.scn";
  std::ofstream(file) << text;
  auto r = invoke({"run", file.string(), "--out", (tmp.path() / "out").string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("broken.scn:"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(tmp.path() / "out" / "trace.tsv"));
}

TEST(Run, TwitterBasicFollowersSeeTheAuthorsFeed) {
  TempDir tmp;
  auto r = invoke({"run", scenario_path("twitter_basic"), "--out", tmp.path().string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("invariants ok"), std::string::npos);
  auto feeds = slurp(tmp.path() / "feed.txt");
  for (const auto& author : {"alice", "bob"}) {
    auto own = feed_block(section(feeds, author), author);
    EXPECT_FALSE(own.empty()) << feeds;
    auto follower = std::string(author) == "alice" ? "bob" : "alice";
    EXPECT_EQ(feed_block(section(feeds, follower), author), own);
  }
  EXPECT_NE(feeds.find("hello from alice"), std::string::npos);
  for (const auto& name : {"trace.tsv", "feed.txt", "ledger.txt", "graph.txt", "equivocations.txt", "order.txt",
                           "metrics.txt", "summary.txt"})
    EXPECT_TRUE(fs::exists(tmp.path() / name)) << name;
}

TEST(Inspect, ReproducesEveryDumpFromTheTrace) {
  for (const auto& scenario : {"twitter_basic", "whatsapp_groups", "redemption"}) {
    TempDir tmp;
    ASSERT_EQ(invoke({"run", scenario_path(scenario), "--out", tmp.path().string()}).code, kExitOk);
    auto trace = (tmp.path() / "trace.tsv").string();
    for (auto q : all_queries()) {
      auto name = std::string(to_string(q));
      auto r = invoke({"inspect", trace, "--query", name});
      EXPECT_EQ(r.code, kExitOk) << r.err;
      EXPECT_EQ(r.out, slurp(tmp.path() / (name + ".txt"))) << scenario << ' ' << name;
    }
  }
}

TEST(Inspect, OrderAnchoredAtALabelMatchesTheLibrary) {
  TempDir tmp;
  ASSERT_EQ(invoke({"run", scenario_path("redemption"), "--out", tmp.path().string()}).code, kExitOk);
  auto trace = (tmp.path() / "trace.tsv").string();
  auto r = invoke({"inspect", trace, "--query", "order", "--agent", "red", "--anchor", "back"});
  ASSERT_EQ(r.code, kExitOk) << r.err;

  auto state = replay_trace(Trace::parse(slurp(trace)));
  const auto& local = state.locals.at(AgentId::from_name("red"));
  auto anchor = state.labels.at("back");
  std::ostringstream expected;
  expected << "== red\nanchor " << anchor.hex() << '\n';
  auto log = order_cone(local, anchor);
  for (std::size_t i = 0; i < log.sequence.size(); ++i)
    expected << i << '\t' << debug_string(local.at(log.sequence[i])) << '\n';
  EXPECT_EQ(r.out, expected.str());

  auto by_prefix = invoke({"inspect", trace, "--query", "order", "--agent", "red", "--anchor", anchor.hex().substr(0, 12)});
  EXPECT_EQ(by_prefix.out, r.out);
  EXPECT_EQ(invoke({"inspect", trace, "--query", "order", "--anchor", "nowhere"}).code, kExitUsage);
}

TEST(Inspect, BadInputsExitNonZero) {
  TempDir tmp;
  EXPECT_EQ(invoke({"inspect", (tmp.path() / "missing.tsv").string(), "--query", "feed"}).code, kExitIo);
  ASSERT_EQ(invoke({"run", scenario_path("twitter_basic"), "--out", tmp.path().string()}).code, kExitOk);
  auto trace = (tmp.path() / "trace.tsv").string();
  auto unknown = invoke({"inspect", trace, "--query", "horoscope"});
  EXPECT_EQ(unknown.code, kExitUsage);
  EXPECT_NE(unknown.err.find("unknown query"), std::string::npos);
  EXPECT_EQ(invoke({"inspect", trace, "--query", "feed", "--agent", "zed"}).code, kExitUsage);
  auto garbled = tmp.path() / "garbled.tsv";
  std::ofstream(garbled) << "# grassroots-trace 1\nbogus line\n";
  EXPECT_EQ(invoke({"inspect", garbled.string(), "--query", "feed"}).code, kExitUsage);
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"fly"}).code, kExitUsage);
}

TEST(Run, SeedOverrideIsDeterministic) {
  TempDir a, b, c;
  auto path = scenario_path("liveness");
  ASSERT_EQ(invoke({"run", path, "--seed", "5", "--out", a.path().string()}).code, kExitOk);
  ASSERT_EQ(invoke({"run", path, "--seed", "5", "--out", b.path().string()}).code, kExitOk);
  ASSERT_EQ(invoke({"run", path, "--seed", "6", "--out", c.path().string()}).code, kExitOk);
  EXPECT_EQ(slurp(a.path() / "trace.tsv"), slurp(b.path() / "trace.tsv"));
  EXPECT_NE(slurp(a.path() / "trace.tsv"), slurp(c.path() / "trace.tsv"));
  EXPECT_NE(slurp(a.path() / "trace.tsv").find("# seed 5"), std::string::npos);
}

TEST(Run, EveryBundledScenarioHoldsItsInvariants) {
  for (const auto& entry : fs::directory_iterator(kScenarios)) {
    if (entry.path().extension() != ".scn") continue;
    auto checked = execute(load_scenario(entry.path().string()));
    EXPECT_TRUE(checked.violations.empty()) << entry.path();
    EXPECT_EQ(checked.result.stats.cordiality_violations, 0u) << entry.path();
    EXPECT_EQ(checked.result.stats.locality_violations, 0u) << entry.path();
  }
}

}  // namespace
}  // namespace grassroots::cli
