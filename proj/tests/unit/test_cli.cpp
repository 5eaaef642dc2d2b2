#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <set>
#include <sstream>

#include "dzak/config.hpp"
#include "dzak/error.hpp"
#include "dzak/run.hpp"

using namespace dzak;
namespace fs = std::filesystem;

namespace {

int code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.exit_code();
  }
  return 0;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dzak_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, MinimalSimulateTakesDefaults) {
  const RunConfig c = parse_config("[simulate]\n", Command::Simulate);
  EXPECT_EQ(c.get_int("d"), 3);
  EXPECT_EQ(c.get_int("n"), 64);
  EXPECT_EQ(c.get_int("nd"), 32);
  EXPECT_DOUBLE_EQ(c.get_double("horizon"), 0.5);
  EXPECT_EQ(c.get_enum("nonlinearity"), "real-part");
  EXPECT_TRUE(c.get_bool("dealias"));
  EXPECT_EQ(c.seed(), 1u);
  EXPECT_EQ(parse_config("", Command::Simulate).effective_text(), c.effective_text());
}

TEST(Config, EveryCommandParsesEmpty) {
  for (const auto& s : config_schema()) {
    if (s.name == "run") continue;
    const Command cmd = parse_command(s.name);
    EXPECT_EQ(command_name(cmd), s.name);
    EXPECT_NO_THROW(parse_config("", cmd)) << s.name;
  }
}

TEST(Config, CommentsRunKeysAndWhitespace) {
  const RunConfig c = parse_config("seed = 42   # top-level keys belong to [run]\n\n[picard]\n  iterations=6\n",
                                   Command::Picard);
  EXPECT_EQ(c.seed(), 42u);
  EXPECT_EQ(c.get_int("iterations"), 6);
}

TEST(Config, PicardRejectsSubcriticalRegularity) {
  const std::string text = "[picard]\nd = 3\ns = 0.4\nsprime = 0.6\n";
  EXPECT_EQ(code_of([&] { parse_config(text, Command::Picard); }), 12);
  EXPECT_NE(message_of([&] { parse_config(text, Command::Picard); }).find("(d-2)/2"), std::string::npos);
  EXPECT_EQ(code_of([] { parse_config("[picard]\nsprime = 0.5\n", Command::Picard); }), 12);
  EXPECT_EQ(code_of([] { parse_config("[picard]\nd = 4\ns = 1\n", Command::Picard); }), 12);
  EXPECT_EQ(code_of([] { parse_config("[picard]\nd = 4\ns = 1.1\n", Command::Picard); }), 0);
}

TEST(Config, DuplicateKeyReportsLines) {
  const std::string text = "[simulate]\nn = 16\n# again\nn = 32\n";
  EXPECT_EQ(code_of([&] { parse_config(text, Command::Simulate); }), 10);
  const std::string msg = message_of([&] { parse_config(text, Command::Simulate); });
  EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(Config, UnknownNamesRejected) {
  EXPECT_EQ(code_of([] { parse_config("[simulate]\nbogus = 1\n", Command::Simulate); }), 10);
  EXPECT_EQ(code_of([] { parse_config("[nowhere]\n", Command::Simulate); }), 10);
  EXPECT_EQ(code_of([] { parse_config("[picard]\n", Command::Simulate); }), 10);
  EXPECT_EQ(code_of([] { parse_config("[simulate\n", Command::Simulate); }), 10);
  EXPECT_EQ(code_of([] { parse_config("[simulate]\njust a line\n", Command::Simulate); }), 10);
  EXPECT_EQ(code_of([] { parse_command("plot"); }), 10);
}

TEST(Config, TypeMismatches) {
  EXPECT_EQ(code_of([] { parse_config("[simulate]\nn = 3.5\n", Command::Simulate); }), 11);
  EXPECT_EQ(code_of([] { parse_config("[simulate]\ndealias = yes\n", Command::Simulate); }), 11);
  EXPECT_EQ(code_of([] { parse_config("[simulate]\ndata = noise\n", Command::Simulate); }), 11);
  EXPECT_EQ(code_of([] { parse_config("seed = -1\n", Command::Simulate); }), 11);
  EXPECT_EQ(code_of([] { parse_config("[verify-linear]\nNs = 4,x\n", Command::VerifyLinear); }), 11);
  EXPECT_EQ(code_of([] { parse_config("[simulate]\ndt = nan\n", Command::Simulate); }), 11);
}

TEST(Config, Constraints) {
  EXPECT_EQ(code_of([] { parse_config("[simulate]\nn = 48\n", Command::Simulate); }), 12);
  EXPECT_EQ(code_of([] { parse_config("[simulate]\nd = 5\n", Command::Simulate); }), 12);
  EXPECT_EQ(code_of([] { parse_config("[simulate]\ndt = inf\n", Command::Simulate); }), 12);
  EXPECT_EQ(code_of([] { parse_config("[simulate]\nhorizon = 0.02\n", Command::Simulate); }), 12);
  EXPECT_EQ(code_of([] { parse_config("[verify-linear]\nNs = 4,12\n", Command::VerifyLinear); }), 12);
  EXPECT_EQ(code_of([] { parse_config("[counterexample]\nN_min = 24\n", Command::Counterexample); }), 12);
  EXPECT_EQ(code_of([] { parse_config("[counterexample]\nsign = 0\n", Command::Counterexample); }), 12);
  EXPECT_EQ(code_of([] { parse_config("[counterexample]\np1 = inf\n", Command::Counterexample); }), 0);
}

TEST(Config, EffectiveTextRoundTrips) {
  const RunConfig c = parse_config("seed = 7\n[verify-linear]\nNs = 4, 8,16\nestimate = strichartz\n",
                                   Command::VerifyLinear);
  const std::string text = c.effective_text();
  EXPECT_NE(text.find("Ns = 4,8,16\n"), std::string::npos);
  const RunConfig again = parse_config(text, Command::VerifyLinear);
  EXPECT_EQ(again.effective_text(), text);
  EXPECT_EQ(again.seed(), 7u);
}

TEST(Hash, KnownDigests) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Run, ZeroSimulationWritesArtifacts) {
  RunConfig c = parse_config("[simulate]\ndata = zero\nn = 16\nnd = 8\nhorizon = 0.02\ncadence = 10\n", Command::Simulate);
  c.out_dir = scratch("zero").string();
  const RunOutcome r = run(c);
  EXPECT_EQ(r.exit_code, 0) << r.error;
  ASSERT_FALSE(r.checks.empty());
  for (const auto& ch : r.checks) EXPECT_TRUE(ch.pass) << ch.name;

  const auto m = nlohmann::json::parse(slurp(fs::path(c.out_dir) / "manifest.json"));
  EXPECT_EQ(m["command"], "simulate");
  EXPECT_EQ(m["config_sha256"], sha256_hex(c.effective_text()));
  EXPECT_EQ(m["seeds"]["base"], 1);
  EXPECT_TRUE(m.contains("wall_time_s"));
  std::set<std::string> listed;
  for (const auto& a : m["artifacts"]) {
    listed.insert(a["path"].get<std::string>());
    EXPECT_EQ(a["sha256"], sha256_hex(slurp(fs::path(c.out_dir) / a["path"].get<std::string>())));
  }
  for (auto name : {"effective_config.ini", "diagnostics.csv", "final_state.dzk", "checks.csv"})
    EXPECT_TRUE(listed.count(name)) << name;
  EXPECT_EQ(slurp(fs::path(c.out_dir) / "diagnostics.csv"), "t,l2_E,hss_E,hss_N\n0,0,0,0\n0.01,0,0,0\n0.02,0,0,0\n");
}

TEST(Run, CounterexampleBelowSixteenIsAPrecondition) {
  RunConfig c = parse_config("[counterexample]\nN_min = 8\n", Command::Counterexample);
  c.out_dir = scratch("short").string();
  const RunOutcome r = run(c);
  EXPECT_EQ(r.exit_code, 50);
  EXPECT_NE(r.error.find("insufficient points for fit"), std::string::npos);
  EXPECT_TRUE(fs::exists(fs::path(c.out_dir) / "manifest.json"));
}

TEST(Run, FailedCheckUsesRangeCode) {
  // An unreachable drift bound fails the run inside the solver range.
  RunConfig c = parse_config("[simulate]\nn = 32\nnd = 16\nbox = 16\nbox_d = 16\nhorizon = 0.05\ndrift_tol = 1e-300\n",
                             Command::Simulate);
  c.out_dir = scratch("drift").string();
  const RunOutcome r = run(c);
  ASSERT_FALSE(r.checks.empty()) << r.error;
  ASSERT_GT(r.checks.front().value, 0.0);
  EXPECT_FALSE(r.checks.front().pass);
  EXPECT_EQ(r.exit_code, 39);
}

TEST(Run, NormsDeterministic) {
  RunConfig c = parse_config("seed = 3\n[norms]\nn = 32\nnt = 8\nN = 4\n", Command::Norms);
  c.out_dir = scratch("norms_a").string();
  const RunOutcome a = run(c);
  c.out_dir = scratch("norms_b").string();
  const RunOutcome b = run(c);
  EXPECT_EQ(a.exit_code, 0) << a.error;
  ASSERT_EQ(a.artifacts.size(), b.artifacts.size());
  for (std::size_t i = 0; i < a.artifacts.size(); ++i) EXPECT_EQ(a.artifacts[i].sha256, b.artifacts[i].sha256);
}

TEST(Run, UnwritableOutputDirectory) {
  const fs::path file = scratch("blocker");
  std::ofstream(file) << "x";
  RunConfig c = parse_config("[simulate]\ndata = zero\nn = 8\nnd = 4\nhorizon = 0.01\ncadence = 10\n", Command::Simulate);
  c.out_dir = (file / "sub").string();
  EXPECT_EQ(run(c).exit_code, 16);
}
