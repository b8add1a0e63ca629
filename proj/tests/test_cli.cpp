#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include <json.hpp>

using json = nlohmann::ordered_json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  json report() const { return json::parse(out); }
};

Run run(const std::string& args, const std::string& stdin_text = "") {
  std::string cmd = "cd '" FINITUDE_DATA "' && ";
  if (!stdin_text.empty()) cmd += "printf '%s' '" + stdin_text + "' | ";
  cmd += "'" FINITUDE_CLI "' " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST(Cli, SemigroupAnalyze) {
  auto r = run("semigroup analyze b2.json");
  ASSERT_EQ(r.code, 0);
  auto j = r.report();
  EXPECT_EQ(j["command"], "semigroup analyze");
  EXPECT_EQ(j["result"]["size"], 5);
  EXPECT_EQ(j["result"]["subgroup_orders"], json::array({1, 1}));
  EXPECT_EQ(j["input_sha256"].get<std::string>().size(), 64u);
  EXPECT_FALSE(j.contains("timing_ms"));
}

TEST(Cli, NonInverseSemigroupIsReportedNotRejected) {
  auto r = run("semigroup analyze left_zero.json");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.report()["result"]["inverse"], false);
}

TEST(Cli, GraphVerdicts) {
  auto rose = run("graph analyze rose2.json");
  ASSERT_EQ(rose.code, 0);
  EXPECT_EQ(rose.report()["result"]["stably_finite"], false);
  EXPECT_EQ(rose.report()["result"]["witness"]["valid"], true);
  auto loop = run("graph analyze loop.json");
  ASSERT_EQ(loop.code, 0);
  EXPECT_EQ(loop.report()["result"]["stably_finite"], true);
  auto iso = run("graph verify-iso edge.json --max-len 4");
  ASSERT_EQ(iso.code, 0);
  EXPECT_EQ(iso.report()["result"]["isomorphism"], true);
  EXPECT_EQ(iso.report()["result"]["dimension_match"]["cohn"], 4);
  EXPECT_EQ(run("graph groupoid loop_exit.json").code, 2);
}

TEST(Cli, TraceBuildAndVerify) {
  auto b = run("trace build b2_groupoid.json");
  ASSERT_EQ(b.code, 0);
  auto t = b.report()["result"]["trace"];
  EXPECT_EQ(t["T1"], true);
  EXPECT_EQ(t["T4"], true);
  auto bad = run("trace verify pair2.json weights_bad.json");
  ASSERT_EQ(bad.code, 0);
  EXPECT_EQ(bad.report()["result"]["invariant"], false);
  EXPECT_EQ(bad.report()["result"]["trace"]["T1"], false);
  auto flat = run("trace build pair2.json --mean weights_flat.json");
  ASSERT_EQ(flat.code, 0);
  EXPECT_EQ(flat.report()["result"]["invariant"], true);
}

TEST(Cli, Ell1) {
  auto a = run("norm ell1 element_arrow.json");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.report()["result"]["exact"], true);
  auto u = run("norm ell1 element_units.json");
  ASSERT_EQ(u.code, 0);
  auto g = run("norm ell1 element_gaussian.json");
  ASSERT_EQ(g.code, 0);
  EXPECT_EQ(g.report()["result"]["exact"], false);
  EXPECT_EQ(g.report()["result"]["sup_le_ell1"], true);
}

TEST(Cli, WitnessFiles) {
  auto ok = run("algebra witness witness_leavitt.json");
  ASSERT_EQ(ok.code, 0);
  EXPECT_EQ(ok.report()["result"]["ba_is_e"], false);
  auto triv = run("algebra witness witness_trivial.json");
  ASSERT_EQ(triv.code, 0);
  EXPECT_EQ(triv.report()["result"]["ba_is_e"], true);
  EXPECT_EQ(run("algebra witness witness_bad.json").code, 2);
}

TEST(Cli, Schutz) {
  auto r = run("schutz t3.json");
  ASSERT_EQ(r.code, 0);
  std::vector<int> orders;
  const json j = r.report();
  for (const auto& c : j["result"]["regular_j_classes"]) orders.push_back(c["subgroup_order"]);
  std::sort(orders.begin(), orders.end());
  EXPECT_EQ(orders, (std::vector<int>{1, 2, 6}));
  EXPECT_EQ(run("schutz b2.json --idempotent E12").code, 2);
}

TEST(Cli, BadInputsExitTwo) {
  EXPECT_EQ(run("semigroup analyze missing.json").code, 2);
  EXPECT_EQ(run("semigroup analyze -", "{").code, 2);
  EXPECT_EQ(run("semigroup analyze -", "{\"kind\":\"table\",\"labels\":[\"a\",\"b\"],\"table\":[[1,0],[0,0]]}").code, 2);
  EXPECT_EQ(run("frobnicate b2.json").code, 2);
  EXPECT_EQ(run("semigroup analyze i3.json --max-size 10").code, 2);
  EXPECT_EQ(run("--max-size 10 semigroup analyze i3.json").code, 2);
  EXPECT_EQ(run("semigroup analyze i3.json --max-size 40").code, 0);
  EXPECT_EQ(run("trace verify pair2.json weights_bad.json --max-size x").code, 2);
}

TEST(Cli, StdinMatchesFile) {
  auto a = run("semigroup analyze i2.json");
  auto b = run("semigroup analyze -", "{\"kind\":\"partial_bijections\",\"degree\":2,\"generators\":[[0,null],[null,1],[1,0]]}");
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(a.report()["result"], b.report()["result"]);
}

TEST(Cli, DeterministicUnderFixedSeed) {
  for (const char* args : {"trace build pair2.json --seed 7", "graph analyze rose2.json", "schutz t3.json"}) {
    auto a = run(args), b = run(args);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out) << args;
  }
  auto t = run("semigroup analyze b2.json --timing");
  ASSERT_EQ(t.code, 0);
  EXPECT_TRUE(t.report().contains("timing_ms"));
}
