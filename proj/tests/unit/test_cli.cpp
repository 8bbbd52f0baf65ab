#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "he3sq/cli.hpp"
#include "he3sq/csv.hpp"

namespace fs = std::filesystem;
using namespace he3sq;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::initializer_list<std::string> args) {
  std::vector<std::string> store{"he3sq"};
  store.insert(store.end(), args);
  std::vector<char*> argv;
  for (auto& s : store) argv.push_back(s.data());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("he3sq_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

const std::string kSse1 =
    "schema_version = 1\nmodel = sse1\ngamma_sq = 1\nt_end = 1\ndt = 0.001\nrecord_every = 100\n"
    "dims = 30\nhomodyne_seed = 7\n";
const std::string kGaussian =
    "schema_version = 1\nmodel = gaussian\nomega = 0.1\nkappa = 1\ngamma_m = 0.1\ngamma_f = 0.01\n"
    "paper_regime = true\nconditional = true\nt_end = 5\ndt = 0.01\nrecord_every = 50\nhomodyne_seed = 3\n";

}  // namespace

TEST(Cli, CheckAnalyticsPasses) {
  const auto r = run({"check", "analytics", "--golden",
                      std::string(HE3SQ_SOURCE_DIR) + "/golden/analytics_golden.json"});
  EXPECT_EQ(r.code, cli::kOk) << r.out << r.err;
  EXPECT_NE(r.out.find("PASS limit product"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, CheckDesignPasses) {
  const auto r = run({"check", "design"});
  EXPECT_EQ(r.code, cli::kOk) << r.out;
  EXPECT_EQ(run({"run", "--check", "design"}).code, cli::kOk);
}

TEST(Cli, TamperedGoldenFails) {
  const auto dir = scratch("golden");
  auto g = nlohmann::json::parse(slurp(std::string(HE3SQ_SOURCE_DIR) + "/golden/analytics_golden.json"));
  g["var_pa"]["values"][0] = 0.2;
  write(dir / "g.json", g.dump());
  EXPECT_EQ(run({"check", "analytics", "--golden", (dir / "g.json").string()}).code, cli::kCheckFailure);
}

TEST(Cli, UnknownSuiteAndUsage) {
  EXPECT_NE(run({"check", "nonsense"}).code, cli::kOk);
  EXPECT_EQ(run({}).code, cli::kConfigError);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kConfigError);
  EXPECT_EQ(run({"--help"}).code, cli::kOk);
}

TEST(Cli, MalformedConfigExitsTwo) {
  const auto dir = scratch("bad");
  const auto cfg = write(dir / "bad.cfg", "schema_version = 1\nmodel = sse1\ngamma_sq = -1\nfoo = 3\n");
  const auto r = run({"run", cfg.string(), "--out", (dir / "o").string()});
  EXPECT_EQ(r.code, cli::kConfigError);
  EXPECT_NE(r.err.find("foo"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "o" / "manifest.json"));
  EXPECT_EQ(run({"run", (dir / "missing.cfg").string()}).code, cli::kConfigError);
  const auto v2 = write(dir / "v2.cfg", "schema_version = 2\nmodel = sse1\n");
  EXPECT_EQ(run({"run", v2.string()}).code, cli::kConfigError);
}

TEST(Cli, RunWritesArtifactsAndManifest) {
  const auto dir = scratch("sse1");
  const auto cfg = write(dir / "sse1.cfg", kSse1);
  const auto r = run({"run", cfg.string(), "--out", (dir / "a").string()});
  ASSERT_EQ(r.code, cli::kOk) << r.out << r.err;
  const auto m = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  EXPECT_EQ(m["seeds"]["homodyne"], 7);
  EXPECT_EQ(m["config"]["model"], "sse1");
  ASSERT_FALSE(m["files"].empty());
  for (const auto& f : m["files"]) {
    EXPECT_TRUE(fs::exists(dir / "a" / f.get<std::string>())) << f;
  }
}

TEST(Cli, RunsAreDeterministic) {
  const auto dir = scratch("det");
  const auto cfg = write(dir / "g.cfg", kGaussian);
  ASSERT_EQ(run({"run", cfg.string(), "--out", (dir / "a").string()}).code, cli::kOk);
  ASSERT_EQ(run({"run", cfg.string(), "--out", (dir / "b").string(), "--threads", "2"}).code, cli::kOk);
  const auto m = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  for (const auto& f : m["files"]) {
    const auto name = f.get<std::string>();
    if (!name.ends_with(".csv")) continue;  // the config copy records the thread count
    EXPECT_EQ(slurp(dir / "a" / name), slurp(dir / "b" / name)) << name;
  }
}

TEST(Cli, SeedOverrideChangesRecord) {
  const auto dir = scratch("seed");
  const auto cfg = write(dir / "s.cfg", kSse1);
  ASSERT_EQ(run({"run", cfg.string(), "--out", (dir / "a").string()}).code, cli::kOk);
  ASSERT_EQ(run({"run", cfg.string(), "--out", (dir / "b").string(), "--seed", "8"}).code, cli::kOk);
  const auto m = nlohmann::json::parse(slurp(dir / "b" / "manifest.json"));
  EXPECT_EQ(m["seeds"]["homodyne"], 8);
  bool differs = false;
  for (const auto& f : m["files"]) {
    const auto name = f.get<std::string>();
    if (name.ends_with(".csv")) differs |= slurp(dir / "a" / name) != slurp(dir / "b" / name);
  }
  EXPECT_TRUE(differs);
}

TEST(Cli, CompareIdenticalAndDifferent) {
  const auto dir = scratch("cmp");
  write(dir / "a.csv", "t,x,y\n0,1,2\n1,2,3\n");
  write(dir / "b.csv", "t,x,y\n0,1,2\n1,2,3.5\n");
  write(dir / "c.csv", "t,x\n0,1\n");
  write(dir / "d.csv", "t,z\n0,1\n1,2\n");
  EXPECT_EQ(run({"compare", (dir / "a.csv").string(), (dir / "a.csv").string()}).code, cli::kOk);
  const auto r = run({"compare", (dir / "a.csv").string(), (dir / "b.csv").string()});
  EXPECT_EQ(r.code, cli::kCheckFailure);
  EXPECT_NE(r.out.find("FAIL y"), std::string::npos);
  EXPECT_EQ(run({"compare", (dir / "a.csv").string(), (dir / "b.csv").string(), "--abs", "0.6"}).code,
            cli::kOk);
  EXPECT_EQ(run({"compare", (dir / "a.csv").string(), (dir / "c.csv").string()}).code, cli::kConfigError);
  EXPECT_EQ(run({"compare", (dir / "a.csv").string(), (dir / "d.csv").string(), "--pair", "x=z"}).code,
            cli::kOk);
  EXPECT_EQ(run({"compare", (dir / "a.csv").string(), (dir / "d.csv").string(), "--pair", "x=w"}).code,
            cli::kConfigError);
  EXPECT_EQ(run({"compare", (dir / "a.csv").string(), (dir / "nope.csv").string()}).code, cli::kConfigError);
}

TEST(Cli, CompareApi) {
  csv::Table a{{"t", "x"}, {{0, 1}, {1, 2}}};
  csv::Table b{{"t", "x"}, {{0, 1}, {1, 2.1}}};
  const auto rep = cli::compare(a, b, 0.0, 0.1);
  EXPECT_TRUE(rep.pass);
  EXPECT_NEAR(rep.columns[1].max_abs, 0.1, 1e-12);
  EXPECT_FALSE(cli::compare(a, b, 0.0, 0.01).pass);
}

TEST(Cli, DesignSubcommand) {
  const auto dir = scratch("design");
  const auto r = run({"design", std::string(HE3SQ_SOURCE_DIR) + "/configs/paper_cell.cfg", "--out",
                      (dir / "d.json").string()});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NE(r.out.find("Gamma_sq"), std::string::npos);
  const auto j = nlohmann::json::parse(slurp(dir / "d.json"));
  EXPECT_NEAR(j["Gamma_sq"].get<double>(), 1.4, 0.07);
  write(dir / "bad.cfg", "finesse = 0\n");
  EXPECT_EQ(run({"design", (dir / "bad.cfg").string()}).code, cli::kConfigError);
}

TEST(Cli, ExecutableMatchesInProcess) {
  const auto dir = scratch("exe");
  const std::string cmd = std::string(HE3SQ_CLI_PATH) + " check analytics > " + (dir / "o.txt").string();
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_EQ(slurp(dir / "o.txt"), run({"check", "analytics"}).out);
}

TEST(Cli, DefaultRunDirectory) {
  config::RunConfig c;
  const auto p = cli::default_run_directory(c, "runs");
  EXPECT_EQ(p.parent_path(), fs::path("runs"));
  const auto name = p.filename().string();
  EXPECT_EQ(name.size(), name.rfind('-') + 9);
}
