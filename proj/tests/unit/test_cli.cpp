#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "symdyn/quasitiling.hpp"

namespace fs = std::filesystem;

#ifdef SYMDYN_CLI

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(SYMDYN_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("symdyn_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("no-such-command"), 1);
  EXPECT_EQ(run("tile --group nope"), 1);
  EXPECT_EQ(run("tile --eta"), 1);
  EXPECT_EQ(run("verify --suite bogus"), 1);
}

TEST(Cli, VerifyExactSuite) { EXPECT_EQ(run("verify --suite exact"), 0); }

TEST(Cli, TileGoldenRunIsDeterministicAndValid) {
  const fs::path a = scratch("tile_a"), b = scratch("tile_b");
  ASSERT_EQ(run("tile --group z2 --window 256 --eta 0.1 --seed 7 --out " + a.string()), 0);
  ASSERT_EQ(run("tile --group z2 --window 256 --eta 0.1 --seed 7 --out " + b.string()), 0);
  EXPECT_EQ(slurp(a / "tiling.json"), slurp(b / "tiling.json"));
  EXPECT_EQ(slurp(a / "density.csv"), slurp(b / "density.csv"));

  const auto j = nlohmann::json::parse(slurp(a / "tiling.json"));
  EXPECT_EQ(j.at("provenance").at("seed"), 7);
  const symdyn::Quasitiling t = symdyn::tiling_from_json(j);
  EXPECT_NO_THROW(t.validate());
  // Output tiles are pairwise disjoint.
  std::vector<int> hits(t.window.size(), 0);
  for (const auto& tile : symdyn::tiles_of(t))
    for (const auto& h : tile.cells) EXPECT_EQ(++hits[t.window.index(h)], 1);
  const std::string csv = slurp(a / "density.csv");
  EXPECT_EQ(csv.rfind("# symdyn", 0), 0u);
  EXPECT_NE(csv.find("n,covering_density,interior_density"), std::string::npos);
}

TEST(Cli, DbarExample) {
  const fs::path out = scratch("dbar");
  ASSERT_EQ(run("dbar --p 0.5 --q 0.6 --n 4 --out " + out.string()), 0);
  std::istringstream csv(slurp(out / "dbar.csv"));
  std::string line;
  std::getline(csv, line);  // provenance
  std::getline(csv, line);  // header
  std::getline(csv, line);
  std::vector<std::string> cells;
  std::stringstream ls(line);
  for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
  ASSERT_EQ(cells.size(), 6u);
  EXPECT_NEAR(std::stod(cells[3]), 0.1, 0.02);
}

TEST(Cli, CodeBundledConfig) {
  const fs::path out = scratch("code");
  ASSERT_EQ(run("code --config " + std::string(SYMDYN_CONFIG_DIR) + "/zd1_bernoulli.cfg --out " + out.string()), 0);
  for (const char* f : {"summary.json", "coverage.csv", "dictionary_audit.json", "xbar.json"})
    EXPECT_TRUE(fs::exists(out / f)) << f;
  const auto s = nlohmann::json::parse(slurp(out / "summary.json"));
  EXPECT_TRUE(s.at("provenance").contains("config_hash"));
  EXPECT_TRUE(s.at("provenance").contains("versions"));
}

TEST(Cli, InvalidConfigIsAUsageError) {
  const fs::path dir = scratch("badcfg");
  fs::create_directories(dir);
  auto j = nlohmann::json::parse(slurp(fs::path(SYMDYN_CONFIG_DIR) / "zd1_bernoulli.cfg"));
  j["codec"]["delta"] = 0.2;
  std::ofstream(dir / "bad.cfg") << j.dump();
  EXPECT_EQ(run("code --config " + (dir / "bad.cfg").string()), 1);
}

TEST(Cli, OutputDirectoryFromEnvironment) {
  const fs::path out = scratch("env");
  const std::string cmd = "SYMDYN_OUT=" + out.string() + " " + std::string(SYMDYN_CLI) + " folner --nmax 3 > /dev/null";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(out / "folner.csv"));
}

TEST(Cli, EntropyMeasureRoundTrip) {
  const fs::path a = scratch("ent_a"), b = scratch("ent_b");
  fs::create_directories(a);
  ASSERT_EQ(run("entropy --source bernoulli:0.7,0.3 --window 4096 --nmax 4 --out " + a.string() +
                " --save-measure " + (a / "m.json").string()),
            0);
  ASSERT_EQ(run("entropy --measure " + (a / "m.json").string() + " --out " + b.string()), 0);
  // Identical tables give identical rows; only the provenance line differs.
  auto body = [](const std::string& s) { return s.substr(s.find('\n') + 1); };
  EXPECT_EQ(body(slurp(a / "entropy.csv")), body(slurp(b / "entropy.csv")));
}

#else

TEST(Cli, NotBuilt) { GTEST_SKIP() << "symdyn tool not built"; }

#endif
