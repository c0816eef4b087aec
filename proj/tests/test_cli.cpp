#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rideshare/commands.hpp"

using namespace rideshare;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome cli(std::vector<std::string> args) {
    args.insert(args.begin(), "rideshare");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("rideshare_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path small_config(const fs::path& dir, const std::string& extra_demand = "") {
    const fs::path cfg = dir / "small.json";
    std::ofstream(cfg) << R"({
  "name": "small",
  "grid": {"rows": 8, "cols": 8},
  "fleet": {"size": 4, "capacity": 3},
  "duration_slices": 4,
  "demand": {"source": "synthetic", "synthetic": {"base_rate": 0.1)"
                       << extra_demand << R"(}}
})";
    return cfg;
}

}  // namespace

TEST(Cli, MissingConfigIsUsageError) {
    const Outcome r = cli({"simulate", "-c", "/nonexistent/world.json"});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("/nonexistent/world.json"), std::string::npos);
}

TEST(Cli, InvalidConfigFieldIsUsageError) {
    const fs::path dir = scratch("invalid");
    std::ofstream(dir / "bad.json") << R"({"fleet": {"size": -3}})";
    const Outcome r = cli({"simulate", "-c", (dir / "bad.json").string(), "-o", (dir / "out").string()});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("size"), std::string::npos);
}

TEST(Cli, UnknownSubcommandAndPolicy) {
    EXPECT_EQ(cli({"fly"}).code, kExitUsage);
    const fs::path dir = scratch("policy");
    EXPECT_EQ(cli({"simulate", "-c", small_config(dir).string(), "--policy", "random"}).code, kExitUsage);
    EXPECT_EQ(cli({"golden", "no_such_fixture"}).code, kExitUsage);
}

TEST(Cli, SimulateWritesAllOutputs) {
    const fs::path dir = scratch("simulate");
    const fs::path out = dir / "run";
    const Outcome r = cli({"simulate", "-c", small_config(dir).string(), "-o", out.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    for (const char* f : {"events.csv", "metrics.csv", "lorenz.csv", "ledger.csv", "rides.csv", "orders.csv",
                          "report.json", "manifest.json"}) {
        EXPECT_TRUE(fs::exists(out / f)) << f;
    }
}

TEST(Cli, OverridesAreRecordedInManifest) {
    const fs::path dir = scratch("override");
    const fs::path out = dir / "run";
    const Outcome r = cli({"simulate", "-c", small_config(dir).string(), "--policy", "greedy", "--seed", "77",
                           "--relocate-fraction", "0.3", "-o", out.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const std::string manifest = slurp(out / "manifest.json");
    EXPECT_NE(manifest.find("\"policy\": \"greedy\""), std::string::npos);
    EXPECT_NE(manifest.find("\"seed\": 77"), std::string::npos);
    EXPECT_NE(manifest.find("\"relocate_fraction\": 0.3"), std::string::npos);
    EXPECT_NE(manifest.find("\"version\": \"" + version_string() + "\""), std::string::npos);
}

TEST(Cli, CompareIdenticalRunsShowsNoImprovement) {
    const fs::path dir = scratch("compare_same");
    const std::string cfg = small_config(dir).string();
    ASSERT_EQ(cli({"simulate", "-c", cfg, "-o", (dir / "a").string()}).code, kExitOk);
    ASSERT_EQ(cli({"simulate", "-c", cfg, "-o", (dir / "b").string()}).code, kExitOk);
    const Outcome r = cli({"compare", (dir / "a").string(), (dir / "b").string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    std::istringstream lines(r.out);
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) {
        if (line.rfind("metric,", 0) == 0 || line.rfind("#", 0) == 0 || line.find(',') == std::string::npos) continue;
        ++rows;
        const std::string pct = line.substr(line.rfind(',') + 1);
        EXPECT_TRUE(pct == "+0.00" || pct == "n/a") << line;
    }
    EXPECT_EQ(rows, 4);
}

TEST(Cli, CompareRefusesDifferentDemand) {
    const fs::path dir = scratch("compare_diff");
    ASSERT_EQ(cli({"simulate", "-c", small_config(dir).string(), "--seed", "1", "-o", (dir / "a").string()}).code,
              kExitOk);
    ASSERT_EQ(cli({"simulate", "-c", small_config(dir).string(), "--seed", "2", "-o", (dir / "b").string()}).code,
              kExitOk);
    const Outcome r = cli({"compare", (dir / "a").string(), (dir / "b").string()});
    EXPECT_EQ(r.code, kExitFailure);
    EXPECT_NE(r.err.find("demand"), std::string::npos);
}

TEST(Cli, CompareAcrossPoliciesOnSameDemand) {
    const fs::path dir = scratch("compare_policy");
    const std::string cfg = small_config(dir).string();
    ASSERT_EQ(cli({"simulate", "-c", cfg, "-o", (dir / "a").string()}).code, kExitOk);
    ASSERT_EQ(cli({"simulate", "-c", cfg, "--policy", "greedy", "-o", (dir / "b").string()}).code, kExitOk);
    EXPECT_EQ(cli({"compare", (dir / "a").string(), (dir / "b").string()}).code, kExitOk);
}

TEST(Cli, GoldenFixturesPass) {
    const Outcome r = cli({"golden", "--fixtures", FIXTURE_DIR});
    EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
}

TEST(Cli, GoldenMismatchPrintsDiff) {
    const fs::path dir = scratch("golden");
    fs::copy(FIXTURE_DIR, dir, fs::copy_options::recursive);
    std::ofstream(dir / "golden" / "dp_table.csv") << "cell,k,value,pred_cell,pred_k\n0,0,0,,\n";
    const Outcome r = cli({"golden", "dp_table", "--fixtures", dir.string()});
    EXPECT_EQ(r.code, kExitFailure);
    EXPECT_NE((r.out + r.err).find("+4,2,0,0,0"), std::string::npos);
    ASSERT_EQ(cli({"golden", "dp_table", "--fixtures", dir.string(), "--update"}).code, kExitOk);
    EXPECT_EQ(cli({"golden", "dp_table", "--fixtures", dir.string()}).code, kExitOk);
}

TEST(Cli, BenchSmallGrids) {
    const Outcome r = cli({"bench", "--sides", "10", "20", "--repeats", "3"});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("R^2"), std::string::npos);
}
