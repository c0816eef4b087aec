#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rideshare {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Version string recorded in run manifests.
std::string version_string();

// Directory holding the bundled fixtures: $RIDESHARE_FIXTURES, else the source tree's fixtures/.
std::string default_fixture_dir();

struct SimulateOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> policy;
    std::optional<double> relocate_fraction;
    std::string out_dir;  // empty: $RIDESHARE_OUT (or ./runs) / <name>-<policy>-s<seed>
};

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);

// Improvement of run A over baseline run B, read from their report.json files.
int cmd_compare(const std::string& dir_a, const std::string& dir_b, std::ostream& out, std::ostream& err);

// Names accepted by golden_output / cmd_golden.
std::vector<std::string> golden_fixtures();
// Regenerates the text a golden fixture is compared against.
std::string golden_output(const std::string& name, const std::string& fixture_dir);
// name "all" runs every fixture. Mismatches print a unified diff.
int cmd_golden(const std::string& name, const std::string& fixture_dir, bool update, std::ostream& out,
               std::ostream& err);

struct BenchPoint {
    int side = 0;
    int cells = 0;
    int length_budget = 0;
    double median_ms = 0.0;
    double max_ms = 0.0;
};

struct BenchResult {
    std::vector<BenchPoint> points;
    double slope_ms_per_cell = 0.0;
    double intercept_ms = 0.0;
    double r_squared = 0.0;
    double worst_ms = 0.0;
};

// Cold recommendation queries (destination choice, shortest paths, DAG, DP) on
// square grids; the source/destination offset is fixed so the length budget is too.
BenchResult bench_scaling(const std::vector<int>& sides, int repeats, std::uint64_t seed = 7);

int cmd_bench(const std::vector<int>& sides, int repeats, std::ostream& out, std::ostream& err);

// Full command-line entry point (argv[0] is the program name).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rideshare
