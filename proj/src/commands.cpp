#include "rideshare/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rideshare/config.hpp"
#include "rideshare/error.hpp"
#include "rideshare/route_planner.hpp"
#include "rideshare/sim.hpp"

#ifndef RIDESHARE_VERSION
#define RIDESHARE_VERSION "0.0.0"
#endif
#ifndef RIDESHARE_SOURCE_FIXTURES
#define RIDESHARE_SOURCE_FIXTURES "fixtures"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace rideshare {

std::string version_string() { return "rideshare " RIDESHARE_VERSION; }

std::string default_fixture_dir() {
    if (const char* env = std::getenv("RIDESHARE_FIXTURES"); env && *env) {
        return env;
    }
    return RIDESHARE_SOURCE_FIXTURES;
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
    WorldConfig cfg;
    try {
        cfg = load_config(opts.config_path);
        if (opts.seed) cfg.seed = *opts.seed;
        if (opts.policy) cfg.policy = parse_policy(*opts.policy);
        if (opts.relocate_fraction) cfg.relocate_fraction = *opts.relocate_fraction;
        cfg.validate();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    }

    std::string dir = opts.out_dir;
    if (dir.empty()) {
        const char* root = std::getenv("RIDESHARE_OUT");
        dir = (fs::path(root && *root ? root : "runs") /
               (cfg.name + "-" + std::string(to_string(cfg.policy)) + "-s" + std::to_string(cfg.seed)))
                  .string();
    }
    try {
        const RunResult result = run(cfg);
        write_run(result, dir, opts.config_path, version_string());
        const MetricsReport& r = result.report;
        out << "run " << cfg.name << " policy=" << to_string(cfg.policy) << " seed=" << cfg.seed << '\n'
            << "  orders: " << r.spawned << " spawned, " << r.completed << " completed, " << r.expired
            << " expired, " << r.rejects << " rejections\n"
            << "  fleet utility " << r.total_utility << ", final gini " << std::fixed << std::setprecision(4)
            << r.final_gini << ", mean wait " << std::setprecision(2) << r.waiting.mean << " min\n"
            << "  wrote " << dir << '\n';
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "run failed: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// compare

namespace {

json read_report(const std::string& dir) {
    const fs::path p = fs::path(dir) / RunFiles{}.report;
    std::ifstream in(p);
    if (!in) {
        throw Error("cannot read '" + p.string() + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error("'" + p.string() + "' is not valid JSON: " + e.what());
    }
}

std::string improvement_cell(double p, double b, bool flip) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << std::showpos;
    if (b == 0.0) {
        if (p == 0.0) {
            s << 0.0;
            return s.str();
        }
        return "n/a";
    }
    const double i = improvement(p, b);
    s << (flip ? -i : i) + 0.0;  // + 0.0 turns -0 into +0
    return s.str();
}

}  // namespace

int cmd_compare(const std::string& dir_a, const std::string& dir_b, std::ostream& out, std::ostream& err) {
    try {
        const json a = read_report(dir_a);
        const json b = read_report(dir_b);
        if (a.at("demand_hash") != b.at("demand_hash")) {
            err << "compare: runs use different road/demand inputs (demand_hash " << a.at("demand_hash").get<std::string>()
                << " vs " << b.at("demand_hash").get<std::string>() << ")\n";
            return kExitFailure;
        }
        struct Row {
            const char* label;
            const char* key;
            bool flip;
        };
        const Row rows[] = {
            {"total_utility", "total_utility", false},
            {"final_gini", "final_gini", true},
            {"mean_wait_minutes", "mean_wait_minutes", true},
            {"mean_wait_with_expired_minutes", "mean_wait_with_expired_minutes", true},
        };
        out << "# improvement I = (P - B) / B * 100 with P = " << dir_a << ", B = " << dir_b << '\n'
            << "# gini and waiting rows are sign-flipped: positive means fairer / shorter waits\n"
            << "metric,P,B,improvement_pct\n";
        for (const Row& r : rows) {
            const double p = a.at(r.key).get<double>();
            const double q = b.at(r.key).get<double>();
            out << r.label << ',' << p << ',' << q << ',' << improvement_cell(p, q, r.flip) << '\n';
        }
    } catch (const std::exception& e) {
        err << "compare: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// golden

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw Error("cannot read '" + p.string() + "'");
    }
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
        lines.push_back(l);
    }
    return lines;
}

// Plain LCS diff; fixtures are a few dozen lines.
void unified_diff(const std::string& expected, const std::string& actual, const std::string& label,
                  std::ostream& out) {
    const auto a = split_lines(expected);
    const auto b = split_lines(actual);
    std::vector<std::vector<int>> lcs(a.size() + 1, std::vector<int>(b.size() + 1, 0));
    for (std::size_t i = a.size(); i-- > 0;) {
        for (std::size_t j = b.size(); j-- > 0;) {
            lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
        }
    }
    out << "--- expected/" << label << "\n+++ actual/" << label << "\n@@ -1," << a.size() << " +1," << b.size()
        << " @@\n";
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (i < a.size() && j < b.size() && a[i] == b[j]) {
            out << ' ' << a[i++] << '\n';
            ++j;
        } else if (j < b.size() && (i == a.size() || lcs[i][j + 1] >= lcs[i + 1][j])) {
            out << '+' << b[j++] << '\n';
        } else {
            out << '-' << a[i++] << '\n';
        }
    }
}

std::string worked_paths(const fs::path& dir) {
    const RoadGraph road = RoadGraph::load_edge_list((dir / "worked.edges").string());
    const RequestGraph req = RequestGraph::load((dir / "worked.requests").string());
    const double t_d = 1.5;
    const std::vector<std::pair<std::string, std::vector<CellId>>> paths = {
        {"P1", {0, 1, 2, 3, 5}}, {"P2", {0, 4, 5}}, {"P3", {0, 6, 7, 5}}};
    const Route chosen = dp_solve(build_dag(road, req, 0, 5), road, t_d);
    std::ostringstream out;
    out << "path,cells,requests,distance,shortest,detour,feasible,recommended\n";
    for (const auto& [name, cells] : paths) {
        const int dist = path_distance(road, cells);
        const int sp = road.shortest_path_len(cells.front(), cells.back());
        const double ratio = detour_ratio(dist, sp);
        out << name << ',';
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out << (i ? " " : "") << cells[i];
        }
        out << ',' << path_request_count(req, cells) << ',' << dist << ',' << sp << ',' << ratio << ','
            << (ratio <= t_d ? 1 : 0) << ',' << (chosen.cells == cells ? 1 : 0) << '\n';
    }
    return out.str();
}

}  // namespace

std::vector<std::string> golden_fixtures() { return {"dp_table", "worked_paths", "pooling_events"}; }

std::string golden_output(const std::string& name, const std::string& fixture_dir) {
    const fs::path dir(fixture_dir);
    std::ostringstream out;
    if (name == "dp_table") {
        const RoadGraph road = RoadGraph::load_edge_list((dir / "worked.edges").string());
        const RequestGraph req = RequestGraph::load((dir / "worked.requests").string());
        dp_solve_table(build_dag(road, req, 0, 5), road, 1.5).table.write_csv(out);
    } else if (name == "worked_paths") {
        out << worked_paths(dir);
    } else if (name == "pooling_events") {
        const RunResult result = run(load_config((dir / "pooling_scenario.json").string()));
        write_event_log(out, result.events);
    } else {
        throw ConfigError("unknown golden fixture '" + name + "'");
    }
    return out.str();
}

int cmd_golden(const std::string& name, const std::string& fixture_dir, bool update, std::ostream& out,
               std::ostream& err) {
    const std::vector<std::string> known = golden_fixtures();
    std::vector<std::string> names;
    if (name == "all") {
        names = known;
    } else if (std::ranges::find(known, name) != known.end()) {
        names.push_back(name);
    } else {
        err << "golden: unknown fixture '" << name << "' (known: dp_table, worked_paths, pooling_events, all)\n";
        return kExitUsage;
    }
    int failures = 0;
    for (const std::string& n : names) {
        const fs::path expected_path = fs::path(fixture_dir) / "golden" / (n + ".csv");
        try {
            const std::string actual = golden_output(n, fixture_dir);
            if (update) {
                std::ofstream(expected_path, std::ios::binary) << actual;
                out << "updated " << expected_path.string() << '\n';
                continue;
            }
            const std::string expected = read_file(expected_path);
            if (expected == actual) {
                out << "PASS " << n << '\n';
            } else {
                ++failures;
                out << "FAIL " << n << '\n';
                unified_diff(expected, actual, n + ".csv", out);
            }
        } catch (const std::exception& e) {
            ++failures;
            out << "FAIL " << n << ": " << e.what() << '\n';
        }
    }
    return failures == 0 ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// bench

BenchResult bench_scaling(const std::vector<int>& sides, int repeats, std::uint64_t seed) {
    using clock = std::chrono::steady_clock;
    constexpr double t_d = 1.5;
    BenchResult result;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> weight(0.0, 1.0);

    for (int side : sides) {
        if (side < 8) {
            throw Error("bench: grid side must be at least 8");
        }
        GridSpec spec;
        spec.rows = spec.cols = side;
        const int r0 = side / 2 - 2;
        const int c0 = side / 2 - 2;
        const CellId source = spec.cell_at(r0, c0);
        const CellId dest = spec.cell_at(r0 + 4, c0 + 2);

        // Neighbour-to-neighbour demand everywhere, plus a dominant source->dest flow.
        RequestGraph req(spec.cell_count());
        const RoadGraph shape = build_grid(spec);
        for (CellId u = 0; u < spec.cell_count(); ++u) {
            for (const Neighbor& n : shape.neighbors(u)) {
                req.set(u, n.cell, weight(rng));
            }
        }
        req.set(source, dest, 100.0);

        std::vector<double> samples;
        int budget = 0;
        for (int rep = 0; rep < repeats; ++rep) {
            const RoadGraph road = build_grid(spec);  // fresh, so no cached shortest paths
            const auto t0 = clock::now();
            const auto dst = select_destination(req, source);
            const Dag dag = build_dag(road, req, source, *dst);
            const DpResult dp = dp_solve_table(dag, road, t_d);
            const auto t1 = clock::now();
            budget = dp.table.length_budget();
            samples.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        }
        std::sort(samples.begin(), samples.end());
        BenchPoint p;
        p.side = side;
        p.cells = spec.cell_count();
        p.length_budget = budget;
        p.median_ms = samples[samples.size() / 2];
        p.max_ms = samples.back();
        result.worst_ms = std::max(result.worst_ms, p.max_ms);
        result.points.push_back(p);
    }

    // Least-squares line of median time against cell count.
    const double n = static_cast<double>(result.points.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const BenchPoint& p : result.points) {
        sx += p.cells;
        sy += p.median_ms;
        sxx += static_cast<double>(p.cells) * p.cells;
        sxy += p.cells * p.median_ms;
    }
    const double denom = n * sxx - sx * sx;
    if (n >= 2 && denom > 0) {
        result.slope_ms_per_cell = (n * sxy - sx * sy) / denom;
        result.intercept_ms = (sy - result.slope_ms_per_cell * sx) / n;
        double ss_res = 0, ss_tot = 0;
        for (const BenchPoint& p : result.points) {
            const double fit = result.intercept_ms + result.slope_ms_per_cell * p.cells;
            ss_res += (p.median_ms - fit) * (p.median_ms - fit);
            ss_tot += (p.median_ms - sy / n) * (p.median_ms - sy / n);
        }
        result.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    }
    return result;
}

int cmd_bench(const std::vector<int>& sides, int repeats, std::ostream& out, std::ostream& err) {
    try {
        const BenchResult r = bench_scaling(sides, repeats);
        out << "side,cells,length_budget,median_ms,max_ms\n" << std::fixed << std::setprecision(4);
        for (const BenchPoint& p : r.points) {
            out << p.side << ',' << p.cells << ',' << p.length_budget << ',' << p.median_ms << ',' << p.max_ms
                << '\n';
        }
        out << "# linear fit: median_ms = " << std::setprecision(6) << r.intercept_ms << " + " << r.slope_ms_per_cell
            << " * cells, R^2 = " << std::setprecision(4) << r.r_squared << '\n'
            << "# slowest single query: " << r.worst_ms << " ms\n";
    } catch (const std::exception& e) {
        err << "bench: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Ridesharing simulator with detour-constrained route recommendation"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);

    SimulateOptions sim;
    std::uint64_t seed = 0;
    std::string policy;
    double fraction = 0.0;
    auto* simulate = app.add_subcommand("simulate", "Run one simulation and write its output files");
    simulate->add_option("-c,--config", sim.config_path, "JSON config file")->required();
    auto* seed_opt = simulate->add_option("--seed", seed, "Override the config seed");
    auto* policy_opt = simulate->add_option("--policy", policy, "fairness_on | fcfs_dp | greedy");
    auto* fraction_opt = simulate->add_option("--relocate-fraction", fraction, "Override relocate_fraction");
    simulate->add_option("-o,--out", sim.out_dir, "Output directory (default $RIDESHARE_OUT/<name>-<policy>-s<seed>)");

    std::string run_a, run_b;
    auto* compare = app.add_subcommand("compare", "Percentage improvement of run A over baseline run B");
    compare->add_option("run_a", run_a, "Proposed run directory")->required();
    compare->add_option("run_b", run_b, "Baseline run directory")->required();

    std::string fixture = "all";
    std::string fixture_dir = default_fixture_dir();
    bool update = false;
    auto* golden = app.add_subcommand("golden", "Check the worked-example fixtures against committed outputs");
    golden->add_option("fixture", fixture, "dp_table | worked_paths | pooling_events | all");
    golden->add_option("--fixtures", fixture_dir, "Fixture directory");
    golden->add_flag("--update", update, "Rewrite the expected files instead of comparing");

    std::vector<int> sides{10, 20, 30, 40, 50, 60};
    int repeats = 21;
    auto* bench = app.add_subcommand("bench", "Recommendation query time against grid size");
    bench->add_option("--sides", sides, "Grid side lengths");
    bench->add_option("--repeats", repeats, "Queries per size")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (*simulate) {
        if (*seed_opt) sim.seed = seed;
        if (*policy_opt) sim.policy = policy;
        if (*fraction_opt) sim.relocate_fraction = fraction;
        return cmd_simulate(sim, out, err);
    }
    if (*compare) {
        return cmd_compare(run_a, run_b, out, err);
    }
    if (*golden) {
        return cmd_golden(fixture, fixture_dir, update, out, err);
    }
    return cmd_bench(sides, repeats, out, err);
}

}  // namespace rideshare
