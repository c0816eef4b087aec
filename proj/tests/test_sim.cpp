#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "rideshare/error.hpp"
#include "rideshare/sim.hpp"

using namespace rideshare;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("rideshare_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

WorldConfig synthetic(Policy policy, std::uint64_t seed, int slices = 8) {
    WorldConfig c;
    c.name = "unit";
    c.grid.rows = c.grid.cols = 10;
    c.fleet_size = 8;
    c.policy = policy;
    c.seed = seed;
    c.duration_slices = slices;
    c.demand.synthetic.base_rate = 0.08;
    c.demand.synthetic.hotspots = {{22, 6.0}, {77, 6.0}};
    return c;
}

// Two drivers parked on cell 4 of a 3x3 grid; every slice one rider wants 4 -> 5.
WorldConfig shared_cell(Policy policy, int slices) {
    const fs::path dir = scratch("shared_cell");
    std::ofstream(dir / "pred.requests") << "cells 9\n4 5 1\n5 4 1\n";
    WorldConfig c;
    c.grid.rows = c.grid.cols = 3;
    c.fleet_size = 2;
    c.initial_cells = {4, 4};
    c.policy = policy;
    c.duration_slices = slices;
    c.demand.source = "scripted";
    c.demand.prediction_file = (dir / "pred.requests").string();
    for (int s = 0; s < slices; ++s) c.demand.orders.push_back({s, 4, 5, 1.5});
    return c;
}

}  // namespace

TEST(Simulation, ZeroDurationIsEmpty) {
    WorldConfig c = synthetic(Policy::fairness_on, 1);
    c.duration_slices = 0;
    const RunResult r = run(c);
    EXPECT_TRUE(r.events.empty());
    EXPECT_TRUE(r.report.slices.empty());
    EXPECT_EQ(r.report.total_utility, Money{});
    for (const DriverSummary& d : r.report.drivers) EXPECT_EQ(d.utility, Money{});
}

TEST(Simulation, WorkedScenarioEventLog) {
    const RunResult r = run(load_config(std::string(FIXTURE_DIR) + "/pooling_scenario.json"));
    struct Expect {
        std::int64_t tick;
        EventKind kind;
        OrderId order;
        CellId cell;
        std::optional<RejectReason> reason;
    };
    const std::vector<Expect> expected{
        {0, EventKind::pickup, 0, 0, {}},      {0, EventKind::pickup, 1, 0, {}},
        {0, EventKind::pickup, 2, 0, {}},      {1, EventKind::dropoff, 2, 6, {}},
        {1, EventKind::reject, 3, 6, RejectReason::detour},
        {1, EventKind::pickup, 4, 6, {}},      {2, EventKind::dropoff, 4, 7, {}},
        {2, EventKind::pickup, 5, 7, {}},      {2, EventKind::reject, 6, 7, RejectReason::capacity},
        {3, EventKind::dropoff, 0, 5, {}},     {3, EventKind::dropoff, 1, 5, {}},
        {3, EventKind::dropoff, 5, 5, {}},
    };
    ASSERT_EQ(r.events.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        EXPECT_EQ(r.events[i].tick, expected[i].tick) << i;
        EXPECT_EQ(r.events[i].kind, expected[i].kind) << i;
        EXPECT_EQ(r.events[i].order, expected[i].order) << i;
        EXPECT_EQ(r.events[i].cell, expected[i].cell) << i;
        EXPECT_EQ(r.events[i].reason, expected[i].reason) << i;
    }
    // The two rejected riders are still waiting at run end and expire.
    EXPECT_EQ(r.report.completed, 5u);
    EXPECT_EQ(r.report.expired, 2u);
}

TEST(Simulation, OrderAtDriverCellIsPickedUpImmediately) {
    WorldConfig c = shared_cell(Policy::fcfs_dp, 1);
    c.fleet_size = 1;
    c.initial_cells = {4};
    const RunResult r = run(c);
    ASSERT_FALSE(r.events.empty());
    EXPECT_EQ(r.events[0].kind, EventKind::pickup);
    EXPECT_EQ(r.events[0].tick, 0);
    EXPECT_EQ(r.report.waiting.served, 1u);
    EXPECT_DOUBLE_EQ(r.report.waiting.mean, 0.0);
}

TEST(Simulation, EmptyDemandLeavesDriversIdle) {
    WorldConfig c = synthetic(Policy::fairness_on, 3);
    c.demand.synthetic.base_rate = 0.0;
    c.demand.synthetic.hotspots.clear();
    const RunResult r = run(c);
    EXPECT_TRUE(r.events.empty());
    EXPECT_EQ(r.report.relocations, 0u);
    EXPECT_EQ(r.report.total_utility, Money{});
}

TEST(Simulation, ConservationAndInvariantsAcrossPolicies) {
    for (Policy p : {Policy::fairness_on, Policy::fcfs_dp, Policy::greedy}) {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const RunResult r = run(synthetic(p, seed));
            ASSERT_GT(r.report.spawned, 0u);
            EXPECT_EQ(r.report.completed + r.report.expired, r.report.spawned);
            std::map<OrderId, int> pickups;
            for (const Event& e : r.events)
                if (e.kind == EventKind::pickup) ++pickups[e.order];
            for (const RideOrder& o : r.orders) {
                ASSERT_TRUE(o.state == OrderState::completed || o.state == OrderState::expired);
                if (o.state == OrderState::completed) {
                    EXPECT_EQ(pickups[o.id], 1);
                    EXPECT_LE(o.realized_detour(), o.detour_threshold + 1e-12);
                    EXPECT_GE(*o.dropoff_time, *o.pickup_time);
                } else {
                    EXPECT_EQ(pickups[o.id], 0);
                }
            }
        }
    }
}

TEST(Simulation, CapacityNeverExceededDuringRun) {
    Simulation sim(synthetic(Policy::fairness_on, 9, 6));
    while (!sim.done()) {
        sim.step();
        for (const Driver& d : sim.drivers()) ASSERT_LE(static_cast<int>(d.onboard.size()), sim.config().capacity);
    }
}

TEST(Simulation, DeterministicOutputs) {
    const WorldConfig c = synthetic(Policy::fairness_on, 5);
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    write_run(run(c), a.string(), "cfg.json", "test");
    write_run(run(c), b.string(), "cfg.json", "test");
    for (const char* f : {"events.csv", "metrics.csv", "ledger.csv", "rides.csv", "orders.csv",
                                 "lorenz.csv", "report.json"}) {
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }
}

TEST(Simulation, LedgerReplayReproducesUtility) {
    const RunResult r = run(synthetic(Policy::fcfs_dp, 4));
    const fs::path dir = scratch("replay");
    write_run(r, dir.string(), "cfg.json", "test");
    std::ifstream rides(dir / "rides.csv");
    const auto replayed = replay_rides(rides, r.config.fare.cost_per_mile);
    std::map<int, Money> by_driver(replayed.begin(), replayed.end());
    for (const DriverSummary& d : r.report.drivers) {
        EXPECT_EQ(by_driver[d.driver], d.utility) << "driver " << d.driver;
    }
}

TEST(Simulation, ManifestRecordsFinalValues) {
    WorldConfig c = synthetic(Policy::greedy, 12, 2);
    const fs::path dir = scratch("manifest");
    write_run(run(c), dir.string(), "some/config.json", "v-test");
    const std::string m = slurp(dir / "manifest.json");
    EXPECT_NE(m.find("\"policy\": \"greedy\""), std::string::npos);
    EXPECT_NE(m.find("\"seed\": 12"), std::string::npos);
    EXPECT_NE(m.find("\"config_hash\": \"" + hex64(fnv1a64(config_to_json(c))) + "\""), std::string::npos);
    EXPECT_NE(m.find("v-test"), std::string::npos);
}

TEST(Simulation, MetricsCsvHeader) {
    const fs::path dir = scratch("metrics");
    write_run(run(synthetic(Policy::fairness_on, 2, 3)), dir.string(), "c", "v");
    const std::string metrics = slurp(dir / "metrics.csv");
    EXPECT_EQ(metrics.rfind("tick,gini,mean_upH,min_upH,max_upH,objective\n", 0), 0u);
    EXPECT_EQ(std::count(metrics.begin(), metrics.end(), '\n'), 4);
    const std::string events = slurp(dir / "events.csv");
    EXPECT_EQ(events.rfind("tick,driver,event,order,cell,reason\n", 0), 0u);
    EXPECT_EQ(slurp(dir / "ledger.csv").rfind("driver,rides,utility,active_hours,utility_per_hour\n", 0), 0u);
}

TEST(Simulation, PriorityShrinksTheGapBetweenTwinDrivers) {
    // 10 slices = 50 movement ticks.
    auto gap = [](Policy p) {
        const RunResult r = run(shared_cell(p, 10));
        return std::abs((r.report.drivers[0].utility - r.report.drivers[1].utility).to_double());
    };
    const double fcfs = gap(Policy::fcfs_dp);
    const double fair = gap(Policy::fairness_on);
    EXPECT_GT(fcfs, 50.0);          // driver 0 takes every order
    EXPECT_LT(fair, 10.0);          // at most one fare apart
    EXPECT_LT(fair, fcfs);
}

TEST(Simulation, InvalidConfigsAreRejected) {
    WorldConfig c = synthetic(Policy::fairness_on, 1);
    c.minutes_per_cell = 4;  // 15 is not a multiple of 4
    EXPECT_THROW(Simulation{c}, ConfigError);
    c = synthetic(Policy::fairness_on, 1);
    c.initial_cells = {1000};
    c.fleet_size = 1;
    EXPECT_THROW(Simulation{c}, ConfigError);
}

TEST(WaitingStats, Examples) {
    std::vector<RideOrder> orders(4);
    orders[0].request_time = 30;
    orders[0].pickup_time = 30;  // served on arrival
    orders[1].request_time = 30;
    orders[1].pickup_time = 45;  // one slice later
    orders[2].request_time = 0;
    orders[2].pickup_time = 6;
    orders[3].state = OrderState::expired;
    const WaitingStats s = waiting_stats(orders, 60.0);
    EXPECT_EQ(s.served, 3u);
    EXPECT_DOUBLE_EQ(s.mean, 7.0);
    EXPECT_DOUBLE_EQ(s.p50, 6.0);
    EXPECT_DOUBLE_EQ(s.p90, 15.0);
    EXPECT_EQ(s.expired, 1u);
    EXPECT_DOUBLE_EQ(s.mean_with_expired, (21.0 + 60.0) / 4.0);
}

TEST(GreedyRoute, ChainMatchesDp) {
    const RoadGraph road = build_grid(GridSpec{1, 6});
    RequestGraph req(6);
    for (CellId c = 0; c < 5; ++c) req.set(c, c + 1, 1.0 + c);
    const Route g = greedy_route(req, road, 0, 5, 1.5);
    const Route d = dp_solve(build_dag(road, req, 0, 5), road, 1.5);
    EXPECT_EQ(g.cells, d.cells);
    EXPECT_DOUBLE_EQ(g.expected_requests, d.expected_requests);
}

TEST(GreedyRoute, WorkedExampleBoundedByDp) {
    const RoadGraph road = RoadGraph::load_edge_list(std::string(FIXTURE_DIR) + "/worked.edges");
    const RequestGraph req = RequestGraph::load(std::string(FIXTURE_DIR) + "/worked.requests");
    const Route g = greedy_route(req, road, 0, 5, 1.5);
    EXPECT_LE(g.expected_requests, 2.0);
    EXPECT_LE(g.total_dist, 6);
}

TEST(GreedyRoute, NeverBeatsDp) {
    std::mt19937 rng(31);
    const RoadGraph road = build_grid(GridSpec{6, 6});
    int strictly_worse = 0;
    for (int trial = 0; trial < 300; ++trial) {
        RequestGraph req(36);
        for (int k = 0; k < 150; ++k) req.set(rng() % 36, rng() % 36, static_cast<double>(rng() % 6));
        const CellId s = rng() % 36;
        CellId t = rng() % 36;
        if (s == t) t = (t + 5) % 36;
        const double t_d = 1.0 + (rng() % 5) * 0.25;
        const Route g = greedy_route(req, road, s, t, t_d);
        const Route d = dp_solve(build_dag(road, req, s, t), road, t_d);
        ASSERT_LE(g.expected_requests, d.expected_requests + 1e-12);
        ASSERT_LE(g.total_dist, t_d * road.shortest_path_len(s, t) + 1e-9);
        strictly_worse += g.expected_requests < d.expected_requests;
    }
    EXPECT_GT(strictly_worse, 0);
}
