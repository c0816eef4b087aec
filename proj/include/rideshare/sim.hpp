#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rideshare/config.hpp"
#include "rideshare/demand.hpp"
#include "rideshare/economics.hpp"
#include "rideshare/fairness.hpp"
#include "rideshare/order_matching.hpp"
#include "rideshare/route_planner.hpp"

namespace rideshare {

enum class EventKind { pickup, dropoff, reject };

std::string_view to_string(EventKind k);

struct Event {
    std::int64_t tick = 0;
    int driver = 0;
    EventKind kind = EventKind::pickup;
    OrderId order = 0;
    CellId cell = 0;
    std::optional<RejectReason> reason;
};

// CSV `tick,driver,event,order,cell,reason`.
void write_event_log(std::ostream& out, std::span<const Event> events);

struct SliceMetrics {
    std::int64_t tick = 0;
    double gini = 0.0;
    double mean_uph = 0.0;
    double min_uph = 0.0;
    double max_uph = 0.0;
    double objective = 0.0;
};

struct WaitingStats {
    std::size_t served = 0;
    double mean = 0.0;
    double p50 = 0.0;
    double p90 = 0.0;
    std::size_t expired = 0;
    double expired_wait = 0.0;       // the expiry horizon, minutes
    double mean_with_expired = 0.0;  // expired orders counted at the horizon
};

// Waiting = pickup - request time, minutes, over completed orders; expired
// orders are reported separately at the expiry horizon.
WaitingStats waiting_stats(std::span<const RideOrder> orders, double expiry_minutes);

struct DriverSummary {
    int driver = 0;
    std::size_t rides = 0;
    Money utility;
    double active_hours = 0.0;
    double utility_per_hour = 0.0;
};

struct MetricsReport {
    std::vector<SliceMetrics> slices;
    std::vector<LorenzPoint> lorenz;
    std::vector<DriverSummary> drivers;
    Money total_utility;
    double final_gini = 0.0;
    WaitingStats waiting;
    std::size_t spawned = 0;
    std::size_t completed = 0;
    std::size_t expired = 0;
    std::size_t rejects = 0;
    std::size_t relocations = 0;
};

struct RunResult {
    WorldConfig config;
    std::vector<Event> events;
    std::vector<RideOrder> orders;
    std::vector<Driver> drivers;
    MetricsReport report;
};

// Greedy baseline: from each cell take the feasible forward neighbour with the
// largest immediate request weight; fall back to the shortest path at a dead end.
Route greedy_route(const RequestGraph& req, const RoadGraph& road, CellId source, CellId dest, double t_d);

// Discrete-time world. Each slice spawns orders, snapshots incomes, and runs
// ticks of recommend -> offer -> move, serving drivers in priority order.
class Simulation {
public:
    explicit Simulation(WorldConfig cfg);
    ~Simulation();
    Simulation(Simulation&&) noexcept;
    Simulation& operator=(Simulation&&) noexcept;

    const WorldConfig& config() const { return cfg_; }
    const RoadGraph& road() const { return road_; }
    const std::vector<Driver>& drivers() const { return drivers_; }
    const std::vector<Event>& events() const { return events_; }
    const std::vector<RideOrder>& orders() const { return orders_; }
    const std::vector<SliceMetrics>& slice_metrics() const { return slice_metrics_; }
    std::int64_t tick() const { return tick_; }
    int slices_run() const { return slices_run_; }
    bool done() const { return slices_run_ >= cfg_.duration_slices; }

    IncomeSnapshot snapshot() const;
    void step();
    // Delivers onboard riders, expires waiting orders, closes ledgers and builds the report.
    RunResult finish();

private:
    void recommend_for(Driver& d, const IncomeSnapshot& snap, const RequestGraph& pred_now,
                       const RequestGraph& pred_next, RequestGraph& working);
    void offer_orders(Driver& d, Minute now);
    void move(Driver& d, Minute arrival);
    void check_capacity(const Driver& d) const;
    std::vector<RideOrder> spawn(std::int64_t slice);
    void expire_waiting(Minute now, bool all);
    Money utility_of(const Driver& d) const;

    WorldConfig cfg_;
    RoadGraph road_;
    std::unique_ptr<DemandPredictor> predictor_;
    std::unique_ptr<SyntheticDemand> synthetic_;
    std::vector<TripRecord> trips_;  // csv source
    std::int64_t start_slice_ = 0;

    std::vector<Driver> drivers_;
    std::vector<RideOrder> orders_;
    std::vector<std::vector<OrderId>> waiting_;  // per cell, FIFO
    std::vector<Event> events_;
    std::vector<SliceMetrics> slice_metrics_;
    std::vector<HourlyIncome> hourly_;
    std::vector<char> relocated_this_slice_;
    std::size_t relocations_ = 0;
    std::int64_t tick_ = 0;
    int slices_run_ = 0;
};

RunResult run(const WorldConfig& cfg);

struct RunFiles {
    std::string events = "events.csv";
    std::string metrics = "metrics.csv";
    std::string lorenz = "lorenz.csv";
    std::string ledger = "ledger.csv";
    std::string rides = "rides.csv";
    std::string orders = "orders.csv";
    std::string report = "report.json";
    std::string manifest = "manifest.json";
};

// Writes every output file of a run into `dir` (created if missing).
void write_run(const RunResult& result, const std::string& dir, const std::string& config_path,
               const std::string& version);

// Recomputes each driver's utility from a rides.csv stream.
std::vector<std::pair<int, Money>> replay_rides(std::istream& rides_csv, Money cost_per_mile);

}  // namespace rideshare
