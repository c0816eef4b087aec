#include "rideshare/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "rideshare/error.hpp"

namespace rideshare {

namespace {

constexpr double kRatioSlack = 1e-9;

std::string num(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

RoadGraph make_road(const WorldConfig& cfg) {
    if (!cfg.road_graph.empty()) {
        return RoadGraph::load_edge_list(cfg.road_graph);
    }
    return build_grid(cfg.grid);
}

// Removes demand a recommended route is expected to serve so the next driver
// in priority order is steered elsewhere.
void claim_route(RequestGraph& working, const Route& route) {
    for (std::size_t i = 1; i < route.cells.size(); ++i) {
        working.set(route.cells[i - 1], route.cells[i], 0.0);
    }
    if (route.cells.size() > 1) {
        working.set(route.cells.front(), route.cells.back(), 0.0);
    }
}

}  // namespace

std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::pickup: return "pickup";
        case EventKind::dropoff: return "dropoff";
        case EventKind::reject: return "reject";
    }
    return "unknown";
}

void write_event_log(std::ostream& out, std::span<const Event> events) {
    out << "tick,driver,event,order,cell,reason\n";
    for (const Event& e : events) {
        out << e.tick << ',' << e.driver << ',' << to_string(e.kind) << ',' << e.order << ',' << e.cell << ',';
        if (e.reason) {
            out << to_string(*e.reason);
        }
        out << '\n';
    }
}

WaitingStats waiting_stats(std::span<const RideOrder> orders, double expiry_minutes) {
    WaitingStats s;
    s.expired_wait = expiry_minutes;
    std::vector<double> waits;
    for (const RideOrder& o : orders) {
        if (o.pickup_time) {
            waits.push_back(static_cast<double>(*o.pickup_time - o.request_time));
        } else if (o.state == OrderState::expired) {
            ++s.expired;
        }
    }
    s.served = waits.size();
    if (!waits.empty()) {
        std::sort(waits.begin(), waits.end());
        s.mean = std::accumulate(waits.begin(), waits.end(), 0.0) / static_cast<double>(waits.size());
        // Nearest-rank percentiles.
        auto rank = [&](double q) {
            const auto r = static_cast<std::size_t>(std::ceil(q * static_cast<double>(waits.size())));
            return waits[std::min(waits.size() - 1, r == 0 ? 0 : r - 1)];
        };
        s.p50 = rank(0.5);
        s.p90 = rank(0.9);
    }
    const double n = static_cast<double>(s.served + s.expired);
    if (n > 0) {
        s.mean_with_expired = (s.mean * static_cast<double>(s.served) + expiry_minutes * static_cast<double>(s.expired)) / n;
    }
    return s;
}

Route greedy_route(const RequestGraph& req, const RoadGraph& road, CellId source, CellId dest, double t_d) {
    if (source == dest) {
        throw Error("greedy_route: source and destination coincide");
    }
    const Dag dag = build_dag(road, req, source, dest);
    const int sp_src = dag.source_to_dest();
    std::vector<CellId> cells{source};
    CellId here = source;
    int travelled = 0;
    while (here != dest) {
        const DagEdge* pick = nullptr;
        for (const DagEdge& e : dag.out_edges(here)) {
            if (!edge_feasible(e.dist, travelled, dag.sp_to_dest(e.to), sp_src, t_d)) {
                continue;
            }
            // out_edges are ascending by target, so strict > keeps the lowest id.
            if (!pick || e.req_weight > pick->req_weight) {
                pick = &e;
            }
        }
        if (!pick) {
            const auto rest = road.shortest_path(here, dest);
            cells.insert(cells.end(), rest.begin() + 1, rest.end());
            break;
        }
        travelled += pick->dist;
        here = pick->to;
        cells.push_back(here);
    }
    return make_route(road, req, std::move(cells));
}

// ---------------------------------------------------------------------------

Simulation::Simulation(WorldConfig cfg) : cfg_(std::move(cfg)), road_(make_road(cfg_)) {
    cfg_.validate();
    const int m = road_.cell_count();
    if (cfg_.road_graph.empty() && m != cfg_.grid.cell_count()) {
        throw ConfigError("grid and road graph disagree on the cell count");
    }
    const DemandSpec& d = cfg_.demand;
    if (d.source == "synthetic") {
        if (!road_.grid()) {
            throw ConfigError("field 'demand.source': synthetic demand needs a generated grid");
        }
        synthetic_ = std::make_unique<SyntheticDemand>(cfg_.grid, d.synthetic, cfg_.seed);
    } else if (d.source == "csv") {
        std::ifstream in(d.csv.path);
        if (!in) {
            throw ConfigError("field 'demand.csv.path': cannot open '" + d.csv.path + "'");
        }
        trips_ = ingest_trips(in, cfg_.grid, d.csv.bounds).records;
        start_slice_ = slice_of(*parse_timestamp(d.csv.start));
        if (d.csv.predictor == "oracle") {
            predictor_ = std::make_unique<OracleReplayPredictor>(trips_, m);
        } else {
            predictor_ = std::make_unique<HistoricalAveragePredictor>(trips_, m);
        }
    } else {
        RequestGraph g = RequestGraph::load(d.prediction_file);
        if (g.cell_count() != m) {
            throw ConfigError("field 'demand.prediction_file': cell count differs from the road graph");
        }
        predictor_ = std::make_unique<StaticPredictor>(std::move(g));
        for (const ScriptedOrder& o : d.orders) {
            if (!road_.contains(o.origin) || !road_.contains(o.dest)) {
                throw ConfigError("field 'demand.orders': cell outside the road graph");
            }
        }
    }

    waiting_.resize(static_cast<std::size_t>(m));
    std::mt19937_64 rng(cfg_.seed ^ 0x5eed'd21e'0000'0001ULL);
    std::uniform_int_distribution<CellId> place(0, m - 1);
    for (int i = 0; i < cfg_.fleet_size; ++i) {
        Driver drv;
        drv.id = i;
        drv.cell = cfg_.initial_cells.empty() ? place(rng) : cfg_.initial_cells[static_cast<std::size_t>(i)];
        if (!road_.contains(drv.cell)) {
            throw ConfigError("field 'fleet.initial_cells': cell " + std::to_string(drv.cell) + " outside the grid");
        }
        drivers_.push_back(std::move(drv));
    }
    relocated_this_slice_.assign(drivers_.size(), 0);
}

Simulation::~Simulation() = default;
Simulation::Simulation(Simulation&&) noexcept = default;
Simulation& Simulation::operator=(Simulation&&) noexcept = default;

Money Simulation::utility_of(const Driver& d) const { return provisional_utility(d.ledger, cfg_.fare.cost_per_mile); }

IncomeSnapshot Simulation::snapshot() const {
    IncomeSnapshot snap;
    snap.taken_at = tick_;
    const double hours = static_cast<double>(slices_run_) * cfg_.slice_minutes / 60.0;
    for (const Driver& d : drivers_) {
        snap.entries.push_back({d.id, utility_per_hour(utility_of(d), hours)});
    }
    return snap;
}

std::vector<RideOrder> Simulation::spawn(std::int64_t slice) {
    std::vector<RideOrder> fresh;
    if (synthetic_) {
        fresh = synthetic_->sample_orders(slice);
    } else if (cfg_.demand.source == "csv") {
        std::seed_seq seq{static_cast<std::uint32_t>(cfg_.seed), static_cast<std::uint32_t>(cfg_.seed >> 32),
                          static_cast<std::uint32_t>(slice), 0x7a11u};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> threshold(1.0, 2.0);
        for (const TripRecord& t : trips_) {
            if (slice_of(t.pickup_time) == slice) {
                RideOrder o;
                o.origin = t.pickup_cell;
                o.dest = t.dropoff_cell;
                o.request_time = slice * cfg_.slice_minutes;
                o.detour_threshold = threshold(rng);
                fresh.push_back(o);
            }
        }
    } else {
        for (const ScriptedOrder& s : cfg_.demand.orders) {
            if (s.slice == slice - start_slice_) {
                RideOrder o;
                o.origin = s.origin;
                o.dest = s.dest;
                o.request_time = slice * cfg_.slice_minutes;
                o.detour_threshold = s.detour_threshold;
                fresh.push_back(o);
            }
        }
    }
    for (RideOrder& o : fresh) {
        o.id = static_cast<OrderId>(orders_.size());
        o.state = OrderState::waiting;
        o.shortest_distance = road_.shortest_path_len(o.origin, o.dest);
        waiting_[static_cast<std::size_t>(o.origin)].push_back(o.id);
        orders_.push_back(o);
    }
    return fresh;
}

void Simulation::expire_waiting(Minute now, bool all) {
    const Minute horizon = static_cast<Minute>(cfg_.expiry_slices) * cfg_.slice_minutes;
    for (auto& queue : waiting_) {
        auto keep = queue.begin();
        for (OrderId id : queue) {
            RideOrder& o = orders_[static_cast<std::size_t>(id)];
            if (all || o.request_time + horizon <= now) {
                o.state = OrderState::expired;
            } else {
                *keep++ = id;
            }
        }
        queue.erase(keep, queue.end());
    }
}

void Simulation::recommend_for(Driver& d, const IncomeSnapshot& snap, const RequestGraph& pred_now,
                               const RequestGraph& pred_next, RequestGraph& working) {
    auto& relocated = relocated_this_slice_[static_cast<std::size_t>(d.id)];
    if (cfg_.policy == Policy::fairness_on && !relocated) {
        relocated = 1;
        const auto target = relocate(d.id, d.cell, snap, road_, pred_now, pred_next,
                                     RelocationParams{cfg_.relocate_fraction, cfg_.future_demand_threshold});
        if (target && *target != d.cell) {
            const auto leg = road_.shortest_path(d.cell, *target);
            d.path.assign(leg.begin() + 1, leg.end());
            d.route.reset();
            d.status = DriverStatus::relocating;
            d.relocation_target = *target;
            ++relocations_;
            return;
        }
    }
    std::optional<Route> route;
    if (const auto dest = select_destination(working, d.cell)) {
        if (cfg_.policy == Policy::greedy) {
            route = greedy_route(working, road_, d.cell, *dest, cfg_.route_detour_threshold);
        } else {
            route = dp_solve(build_dag(road_, working, d.cell, *dest), road_, cfg_.route_detour_threshold);
        }
    }
    if (!route) {
        d.status = DriverStatus::idle;
        return;
    }
    claim_route(working, *route);
    d.path.assign(route->cells.begin() + 1, route->cells.end());
    d.route = std::move(route);
    d.status = DriverStatus::serving;
}

void Simulation::offer_orders(Driver& d, Minute now) {
    auto& queue = waiting_[static_cast<std::size_t>(d.cell)];
    if (queue.empty()) {
        return;
    }
    std::vector<OrderId> still_waiting;
    for (OrderId id : queue) {
        RideOrder& o = orders_[static_cast<std::size_t>(id)];
        const AcceptDecision decision = try_accept(d, o, road_, cfg_.capacity);
        if (const auto* plan = std::get_if<StopPlan>(&decision)) {
            board(d, o, *plan, now);
            o.state = OrderState::onboard;
            o.driver = d.id;
            o.pickup_time = now;
            events_.push_back({tick_, d.id, EventKind::pickup, id, d.cell, std::nullopt});
        } else {
            events_.push_back({tick_, d.id, EventKind::reject, id, d.cell, std::get<RejectReason>(decision)});
            still_waiting.push_back(id);
        }
    }
    queue = std::move(still_waiting);
    check_capacity(d);
}

void Simulation::check_capacity(const Driver& d) const {
    if (static_cast<int>(d.onboard.size()) > cfg_.capacity) {
        throw InvariantViolation("driver " + std::to_string(d.id) + " carries " + std::to_string(d.onboard.size()) +
                                 " riders, capacity " + std::to_string(cfg_.capacity));
    }
}

void Simulation::move(Driver& d, Minute arrival) {
    MoveResult res = advance(d, road_, arrival);
    if (!res.moved) {
        return;
    }
    d.ledger.add_miles(res.distance * cfg_.grid.cell_size_miles);
    for (RideOrder& o : res.dropped) {
        if (static_cast<double>(o.distance_travelled) > o.detour_threshold * o.shortest_distance + kRatioSlack) {
            throw InvariantViolation("order " + std::to_string(o.id) + " delivered with detour ratio " +
                                     std::to_string(o.realized_detour()) + " > " +
                                     std::to_string(o.detour_threshold));
        }
        const Money fare = trip_fare(cfg_.fare, o.distance_travelled * cfg_.grid.cell_size_miles,
                                     static_cast<double>(o.cells_traversed) * cfg_.minutes_per_cell);
        d.ledger.add_fare(fare);
        events_.push_back({tick_ + 1, d.id, EventKind::dropoff, o.id, d.cell, std::nullopt});
        orders_[static_cast<std::size_t>(o.id)] = std::move(o);
    }
    if (d.onboard.empty()) {
        d.ledger.close_ride();
    }
    if (d.path.empty() && d.stops.empty()) {
        d.status = DriverStatus::idle;
        d.relocation_target.reset();
        d.route.reset();
    }
}

void Simulation::step() {
    if (done()) {
        return;
    }
    const std::int64_t slice = start_slice_ + slices_run_;
    const Minute slice_start = slice * cfg_.slice_minutes;
    const RequestGraph pred_now = synthetic_ ? synthetic_->rate_graph(slice) : predictor_->predict_slice(slice);
    const RequestGraph pred_next =
        synthetic_ ? synthetic_->rate_graph(slice + 1) : predictor_->predict_slice(slice + 1);
    RequestGraph working = pred_now;

    expire_waiting(slice_start, false);
    spawn(slice);

    const IncomeSnapshot snap = snapshot();
    std::vector<int> order;
    if (cfg_.policy == Policy::fairness_on) {
        order = priority_order(snap);
    } else {
        order.resize(drivers_.size());
        std::iota(order.begin(), order.end(), 0);
    }
    std::fill(relocated_this_slice_.begin(), relocated_this_slice_.end(), 0);

    for (int t = 0; t < cfg_.ticks_per_slice(); ++t) {
        const Minute now = slice_start + static_cast<Minute>(t) * cfg_.minutes_per_cell;
        for (int id : order) {
            Driver& d = drivers_[static_cast<std::size_t>(id)];
            if (d.needs_route() && d.status != DriverStatus::relocating) {
                recommend_for(d, snap, pred_now, pred_next, working);
            }
        }
        for (int id : order) {
            offer_orders(drivers_[static_cast<std::size_t>(id)], now);
        }
        for (int id : order) {
            move(drivers_[static_cast<std::size_t>(id)], now + cfg_.minutes_per_cell);
        }
        ++tick_;
    }
    ++slices_run_;

    const double hours = static_cast<double>(slices_run_) * cfg_.slice_minutes / 60.0;
    std::vector<double> rates;
    std::vector<double> utilities;
    std::vector<int> ids;
    const int hour = slice_of_day(slice) / (60 / cfg_.slice_minutes);
    for (Driver& d : drivers_) {
        d.ledger.active_hours = hours;
        const Money u = utility_of(d);
        rates.push_back(utility_per_hour(u, hours));
        utilities.push_back(u.to_double());
        ids.push_back(d.id);
        hourly_.push_back({d.id, hour, rates.back()});
    }
    SliceMetrics m;
    m.tick = tick_;
    if (!rates.empty()) {
        m.gini = gini(rates);
        m.mean_uph = std::accumulate(rates.begin(), rates.end(), 0.0) / static_cast<double>(rates.size());
        m.min_uph = *std::min_element(rates.begin(), rates.end());
        m.max_uph = *std::max_element(rates.begin(), rates.end());
        m.objective = fair_objective(utilities, hour_weights(hourly_, hour, ids));
    }
    slice_metrics_.push_back(m);
}

RunResult Simulation::finish() {
    while (!done()) {
        step();
    }
    // Drain: no new pickups, deliver everyone onboard.
    for (Driver& d : drivers_) {
        if (d.onboard.empty()) {
            d.path.clear();
            d.route.reset();
            d.status = DriverStatus::idle;
        }
    }
    const std::int64_t drain_limit = tick_ + 4LL * road_.cell_count() * (cfg_.capacity + 1) + 16;
    bool busy = true;
    while (busy) {
        if (tick_ > drain_limit) {
            throw InvariantViolation("drain phase did not deliver every onboard rider");
        }
        busy = false;
        const Minute now = start_slice_ * cfg_.slice_minutes + tick_ * cfg_.minutes_per_cell;
        for (Driver& d : drivers_) {
            if (!d.onboard.empty()) {
                move(d, now + cfg_.minutes_per_cell);
                if (d.onboard.empty()) {
                    d.path.clear();
                    d.route.reset();
                    d.status = DriverStatus::idle;
                }
                busy = busy || !d.onboard.empty();
            }
        }
        if (busy) {
            ++tick_;
        }
    }
    expire_waiting(0, true);

    RunResult result;
    result.config = cfg_;
    const double hours = static_cast<double>(slices_run_) * cfg_.slice_minutes / 60.0;
    std::vector<double> rates;
    Money total;
    for (Driver& d : drivers_) {
        d.ledger.flush();
        d.ledger.active_hours = hours;
        DriverSummary s;
        s.driver = d.id;
        s.rides = static_cast<std::size_t>(std::count_if(d.ledger.rides().begin(), d.ledger.rides().end(),
                                                         [](const RideRecord& r) { return r.order_count() > 0; }));
        s.utility = driver_utility(d.ledger, cfg_.fare.cost_per_mile);
        s.active_hours = hours;
        s.utility_per_hour = utility_per_hour(s.utility, hours);
        total += s.utility;
        rates.push_back(s.utility_per_hour);
        result.report.drivers.push_back(s);
    }
    MetricsReport& rep = result.report;
    rep.slices = slice_metrics_;
    rep.total_utility = total;
    if (!rates.empty()) {
        rep.final_gini = gini(rates);
        rep.lorenz = lorenz(rates);
    }
    rep.waiting = waiting_stats(orders_, static_cast<double>(cfg_.expiry_slices) * cfg_.slice_minutes);
    rep.spawned = orders_.size();
    for (const RideOrder& o : orders_) {
        if (o.state == OrderState::completed) ++rep.completed;
        if (o.state == OrderState::expired) ++rep.expired;
        if (o.state != OrderState::completed && o.state != OrderState::expired) {
            throw InvariantViolation("order " + std::to_string(o.id) + " ended in state " +
                                     std::string(to_string(o.state)));
        }
    }
    rep.rejects = static_cast<std::size_t>(
        std::count_if(events_.begin(), events_.end(), [](const Event& e) { return e.kind == EventKind::reject; }));
    rep.relocations = relocations_;
    result.events = events_;
    result.orders = orders_;
    result.drivers = drivers_;
    return result;
}

RunResult run(const WorldConfig& cfg) {
    Simulation sim(cfg);
    return sim.finish();
}

// ---------------------------------------------------------------------------
// Output files

namespace {

void open_for_write(std::ofstream& out, const std::filesystem::path& p) {
    out.open(p, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + p.string() + "'");
    }
}

}  // namespace

void write_run(const RunResult& result, const std::string& dir, const std::string& config_path,
               const std::string& version) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Error("cannot create output directory '" + dir + "': " + ec.message());
    }
    const RunFiles files;
    const fs::path root(dir);
    const MetricsReport& rep = result.report;
    std::ofstream out;

    open_for_write(out, root / files.events);
    write_event_log(out, result.events);
    out.close();

    open_for_write(out, root / files.metrics);
    out << "tick,gini,mean_upH,min_upH,max_upH,objective\n";
    for (const SliceMetrics& m : rep.slices) {
        out << m.tick << ',' << fixed(m.gini, 9) << ',' << fixed(m.mean_uph) << ',' << fixed(m.min_uph) << ','
            << fixed(m.max_uph) << ',' << fixed(m.objective) << '\n';
    }
    out.close();

    open_for_write(out, root / files.lorenz);
    out << "population_share,income_share\n";
    for (const LorenzPoint& p : rep.lorenz) {
        out << fixed(p.population, 9) << ',' << fixed(p.income, 9) << '\n';
    }
    out.close();

    open_for_write(out, root / files.ledger);
    out << "driver,rides,utility,active_hours,utility_per_hour\n";
    for (const DriverSummary& s : rep.drivers) {
        out << s.driver << ',' << s.rides << ',' << s.utility << ',' << fixed(s.active_hours, 4) << ','
            << fixed(s.utility_per_hour, 4) << '\n';
    }
    out.close();

    open_for_write(out, root / files.rides);
    out << "driver,ride,orders,fares,miles,revenue\n";
    for (const Driver& d : result.drivers) {
        for (const RideRecord& r : d.ledger.rides()) {
            out << d.id << ',' << r.index << ',' << r.order_count() << ',';
            for (std::size_t i = 0; i < r.fares.size(); ++i) {
                out << (i ? ";" : "") << r.fares[i];
            }
            out << ',' << num(r.miles) << ',' << r.revenue << '\n';
        }
    }
    out.close();

    open_for_write(out, root / files.orders);
    out << "order,origin,dest,request_time,t_d,state,driver,pickup_time,dropoff_time,distance,shortest\n";
    for (const RideOrder& o : result.orders) {
        out << o.id << ',' << o.origin << ',' << o.dest << ',' << o.request_time << ',' << num(o.detour_threshold)
            << ',' << to_string(o.state) << ',' << (o.driver ? std::to_string(*o.driver) : "") << ','
            << (o.pickup_time ? std::to_string(*o.pickup_time) : "") << ','
            << (o.dropoff_time ? std::to_string(*o.dropoff_time) : "") << ',' << o.distance_travelled << ','
            << o.shortest_distance << '\n';
    }
    out.close();

    using nlohmann::json;
    const std::string canonical = config_to_json(result.config);
    const std::string demand_id = demand_identity_json(result.config);
    json report = {{"name", result.config.name},
                   {"policy", std::string(to_string(result.config.policy))},
                   {"total_utility", rep.total_utility.to_double()},
                   {"final_gini", rep.final_gini},
                   {"mean_wait_minutes", rep.waiting.mean},
                   {"p50_wait_minutes", rep.waiting.p50},
                   {"p90_wait_minutes", rep.waiting.p90},
                   {"mean_wait_with_expired_minutes", rep.waiting.mean_with_expired},
                   {"spawned", rep.spawned},
                   {"completed", rep.completed},
                   {"expired", rep.expired},
                   {"rejects", rep.rejects},
                   {"relocations", rep.relocations},
                   {"demand_hash", hex64(fnv1a64(demand_id))}};
    open_for_write(out, root / files.report);
    out << report.dump(2) << '\n';
    out.close();

    json manifest = {{"config_path", config_path},
                     {"config_hash", hex64(fnv1a64(canonical))},
                     {"demand_hash", hex64(fnv1a64(demand_id))},
                     {"seed", result.config.seed},
                     {"policy", std::string(to_string(result.config.policy))},
                     {"output_dir", dir},
                     {"version", version},
                     {"config", json::parse(canonical)}};
    open_for_write(out, root / files.manifest);
    out << manifest.dump(2) << '\n';
}

std::vector<std::pair<int, Money>> replay_rides(std::istream& rides_csv, Money cost_per_mile) {
    std::vector<std::pair<int, Money>> out;
    std::string line;
    std::getline(rides_csv, line);  // header
    while (std::getline(rides_csv, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            f.push_back(cell);
        }
        if (f.size() == 5) {
            f.emplace_back();
        }
        if (f.size() != 6) {
            throw Error("rides.csv: malformed line '" + line + "'");
        }
        const int driver = std::stoi(f[0]);
        std::vector<Money> fares;
        std::stringstream fs(f[3]);
        while (std::getline(fs, cell, ';')) {
            if (!cell.empty()) fares.push_back(Money::parse(cell));
        }
        const double miles = std::stod(f[4]);
        const Money revenue = fares.empty() ? Money{} : ride_revenue(fares);
        if (out.empty() || out.back().first != driver) {
            out.emplace_back(driver, Money{});
        }
        out.back().second += revenue - cost_per_mile.scaled(miles);
    }
    return out;
}

}  // namespace rideshare
