#include "rideshare/order_matching.hpp"

#include <algorithm>
#include <numeric>

#include "rideshare/error.hpp"

namespace rideshare {

namespace {
constexpr double kRatioSlack = 1e-9;
}

std::string_view to_string(DriverStatus s) {
    switch (s) {
        case DriverStatus::idle: return "idle";
        case DriverStatus::relocating: return "relocating";
        case DriverStatus::serving: return "serving";
    }
    return "unknown";
}

std::string_view to_string(RejectReason r) {
    switch (r) {
        case RejectReason::capacity: return "capacity";
        case RejectReason::detour: return "detour";
    }
    return "unknown";
}

StopPlan project_plan(const RoadGraph& road, CellId from, std::span<const CellId> current_path,
                      std::span<const Stop> ordered_stops) {
    StopPlan plan;
    plan.stops.assign(ordered_stops.begin(), ordered_stops.end());
    CellId here = from;
    std::size_t pos = 0;
    bool following = true;
    int dist = 0;
    for (const Stop& stop : ordered_stops) {
        if (stop.cell != here && following) {
            auto it = std::find(current_path.begin() + static_cast<std::ptrdiff_t>(pos), current_path.end(), stop.cell);
            if (it != current_path.end()) {
                const auto end = static_cast<std::size_t>(it - current_path.begin()) + 1;
                for (; pos < end; ++pos) {
                    dist += *road.edge_distance(here, current_path[pos]);
                    here = current_path[pos];
                    plan.path.push_back(here);
                }
            } else {
                following = false;
            }
        }
        if (stop.cell != here) {
            const auto leg = road.shortest_path(here, stop.cell);
            plan.path.insert(plan.path.end(), leg.begin() + 1, leg.end());
            dist += road.shortest_path_len(here, stop.cell);
            here = stop.cell;
        }
        plan.projected_distance.emplace_back(stop.order, dist);
    }
    plan.distance_to_last_stop = dist;
    if (following) {
        plan.path.insert(plan.path.end(), current_path.begin() + static_cast<std::ptrdiff_t>(pos), current_path.end());
    }
    return plan;
}

std::vector<CandidatePlan> candidate_plans(const Driver& driver, const RideOrder& order, const RoadGraph& road) {
    struct Rider {
        OrderId id;
        CellId dest;
        int travelled;
        int shortest;
        double threshold;
    };
    std::vector<Rider> riders;
    for (const RideOrder& o : driver.onboard) {
        riders.push_back({o.id, o.dest, o.distance_travelled, o.shortest_distance, o.detour_threshold});
    }
    const int shortest = order.shortest_distance > 0 ? order.shortest_distance
                                                     : road.shortest_path_len(order.origin, order.dest);
    riders.push_back({order.id, order.dest, 0, shortest, order.detour_threshold});
    std::sort(riders.begin(), riders.end(), [](const Rider& a, const Rider& b) { return a.id < b.id; });

    const std::vector<CellId> current_path(driver.path.begin(), driver.path.end());
    std::vector<std::size_t> perm(riders.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<CandidatePlan> out;
    do {
        std::vector<Stop> stops;
        stops.reserve(perm.size());
        for (std::size_t i : perm) {
            stops.push_back({riders[i].dest, riders[i].id});
        }
        CandidatePlan c;
        c.plan = project_plan(road, driver.cell, current_path, stops);
        c.feasible = true;
        for (std::size_t k = 0; k < perm.size(); ++k) {
            const Rider& r = riders[perm[k]];
            const int total = r.travelled + c.plan.projected_distance[k].second;
            const double ratio = r.shortest > 0 ? static_cast<double>(total) / r.shortest : 1.0;
            c.worst_ratio = std::max(c.worst_ratio, ratio);
            if (static_cast<double>(total) > r.threshold * r.shortest + kRatioSlack) {
                c.feasible = false;
            }
        }
        out.push_back(std::move(c));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

AcceptDecision try_accept(const Driver& driver, const RideOrder& order, const RoadGraph& road, int capacity) {
    if (order.state != OrderState::waiting) {
        throw Error("try_accept: order " + std::to_string(order.id) + " is not waiting");
    }
    if (order.origin != driver.cell) {
        throw Error("try_accept: order " + std::to_string(order.id) + " is not at the driver's cell");
    }
    if (static_cast<int>(driver.onboard.size()) >= capacity) {
        return RejectReason::capacity;
    }
    const CandidatePlan* best = nullptr;
    const auto candidates = candidate_plans(driver, order, road);
    for (const CandidatePlan& c : candidates) {
        if (c.feasible && (!best || c.plan.distance_to_last_stop < best->plan.distance_to_last_stop)) {
            best = &c;
        }
    }
    if (!best) {
        return RejectReason::detour;
    }
    return best->plan;
}

void board(Driver& driver, RideOrder order, const StopPlan& plan, Minute now) {
    order.state = OrderState::onboard;
    order.driver = driver.id;
    order.pickup_time = now;
    driver.onboard.push_back(std::move(order));
    driver.stops = plan.stops;
    driver.path.assign(plan.path.begin(), plan.path.end());
    driver.status = DriverStatus::serving;
    driver.relocation_target.reset();
}

MoveResult advance(Driver& driver, const RoadGraph& road, Minute arrival) {
    MoveResult result;
    result.from = driver.cell;
    result.to = driver.cell;
    if (driver.path.empty()) {
        if (!driver.stops.empty()) {
            throw InvariantViolation("driver " + std::to_string(driver.id) + " has stops but no path");
        }
        return result;
    }
    const CellId next = driver.path.front();
    const auto dist = road.edge_distance(driver.cell, next);
    if (!dist) {
        throw InvariantViolation("driver " + std::to_string(driver.id) + " path steps from " +
                                 std::to_string(driver.cell) + " to non-adjacent " + std::to_string(next));
    }
    driver.path.pop_front();
    driver.cell = next;
    result.moved = true;
    result.to = next;
    result.distance = *dist;
    for (RideOrder& o : driver.onboard) {
        o.distance_travelled += *dist;
        o.cells_traversed += 1;
    }
    while (!driver.stops.empty() && driver.stops.front().cell == driver.cell) {
        const OrderId id = driver.stops.front().order;
        driver.stops.erase(driver.stops.begin());
        auto it = std::find_if(driver.onboard.begin(), driver.onboard.end(),
                               [id](const RideOrder& o) { return o.id == id; });
        if (it == driver.onboard.end()) {
            throw InvariantViolation("stop for order " + std::to_string(id) + " which is not onboard");
        }
        it->state = OrderState::completed;
        it->dropoff_time = arrival;
        result.dropped.push_back(std::move(*it));
        driver.onboard.erase(it);
    }
    if (driver.path.empty() && !driver.stops.empty()) {
        throw InvariantViolation("driver " + std::to_string(driver.id) + " ran out of path with stops left");
    }
    return result;
}

}  // namespace rideshare
