#pragma once

#include <deque>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "rideshare/economics.hpp"
#include "rideshare/grid.hpp"
#include "rideshare/order.hpp"
#include "rideshare/route_planner.hpp"

namespace rideshare {

// Pickups happen on the spot when an order is accepted, so a plan only holds dropoffs.
struct Stop {
    CellId cell = 0;
    OrderId order = 0;
};

struct StopPlan {
    std::vector<Stop> stops;
    // Total onboard distance each order will have at its dropoff.
    std::vector<std::pair<OrderId, int>> projected_distance;
    // Cells still to drive, in order; the front is the next cell.
    std::vector<CellId> path;
    int distance_to_last_stop = 0;
};

enum class DriverStatus { idle, relocating, serving };

std::string_view to_string(DriverStatus s);

struct Driver {
    int id = 0;
    CellId cell = 0;
    std::deque<CellId> path;
    std::optional<Route> route;
    std::vector<RideOrder> onboard;
    std::vector<Stop> stops;
    DriverLedger ledger;
    DriverStatus status = DriverStatus::idle;
    std::optional<CellId> relocation_target;
    Minute on_duty_since = 0;

    // No planned movement and nobody to deliver.
    bool needs_route() const { return path.empty() && stops.empty() && onboard.empty(); }
};

enum class RejectReason { capacity, detour };

std::string_view to_string(RejectReason r);

using AcceptDecision = std::variant<StopPlan, RejectReason>;

// One candidate dropoff ordering considered by try_accept.
struct CandidatePlan {
    StopPlan plan;
    double worst_ratio = 0.0;  // max projected detour ratio over onboard orders + the new one
    bool feasible = false;
};

// Projects the driver's movement for a dropoff order: keep following the current
// path while each stop lies ahead on it, otherwise switch to shortest-path legs.
StopPlan project_plan(const RoadGraph& road, CellId from, std::span<const CellId> current_path,
                      std::span<const Stop> ordered_stops);

// Every dropoff ordering (all permutations) for the onboard orders plus `order`, in
// lexicographic order of order ids.
std::vector<CandidatePlan> candidate_plans(const Driver& driver, const RideOrder& order, const RoadGraph& road);

// Capacity first, then the shortest feasible ordering (ties: first candidate).
AcceptDecision try_accept(const Driver& driver, const RideOrder& order, const RoadGraph& road, int capacity);

// Puts `order` onboard and installs `plan`.
void board(Driver& driver, RideOrder order, const StopPlan& plan, Minute now);

struct MoveResult {
    bool moved = false;
    CellId from = 0;
    CellId to = 0;
    int distance = 0;
    std::vector<RideOrder> dropped;  // completed at `to`, in stop order
};

// Moves one cell along the plan, accrues distance to every onboard order and
// drops off orders whose stop is reached. `arrival` stamps dropoff_time.
MoveResult advance(Driver& driver, const RoadGraph& road, Minute arrival);

}  // namespace rideshare
