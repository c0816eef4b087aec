#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "rideshare/grid.hpp"

namespace rideshare {

// Timestamps are whole minutes since the run's (or dataset's) epoch.
using Minute = std::int64_t;
using OrderId = std::int64_t;

enum class OrderState { waiting, onboard, completed, expired };

std::string_view to_string(OrderState s);

struct RideOrder {
    OrderId id = 0;
    CellId origin = 0;
    CellId dest = 0;
    Minute request_time = 0;
    double detour_threshold = 1.0;  // t_d
    OrderState state = OrderState::waiting;
    std::optional<int> driver;
    std::optional<Minute> pickup_time;
    std::optional<Minute> dropoff_time;
    int distance_travelled = 0;  // distance-units while onboard
    int cells_traversed = 0;     // movement ticks while onboard
    int shortest_distance = 0;   // SP(origin, dest), filled when the order enters the world

    double realized_detour() const {
        return shortest_distance > 0 ? static_cast<double>(distance_travelled) / shortest_distance : 1.0;
    }
};

}  // namespace rideshare
