#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rideshare/demand.hpp"
#include "rideshare/economics.hpp"
#include "rideshare/grid.hpp"

namespace rideshare {

enum class Policy { fairness_on, fcfs_dp, greedy };

std::string_view to_string(Policy p);
Policy parse_policy(std::string_view text);

struct ScriptedOrder {
    std::int64_t slice = 0;
    CellId origin = 0;
    CellId dest = 0;
    double detour_threshold = 1.5;
};

struct CsvDemand {
    std::string path;
    GeoBounds bounds;
    std::string start;  // ISO-8601; the run's first slice
    std::string predictor = "historical";  // or "oracle"
};

struct DemandSpec {
    std::string source = "synthetic";  // synthetic | csv | scripted
    SyntheticProfile synthetic;
    CsvDemand csv;
    std::string prediction_file;  // scripted: static request graph
    std::vector<ScriptedOrder> orders;
};

struct WorldConfig {
    std::string name = "run";
    GridSpec grid;
    std::string road_graph;  // optional edge-list file replacing the generated grid
    int fleet_size = 20;
    int capacity = 3;
    std::vector<CellId> initial_cells;  // empty = seeded uniform placement
    double relocate_fraction = 0.7;
    double future_demand_threshold = 1.0;
    int minutes_per_cell = 3;
    int slice_minutes = kSliceMinutes;
    int expiry_slices = 4;
    FareParams fare;
    Policy policy = Policy::fairness_on;
    std::uint64_t seed = 1;
    int duration_slices = 32;
    // t_d used for the recommending DP (the o_s -> o_d rider of a recommended route).
    double route_detour_threshold = 1.5;
    DemandSpec demand;

    int ticks_per_slice() const { return slice_minutes / minutes_per_cell; }
    // Throws ConfigError naming the offending field.
    void validate() const;
};

// Parses JSON text. Relative file paths are resolved against `base_dir`.
WorldConfig parse_config(std::string_view json_text, const std::string& base_dir = ".");
WorldConfig load_config(const std::string& path);
// Canonical JSON of every field; the manifest and config hash are computed from it.
std::string config_to_json(const WorldConfig& cfg);
// JSON of the fields that determine the road graph and the demand stream.
std::string demand_identity_json(const WorldConfig& cfg);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace rideshare
