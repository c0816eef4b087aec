#include "rideshare/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rideshare/error.hpp"

namespace rideshare {

using nlohmann::json;

std::string_view to_string(Policy p) {
    switch (p) {
        case Policy::fairness_on: return "fairness_on";
        case Policy::fcfs_dp: return "fcfs_dp";
        case Policy::greedy: return "greedy";
    }
    return "unknown";
}

Policy parse_policy(std::string_view text) {
    if (text == "fairness_on") return Policy::fairness_on;
    if (text == "fcfs_dp") return Policy::fcfs_dp;
    if (text == "greedy") return Policy::greedy;
    throw ConfigError("policy: expected fairness_on, fcfs_dp or greedy (got '" + std::string(text) + "')");
}

namespace {

// Reads an optional field, reporting the dotted path on a type mismatch.
template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& path) {
    if (!obj.contains(key)) {
        return;
    }
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("field '" + path + key + "': " + e.what());
    }
}

void read_money(const json& obj, const char* key, Money& out, const std::string& path) {
    double v = out.to_double();
    read(obj, key, v, path);
    out = Money::from_double(v);
}

const json& section(const json& root, const char* key, const std::string& path) {
    static const json empty = json::object();
    if (!root.contains(key)) {
        return empty;
    }
    if (!root.at(key).is_object()) {
        throw ConfigError("field '" + path + key + "': expected an object");
    }
    return root.at(key);
}

std::string resolve(const std::string& file, const std::string& base_dir) {
    if (file.empty()) {
        return file;
    }
    std::filesystem::path p(file);
    if (p.is_absolute()) {
        return file;
    }
    return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

json profile_json(const SyntheticProfile& p) {
    json hot = json::array();
    for (const Hotspot& h : p.hotspots) {
        hot.push_back({{"cell", h.cell}, {"multiplier", h.multiplier}});
    }
    return {{"base_rate", p.base_rate},
            {"hotspots", hot},
            {"hotspot_spread", p.hotspot_spread},
            {"time_of_day", p.time_of_day},
            {"dest_radius", p.dest_radius},
            {"dest_distance_exponent", p.dest_distance_exponent}};
}

json demand_json(const DemandSpec& d) {
    json j = {{"source", d.source}};
    if (d.source == "synthetic") {
        j["synthetic"] = profile_json(d.synthetic);
    } else if (d.source == "csv") {
        j["csv"] = {{"path", d.csv.path},
                    {"bounds",
                     {{"min_lat", d.csv.bounds.min_lat},
                      {"min_lon", d.csv.bounds.min_lon},
                      {"max_lat", d.csv.bounds.max_lat},
                      {"max_lon", d.csv.bounds.max_lon}}},
                    {"start", d.csv.start},
                    {"predictor", d.csv.predictor}};
    } else {
        json orders = json::array();
        for (const ScriptedOrder& o : d.orders) {
            orders.push_back({{"slice", o.slice}, {"origin", o.origin}, {"dest", o.dest}, {"t_d", o.detour_threshold}});
        }
        j["prediction_file"] = d.prediction_file;
        j["orders"] = orders;
    }
    return j;
}

json grid_json(const WorldConfig& cfg) {
    return {{"rows", cfg.grid.rows},
            {"cols", cfg.grid.cols},
            {"cell_size_miles", cfg.grid.cell_size_miles},
            {"diagonal_weight", cfg.grid.diagonal_weight}};
}

}  // namespace

void WorldConfig::validate() const {
    grid.validate();
    if (fleet_size < 0) throw ConfigError("field 'fleet.size': must be >= 0");
    if (capacity < 1) throw ConfigError("field 'fleet.capacity': must be >= 1");
    if (capacity > 6) throw ConfigError("field 'fleet.capacity': must be <= 6 (stop orderings are enumerated exactly)");
    if (!initial_cells.empty() && static_cast<int>(initial_cells.size()) != fleet_size) {
        throw ConfigError("field 'fleet.initial_cells': needs exactly fleet.size entries");
    }
    if (relocate_fraction < 0.0 || relocate_fraction > 1.0) {
        throw ConfigError("field 'relocate_fraction': must be in [0, 1]");
    }
    if (minutes_per_cell < 1) throw ConfigError("field 'minutes_per_cell': must be >= 1");
    if (slice_minutes != kSliceMinutes) {
        throw ConfigError("field 'slice_minutes': only " + std::to_string(kSliceMinutes) + " is supported");
    }
    if (slice_minutes % minutes_per_cell != 0) {
        throw ConfigError("field 'minutes_per_cell': must divide slice_minutes");
    }
    if (expiry_slices < 1) throw ConfigError("field 'expiry_slices': must be >= 1");
    if (route_detour_threshold < 1.0) throw ConfigError("field 'route_detour_threshold': must be >= 1");
    if (duration_slices < 0) throw ConfigError("field 'duration_slices': must be >= 0");
    fare.validate();
    if (demand.source == "synthetic") {
        demand.synthetic.validate();
    } else if (demand.source == "csv") {
        if (demand.csv.path.empty()) throw ConfigError("field 'demand.csv.path': required");
        if (demand.csv.bounds.empty()) throw ConfigError("field 'demand.csv.bounds': empty bounding box");
        if (!parse_timestamp(demand.csv.start)) throw ConfigError("field 'demand.csv.start': not an ISO-8601 time");
        if (demand.csv.predictor != "historical" && demand.csv.predictor != "oracle") {
            throw ConfigError("field 'demand.csv.predictor': expected historical or oracle");
        }
    } else if (demand.source == "scripted") {
        if (demand.prediction_file.empty()) throw ConfigError("field 'demand.prediction_file': required");
        for (const ScriptedOrder& o : demand.orders) {
            if (o.origin == o.dest) throw ConfigError("field 'demand.orders': origin equals destination");
            if (o.detour_threshold < 1.0) throw ConfigError("field 'demand.orders': t_d must be >= 1");
        }
    } else {
        throw ConfigError("field 'demand.source': expected synthetic, csv or scripted");
    }
}

WorldConfig parse_config(std::string_view json_text, const std::string& base_dir) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) {
        throw ConfigError("config root must be an object");
    }
    WorldConfig cfg;
    read(root, "name", cfg.name, "");
    const json& grid = section(root, "grid", "");
    read(grid, "rows", cfg.grid.rows, "grid.");
    read(grid, "cols", cfg.grid.cols, "grid.");
    read(grid, "cell_size_miles", cfg.grid.cell_size_miles, "grid.");
    read(grid, "diagonal_weight", cfg.grid.diagonal_weight, "grid.");
    read(root, "road_graph", cfg.road_graph, "");
    cfg.road_graph = resolve(cfg.road_graph, base_dir);

    const json& fleet = section(root, "fleet", "");
    read(fleet, "size", cfg.fleet_size, "fleet.");
    read(fleet, "capacity", cfg.capacity, "fleet.");
    read(fleet, "initial_cells", cfg.initial_cells, "fleet.");

    read(root, "relocate_fraction", cfg.relocate_fraction, "");
    read(root, "future_demand_threshold", cfg.future_demand_threshold, "");
    read(root, "minutes_per_cell", cfg.minutes_per_cell, "");
    read(root, "slice_minutes", cfg.slice_minutes, "");
    read(root, "expiry_slices", cfg.expiry_slices, "");
    read(root, "duration_slices", cfg.duration_slices, "");
    read(root, "seed", cfg.seed, "");
    read(root, "route_detour_threshold", cfg.route_detour_threshold, "");
    if (root.contains("policy")) {
        std::string p;
        read(root, "policy", p, "");
        cfg.policy = parse_policy(p);
    }

    const json& fare = section(root, "fare", "");
    read_money(fare, "base_fare", cfg.fare.base_fare, "fare.");
    read_money(fare, "minimum_fare", cfg.fare.minimum_fare, "fare.");
    read_money(fare, "per_mile", cfg.fare.per_mile, "fare.");
    read_money(fare, "per_minute", cfg.fare.per_minute, "fare.");
    read_money(fare, "cost_per_mile", cfg.fare.cost_per_mile, "fare.");

    const json& demand = section(root, "demand", "");
    read(demand, "source", cfg.demand.source, "demand.");
    const json& syn = section(demand, "synthetic", "demand.");
    read(syn, "base_rate", cfg.demand.synthetic.base_rate, "demand.synthetic.");
    read(syn, "hotspot_spread", cfg.demand.synthetic.hotspot_spread, "demand.synthetic.");
    read(syn, "time_of_day", cfg.demand.synthetic.time_of_day, "demand.synthetic.");
    read(syn, "dest_radius", cfg.demand.synthetic.dest_radius, "demand.synthetic.");
    read(syn, "dest_distance_exponent", cfg.demand.synthetic.dest_distance_exponent, "demand.synthetic.");
    if (syn.contains("hotspots")) {
        if (!syn.at("hotspots").is_array()) {
            throw ConfigError("field 'demand.synthetic.hotspots': expected an array");
        }
        for (const json& h : syn.at("hotspots")) {
            Hotspot spot;
            if (h.contains("row") || h.contains("col")) {
                int r = 0;
                int c = 0;
                read(h, "row", r, "demand.synthetic.hotspots[].");
                read(h, "col", c, "demand.synthetic.hotspots[].");
                if (!cfg.grid.contains(r, c)) {
                    throw ConfigError("field 'demand.synthetic.hotspots[]': (row, col) outside the grid");
                }
                spot.cell = cfg.grid.cell_at(r, c);
            } else {
                read(h, "cell", spot.cell, "demand.synthetic.hotspots[].");
            }
            read(h, "multiplier", spot.multiplier, "demand.synthetic.hotspots[].");
            cfg.demand.synthetic.hotspots.push_back(spot);
        }
    }
    const json& csv = section(demand, "csv", "demand.");
    read(csv, "path", cfg.demand.csv.path, "demand.csv.");
    cfg.demand.csv.path = resolve(cfg.demand.csv.path, base_dir);
    read(csv, "start", cfg.demand.csv.start, "demand.csv.");
    read(csv, "predictor", cfg.demand.csv.predictor, "demand.csv.");
    const json& bounds = section(csv, "bounds", "demand.csv.");
    read(bounds, "min_lat", cfg.demand.csv.bounds.min_lat, "demand.csv.bounds.");
    read(bounds, "min_lon", cfg.demand.csv.bounds.min_lon, "demand.csv.bounds.");
    read(bounds, "max_lat", cfg.demand.csv.bounds.max_lat, "demand.csv.bounds.");
    read(bounds, "max_lon", cfg.demand.csv.bounds.max_lon, "demand.csv.bounds.");
    read(demand, "prediction_file", cfg.demand.prediction_file, "demand.");
    cfg.demand.prediction_file = resolve(cfg.demand.prediction_file, base_dir);
    if (demand.contains("orders")) {
        if (!demand.at("orders").is_array()) {
            throw ConfigError("field 'demand.orders': expected an array");
        }
        for (const json& o : demand.at("orders")) {
            ScriptedOrder so;
            read(o, "slice", so.slice, "demand.orders[].");
            read(o, "origin", so.origin, "demand.orders[].");
            read(o, "dest", so.dest, "demand.orders[].");
            read(o, "t_d", so.detour_threshold, "demand.orders[].");
            int count = 1;
            read(o, "count", count, "demand.orders[].");
            for (int i = 0; i < count; ++i) {
                cfg.demand.orders.push_back(so);
            }
        }
    }
    cfg.validate();
    return cfg;
}

WorldConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const auto dir = std::filesystem::path(path).parent_path();
    return parse_config(buf.str(), dir.empty() ? "." : dir.string());
}

std::string config_to_json(const WorldConfig& cfg) {
    json j = {{"name", cfg.name},
              {"grid", grid_json(cfg)},
              {"road_graph", cfg.road_graph},
              {"fleet", {{"size", cfg.fleet_size}, {"capacity", cfg.capacity}, {"initial_cells", cfg.initial_cells}}},
              {"relocate_fraction", cfg.relocate_fraction},
              {"future_demand_threshold", cfg.future_demand_threshold},
              {"minutes_per_cell", cfg.minutes_per_cell},
              {"slice_minutes", cfg.slice_minutes},
              {"expiry_slices", cfg.expiry_slices},
              {"duration_slices", cfg.duration_slices},
              {"seed", cfg.seed},
              {"route_detour_threshold", cfg.route_detour_threshold},
              {"policy", std::string(to_string(cfg.policy))},
              {"fare",
               {{"base_fare", cfg.fare.base_fare.to_double()},
                {"minimum_fare", cfg.fare.minimum_fare.to_double()},
                {"per_mile", cfg.fare.per_mile.to_double()},
                {"per_minute", cfg.fare.per_minute.to_double()},
                {"cost_per_mile", cfg.fare.cost_per_mile.to_double()}}},
              {"demand", demand_json(cfg.demand)}};
    return j.dump(2);
}

std::string demand_identity_json(const WorldConfig& cfg) {
    json j = {{"grid", grid_json(cfg)},
              {"road_graph", cfg.road_graph},
              {"demand", demand_json(cfg.demand)},
              {"seed", cfg.seed},
              {"duration_slices", cfg.duration_slices}};
    return j.dump();
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

}  // namespace rideshare
