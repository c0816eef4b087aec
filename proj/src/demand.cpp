#include "rideshare/demand.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "rideshare/error.hpp"

namespace rideshare {

std::string_view to_string(OrderState s) {
    switch (s) {
        case OrderState::waiting: return "waiting";
        case OrderState::onboard: return "onboard";
        case OrderState::completed: return "completed";
        case OrderState::expired: return "expired";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// RequestGraph

RequestGraph::RequestGraph(int cell_count, Minute slice_start)
    : slice_start_(slice_start),
      rows_(static_cast<std::size_t>(std::max(cell_count, 0))),
      outgoing_(static_cast<std::size_t>(std::max(cell_count, 0)), 0.0) {}

void RequestGraph::check(CellId c) const {
    if (c < 0 || c >= cell_count()) {
        throw Error("request graph: cell " + std::to_string(c) + " out of range");
    }
}

void RequestGraph::set(CellId origin, CellId dest, double weight) {
    check(origin);
    check(dest);
    if (!(weight >= 0.0)) {
        throw Error("request graph: weights must be >= 0");
    }
    if (origin == dest) {
        return;
    }
    auto& row = rows_[static_cast<std::size_t>(origin)];
    auto it = std::lower_bound(row.begin(), row.end(), dest,
                               [](const Entry& e, CellId d) { return e.dest < d; });
    double& out = outgoing_[static_cast<std::size_t>(origin)];
    if (it != row.end() && it->dest == dest) {
        out -= it->weight;
        if (weight == 0.0) {
            row.erase(it);
        } else {
            it->weight = weight;
            out += weight;
        }
        return;
    }
    if (weight != 0.0) {
        row.insert(it, Entry{dest, weight});
        out += weight;
    }
}

void RequestGraph::add(CellId origin, CellId dest, double weight) {
    set(origin, dest, this->weight(origin, dest) + weight);
}

double RequestGraph::weight(CellId origin, CellId dest) const {
    check(origin);
    check(dest);
    const auto& row = rows_[static_cast<std::size_t>(origin)];
    auto it = std::lower_bound(row.begin(), row.end(), dest,
                               [](const Entry& e, CellId d) { return e.dest < d; });
    return (it != row.end() && it->dest == dest) ? it->weight : 0.0;
}

std::span<const RequestGraph::Entry> RequestGraph::row(CellId origin) const {
    check(origin);
    return rows_[static_cast<std::size_t>(origin)];
}

double RequestGraph::outgoing(CellId origin) const {
    check(origin);
    // Recomputed from the row so repeated set() calls cannot drift the total.
    double sum = 0.0;
    for (const Entry& e : rows_[static_cast<std::size_t>(origin)]) {
        sum += e.weight;
    }
    return sum;
}

double RequestGraph::total() const {
    double sum = 0.0;
    for (CellId c = 0; c < cell_count(); ++c) {
        sum += outgoing(c);
    }
    return sum;
}

RequestGraph RequestGraph::read(std::istream& in) {
    std::string line;
    std::optional<RequestGraph> graph;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        std::istringstream ls(line);
        if (!graph) {
            std::string tag;
            int m = 0;
            if (!(ls >> tag >> m) || tag != "cells" || m < 1) {
                throw Error("request graph line " + std::to_string(line_no) + ": expected header `cells m`");
            }
            graph.emplace(m);
            continue;
        }
        CellId u = 0;
        CellId v = 0;
        double w = 0.0;
        if (!(ls >> u >> v >> w)) {
            throw Error("request graph line " + std::to_string(line_no) + ": expected `u v w`");
        }
        graph->add(u, v, w);
    }
    if (!graph) {
        throw Error("request graph: missing `cells m` header");
    }
    return std::move(*graph);
}

RequestGraph RequestGraph::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open request graph '" + path + "'");
    }
    return read(in);
}

void RequestGraph::write(std::ostream& out) const {
    out << "cells " << cell_count() << '\n';
    for (CellId u = 0; u < cell_count(); ++u) {
        for (const Entry& e : row(u)) {
            out << u << ' ' << e.dest << ' ' << e.weight << '\n';
        }
    }
}

bool RequestGraph::operator==(const RequestGraph& o) const {
    if (cell_count() != o.cell_count()) {
        return false;
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const auto& a = rows_[i];
        const auto& b = o.rows_[i];
        if (a.size() != b.size()) {
            return false;
        }
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (a[k].dest != b[k].dest || a[k].weight != b[k].weight) {
                return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Trip ingestion

std::optional<CellId> bin_location(double lat, double lon, const GridSpec& spec, const GeoBounds& box) {
    if (!(lat >= box.min_lat && lat < box.max_lat && lon >= box.min_lon && lon < box.max_lon)) {
        return std::nullopt;
    }
    const double fr = (lat - box.min_lat) / (box.max_lat - box.min_lat) * spec.rows;
    const double fc = (lon - box.min_lon) / (box.max_lon - box.min_lon) * spec.cols;
    const int row = std::min(static_cast<int>(std::floor(fr)), spec.rows - 1);
    const int col = std::min(static_cast<int>(std::floor(fc)), spec.cols - 1);
    return spec.cell_at(row, col);
}

namespace {

template <typename T>
bool parse_number(std::string_view s, T& out) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '"')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '"' || s.back() == '\r')) s.remove_suffix(1);
    if (s.empty()) {
        return false;
    }
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

}  // namespace

std::optional<Minute> parse_timestamp(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '"')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '"' || text.back() == '\r' || text.back() == 'Z'))
        text.remove_suffix(1);
    // YYYY-MM-DD?HH:MM[:SS]
    if (text.size() < 16 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
        text[13] != ':') {
        return std::nullopt;
    }
    int y = 0;
    unsigned mo = 0;
    unsigned d = 0;
    int h = 0;
    int mi = 0;
    if (!parse_number(text.substr(0, 4), y) || !parse_number(text.substr(5, 2), mo) ||
        !parse_number(text.substr(8, 2), d) || !parse_number(text.substr(11, 2), h) ||
        !parse_number(text.substr(14, 2), mi)) {
        return std::nullopt;
    }
    if (text.size() > 16) {
        int sec = 0;
        if (text[16] != ':' || text.size() < 19 || !parse_number(text.substr(17, 2), sec) || sec > 60) {
            return std::nullopt;
        }
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{mo}, std::chrono::day{d}};
    if (!ymd.ok() || h > 23 || mi > 59) {
        return std::nullopt;
    }
    const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
    return static_cast<Minute>(days) * 1440 + h * 60 + mi;
}

IngestResult ingest_trips(std::istream& in, const GridSpec& spec, const GeoBounds& box) {
    if (box.empty()) {
        throw Error("ingest_trips: bounding box is empty");
    }
    spec.validate();
    IngestResult result;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const auto fields = split_csv(line);
        const bool header = first && line.find("pickup") != std::string::npos;
        first = false;
        if (header) {
            continue;
        }
        TripRecord rec;
        double plat = 0;
        double plon = 0;
        double dlat = 0;
        double dlon = 0;
        const auto when = fields.size() == 6 ? parse_timestamp(fields[0]) : std::nullopt;
        if (!when || !parse_number(fields[1], plat) || !parse_number(fields[2], plon) ||
            !parse_number(fields[3], dlat) || !parse_number(fields[4], dlon) ||
            !parse_number(fields[5], rec.passenger_count) || rec.passenger_count < 1) {
            ++result.malformed;
            continue;
        }
        rec.pickup_time = *when;
        const auto from = bin_location(plat, plon, spec, box);
        const auto to = bin_location(dlat, dlon, spec, box);
        if (!from || !to) {
            ++result.dropped_out_of_bounds;
            continue;
        }
        if (*from == *to) {
            ++result.dropped_same_cell;
            continue;
        }
        rec.pickup_cell = *from;
        rec.dropoff_cell = *to;
        result.records.push_back(rec);
    }
    if (result.records.empty()) {
        throw Error("ingest_trips: no usable trip records (" + std::to_string(result.malformed) + " malformed, " +
                    std::to_string(result.dropped_out_of_bounds) + " out of bounds)");
    }
    return result;
}

// ---------------------------------------------------------------------------
// Prediction

RequestGraph count_trips(std::span<const TripRecord> trips, int cell_count, std::int64_t first_slice,
                         int horizon_slices) {
    RequestGraph g(cell_count, first_slice * kSliceMinutes);
    for (const TripRecord& t : trips) {
        const std::int64_t s = slice_of(t.pickup_time);
        if (s >= first_slice && s < first_slice + horizon_slices) {
            g.add(t.pickup_cell, t.dropoff_cell, 1.0);
        }
    }
    return g;
}

RequestGraph predict(std::span<const TripRecord> history, int cell_count, Minute slice_start, int horizon_slices) {
    if (horizon_slices < 1) {
        throw Error("predict: horizon_slices must be >= 1");
    }
    const std::int64_t first_target = slice_of(slice_start);
    RequestGraph out(cell_count, first_target * kSliceMinutes);
    if (history.empty()) {
        return out;
    }
    std::int64_t first_slice = slice_of(history.front().pickup_time);
    for (const TripRecord& t : history) {
        first_slice = std::min(first_slice, slice_of(t.pickup_time));
    }
    const std::int64_t first_day_start = first_slice - slice_of_day(first_slice);

    for (int h = 0; h < horizon_slices; ++h) {
        const std::int64_t target = first_target + h;
        // Same slice-of-day on every earlier day covered by the history.
        std::vector<std::int64_t> prior;
        for (std::int64_t s = target - kSlicesPerDay; s >= first_day_start; s -= kSlicesPerDay) {
            prior.push_back(s);
        }
        if (prior.empty()) {
            continue;
        }
        const double scale = 1.0 / static_cast<double>(prior.size());
        for (const TripRecord& t : history) {
            const std::int64_t s = slice_of(t.pickup_time);
            if (s < target && (target - s) % kSlicesPerDay == 0 && s >= first_day_start) {
                out.add(t.pickup_cell, t.dropoff_cell, scale);
            }
        }
    }
    return out;
}

HistoricalAveragePredictor::HistoricalAveragePredictor(std::vector<TripRecord> history, int cell_count)
    : history_(std::move(history)), cell_count_(cell_count) {}

RequestGraph HistoricalAveragePredictor::predict_slice(std::int64_t slice) const {
    // Only trips strictly before the target slice are visible to the predictor.
    std::vector<TripRecord> visible;
    for (const TripRecord& t : history_) {
        if (slice_of(t.pickup_time) < slice) {
            visible.push_back(t);
        }
    }
    return predict(visible, cell_count_, slice * kSliceMinutes, 1);
}

OracleReplayPredictor::OracleReplayPredictor(std::vector<TripRecord> trips, int cell_count)
    : trips_(std::move(trips)), cell_count_(cell_count) {}

RequestGraph OracleReplayPredictor::predict_slice(std::int64_t slice) const {
    return count_trips(trips_, cell_count_, slice, 1);
}

// ---------------------------------------------------------------------------
// Synthetic workload

void SyntheticProfile::validate() const {
    if (!(base_rate >= 0.0)) {
        throw ConfigError("demand.synthetic.base_rate must be >= 0");
    }
    for (const Hotspot& h : hotspots) {
        if (!(h.multiplier >= 0.0)) {
            throw ConfigError("demand.synthetic.hotspots: multiplier must be >= 0");
        }
    }
    for (double m : time_of_day) {
        if (!(m >= 0.0)) {
            throw ConfigError("demand.synthetic.time_of_day: multipliers must be >= 0");
        }
    }
    if (dest_radius < 1) {
        throw ConfigError("demand.synthetic.dest_radius must be >= 1");
    }
    if (!(dest_distance_exponent >= 0.0)) {
        throw ConfigError("demand.synthetic.dest_distance_exponent must be >= 0");
    }
    if (hotspot_spread < 0) {
        throw ConfigError("demand.synthetic.hotspot_spread must be >= 0");
    }
}

SyntheticDemand::SyntheticDemand(GridSpec spec, SyntheticProfile profile, std::uint64_t seed)
    : spec_(spec), profile_(std::move(profile)), seed_(seed) {
    spec_.validate();
    profile_.validate();
    const int m = spec_.cell_count();
    for (const Hotspot& h : profile_.hotspots) {
        if (h.cell < 0 || h.cell >= m) {
            throw ConfigError("demand.synthetic.hotspots: cell " + std::to_string(h.cell) + " outside the grid");
        }
    }
    origin_factor_.resize(static_cast<std::size_t>(m));
    for (CellId c = 0; c < m; ++c) {
        origin_factor_[static_cast<std::size_t>(c)] = cell_multiplier(c);
    }
    shares_.resize(static_cast<std::size_t>(m));
    const int r = profile_.dest_radius;
    for (CellId c = 0; c < m; ++c) {
        auto& shares = shares_[static_cast<std::size_t>(c)];
        const int row = spec_.row_of(c);
        const int col = spec_.col_of(c);
        double total = 0.0;
        for (int dr = -r; dr <= r; ++dr) {
            for (int dc = -r; dc <= r; ++dc) {
                if ((dr == 0 && dc == 0) || !spec_.contains(row + dr, col + dc)) {
                    continue;
                }
                const CellId d = spec_.cell_at(row + dr, col + dc);
                const double dist = std::max(std::abs(dr), std::abs(dc));
                const double w = origin_factor_[static_cast<std::size_t>(d)] *
                                 std::pow(dist, -profile_.dest_distance_exponent);
                if (w > 0.0) {
                    shares.push_back({d, w});
                    total += w;
                }
            }
        }
        for (auto& e : shares) {
            e.weight /= total;
        }
    }
}

double SyntheticDemand::cell_multiplier(CellId c) const {
    double best = 1.0;
    for (const Hotspot& h : profile_.hotspots) {
        const int dist = std::max(std::abs(spec_.row_of(c) - spec_.row_of(h.cell)),
                                  std::abs(spec_.col_of(c) - spec_.col_of(h.cell)));
        const double falloff =
            std::max(0.0, 1.0 - static_cast<double>(dist) / static_cast<double>(profile_.hotspot_spread + 1));
        best = std::max(best, 1.0 + (h.multiplier - 1.0) * falloff);
    }
    return best;
}

RequestGraph SyntheticDemand::rate_graph(std::int64_t slice) const {
    RequestGraph g(spec_.cell_count(), slice * kSliceMinutes);
    double tod = 1.0;
    if (!profile_.time_of_day.empty()) {
        const auto n = static_cast<std::int64_t>(profile_.time_of_day.size());
        tod = profile_.time_of_day[static_cast<std::size_t>(((slice % n) + n) % n)];
    }
    const double base = profile_.base_rate * tod;
    if (base == 0.0) {
        return g;
    }
    for (CellId c = 0; c < spec_.cell_count(); ++c) {
        const double rate = base * origin_factor_[static_cast<std::size_t>(c)];
        for (const auto& e : shares_[static_cast<std::size_t>(c)]) {
            g.set(c, e.dest, rate * e.weight);
        }
    }
    return g;
}

std::vector<RideOrder> SyntheticDemand::sample_orders(std::int64_t slice) const {
    const RequestGraph rates = rate_graph(slice);
    std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(slice), static_cast<std::uint32_t>(slice >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> threshold(1.0, 2.0);
    std::vector<RideOrder> orders;
    for (CellId c = 0; c < rates.cell_count(); ++c) {
        for (const auto& e : rates.row(c)) {
            std::poisson_distribution<int> count(e.weight);
            const int n = count(rng);
            for (int i = 0; i < n; ++i) {
                RideOrder o;
                o.id = static_cast<OrderId>(orders.size());
                o.origin = c;
                o.dest = e.dest;
                o.request_time = slice * kSliceMinutes;
                o.detour_threshold = threshold(rng);
                orders.push_back(o);
            }
        }
    }
    return orders;
}

std::pair<RequestGraph, std::vector<RideOrder>> synth_demand(const GridSpec& spec, const SyntheticProfile& profile,
                                                             std::uint64_t seed, std::int64_t slice) {
    SyntheticDemand demand(spec, profile, seed);
    return {demand.rate_graph(slice), demand.sample_orders(slice)};
}

}  // namespace rideshare
