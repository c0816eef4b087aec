#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rideshare/grid.hpp"
#include "rideshare/order.hpp"

namespace rideshare {

inline constexpr int kSliceMinutes = 15;
inline constexpr int kSlicesPerDay = 24 * 60 / kSliceMinutes;

inline std::int64_t slice_of(Minute t) {
    return t >= 0 ? t / kSliceMinutes : -((-t + kSliceMinutes - 1) / kSliceMinutes);
}
inline int slice_of_day(std::int64_t slice) {
    return static_cast<int>(((slice % kSlicesPerDay) + kSlicesPerDay) % kSlicesPerDay);
}

// Expected origin-destination request counts for one time slice.
class RequestGraph {
public:
    struct Entry {
        CellId dest = 0;
        double weight = 0.0;
    };

    RequestGraph() = default;
    explicit RequestGraph(int cell_count, Minute slice_start = 0);

    int cell_count() const { return static_cast<int>(rows_.size()); }
    Minute slice_start() const { return slice_start_; }

    // Weights must be >= 0; self-loops are ignored.
    void set(CellId origin, CellId dest, double weight);
    void add(CellId origin, CellId dest, double weight);
    double weight(CellId origin, CellId dest) const;
    // Nonzero entries leaving `origin`, ascending by destination.
    std::span<const Entry> row(CellId origin) const;
    double outgoing(CellId origin) const;
    double total() const;

    // Same layout as the road edge list: `cells m` header, then `u v w` with real w.
    static RequestGraph read(std::istream& in);
    static RequestGraph load(const std::string& path);
    void write(std::ostream& out) const;

    bool operator==(const RequestGraph& o) const;

private:
    void check(CellId c) const;

    Minute slice_start_ = 0;
    std::vector<std::vector<Entry>> rows_;
    std::vector<double> outgoing_;
};

struct TripRecord {
    Minute pickup_time = 0;
    CellId pickup_cell = 0;
    CellId dropoff_cell = 0;
    int passenger_count = 1;
};

struct GeoBounds {
    double min_lat = 0.0;
    double min_lon = 0.0;
    double max_lat = 0.0;
    double max_lon = 0.0;

    bool empty() const { return !(max_lat > min_lat) || !(max_lon > min_lon); }
};

// Half-open uniform binning: latitude picks the row, longitude the column.
// Returns nullopt outside [min, max).
std::optional<CellId> bin_location(double lat, double lon, const GridSpec& spec, const GeoBounds& box);

// Parses `YYYY-MM-DD[T ]HH:MM[:SS]` into minutes since 1970-01-01 (UTC).
std::optional<Minute> parse_timestamp(std::string_view text);

struct IngestResult {
    std::vector<TripRecord> records;
    std::size_t dropped_out_of_bounds = 0;
    std::size_t dropped_same_cell = 0;
    std::size_t malformed = 0;
};

// Reads `pickup_datetime,pickup_lat,pickup_lon,dropoff_lat,dropoff_lon,passenger_count`.
// A header row is skipped if present. Throws when nothing usable remains.
IngestResult ingest_trips(std::istream& in, const GridSpec& spec, const GeoBounds& box);

// Counts of trips i->j per slice, summed over `horizon_slices` starting at `first_slice`.
RequestGraph count_trips(std::span<const TripRecord> trips, int cell_count, std::int64_t first_slice,
                         int horizon_slices = 1);

// Historical slice-of-day average: for each target slice, the mean count over every
// earlier day (from the first day in `history`) at the same slice-of-day.
RequestGraph predict(std::span<const TripRecord> history, int cell_count, Minute slice_start,
                     int horizon_slices = 1);

// Source of predicted request graphs for routing and relocation.
class DemandPredictor {
public:
    virtual ~DemandPredictor() = default;
    virtual RequestGraph predict_slice(std::int64_t slice) const = 0;
};

class HistoricalAveragePredictor final : public DemandPredictor {
public:
    HistoricalAveragePredictor(std::vector<TripRecord> history, int cell_count);
    RequestGraph predict_slice(std::int64_t slice) const override;

private:
    std::vector<TripRecord> history_;
    int cell_count_;
};

// Returns the actual counts of the requested slice (isolates routing from prediction error).
class OracleReplayPredictor final : public DemandPredictor {
public:
    OracleReplayPredictor(std::vector<TripRecord> trips, int cell_count);
    RequestGraph predict_slice(std::int64_t slice) const override;

private:
    std::vector<TripRecord> trips_;
    int cell_count_;
};

// Same graph for every slice (fixtures).
class StaticPredictor final : public DemandPredictor {
public:
    explicit StaticPredictor(RequestGraph graph) : graph_(std::move(graph)) {}
    RequestGraph predict_slice(std::int64_t) const override { return graph_; }

private:
    RequestGraph graph_;
};

struct Hotspot {
    CellId cell = 0;
    double multiplier = 1.0;
};

// Synthetic workload: origin rate = base_rate * hotspot bump * time-of-day factor,
// spread over destinations within `dest_radius` (Chebyshev) in proportion to
// destination attractiveness * distance^-dest_distance_exponent.
struct SyntheticProfile {
    double base_rate = 0.05;        // expected orders per cell per slice, before multipliers
    std::vector<Hotspot> hotspots;
    int hotspot_spread = 2;         // bump decays linearly to 1 over this many cells
    std::vector<double> time_of_day;  // cyclic multipliers per slice; empty = 1
    int dest_radius = 3;
    double dest_distance_exponent = 1.0;  // 0 = distance-neutral, only attractiveness counts

    void validate() const;
};

class SyntheticDemand final : public DemandPredictor {
public:
    SyntheticDemand(GridSpec spec, SyntheticProfile profile, std::uint64_t seed);

    // The expected-rate graph; prediction is exact in expectation.
    RequestGraph rate_graph(std::int64_t slice) const;
    RequestGraph predict_slice(std::int64_t slice) const override { return rate_graph(slice); }
    // Independent Poisson counts per pair; t_d ~ U[1, 2]. Ids start at 0 and
    // request times are the slice start. Deterministic in (seed, slice, profile).
    std::vector<RideOrder> sample_orders(std::int64_t slice) const;

    double cell_multiplier(CellId c) const;

private:
    GridSpec spec_;
    SyntheticProfile profile_;
    std::uint64_t seed_;
    std::vector<std::vector<RequestGraph::Entry>> shares_;  // per origin, normalized destination shares
    std::vector<double> origin_factor_;
};

std::pair<RequestGraph, std::vector<RideOrder>> synth_demand(const GridSpec& spec, const SyntheticProfile& profile,
                                                             std::uint64_t seed, std::int64_t slice);

}  // namespace rideshare
