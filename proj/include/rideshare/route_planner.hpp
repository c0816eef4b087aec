#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rideshare/demand.hpp"
#include "rideshare/grid.hpp"

namespace rideshare {

struct Route {
    std::vector<CellId> cells;
    int total_dist = 0;
    double expected_requests = 0.0;
};

struct DagEdge {
    CellId from = 0;
    CellId to = 0;
    double req_weight = 0.0;
    int dist = 0;
};

// Forward-edge DAG between a trip source and destination: vertices no farther
// from the destination than the source, edges between road-adjacent cells that
// strictly approach the destination.
class Dag {
public:
    CellId source() const { return source_; }
    CellId dest() const { return dest_; }
    int source_to_dest() const { return sp_source_; }

    // Ascending by CellId.
    const std::vector<CellId>& vertices() const { return vertices_; }
    // Sorted by (from, to).
    const std::vector<DagEdge>& edges() const { return edges_; }
    std::span<const DagEdge> out_edges(CellId u) const;
    bool contains(CellId v) const;
    std::optional<DagEdge> edge(CellId u, CellId v) const;
    int sp_to_dest(CellId v) const;
    // Vertices by decreasing distance to the destination, ties by id.
    std::vector<CellId> topological_order() const;

private:
    friend Dag build_dag(const RoadGraph&, const RequestGraph&, CellId, CellId);

    CellId source_ = 0;
    CellId dest_ = 0;
    int sp_source_ = 0;
    std::vector<CellId> vertices_;
    std::vector<DagEdge> edges_;
    std::vector<std::size_t> edge_begin_;  // per vertex index into edges_
    std::vector<int> sp_to_dest_;          // per vertex index
    std::vector<int> index_;               // per cell, -1 when absent

    friend struct DpSolver;
};

// Argmax over v != source of w(source, v), lowest id on ties; nullopt when the row is empty.
std::optional<CellId> select_destination(const RequestGraph& req, CellId source);

Dag build_dag(const RoadGraph& road, const RequestGraph& req, CellId source, CellId dest);

// (x + travelled + sp_next_to_dest) / sp_source_to_dest <= t_d
bool edge_feasible(int x, int travelled, int sp_next_to_dest, int sp_source_to_dest, double t_d);

struct DpState {
    CellId cell = 0;
    int length = 0;
    auto operator<=>(const DpState&) const = default;
};

struct DpEntry {
    double value = 0.0;
    std::optional<DpState> pred;
};

// Best expected requests per reachable (cell, path length) state.
class DpTable {
public:
    explicit DpTable(int length_budget = 0) : length_budget_(length_budget) {}

    int length_budget() const { return length_budget_; }
    const std::map<DpState, DpEntry>& entries() const { return entries_; }
    const DpEntry* find(CellId cell, int length) const;
    // Best entry over all lengths at `cell` (ties: shorter length).
    std::optional<std::pair<DpState, DpEntry>> best_at(CellId cell) const;
    // CSV `cell,k,value,pred_cell,pred_k`, one row per state, ascending (cell, k).
    void write_csv(std::ostream& out) const;

private:
    friend struct DpSolver;

    int length_budget_;
    std::map<DpState, DpEntry> entries_;
};

struct DpResult {
    Route route;
    DpTable table;
    bool fallback = false;  // no feasible DP state at the destination; shortest path returned
    std::size_t states_visited = 0;
};

DpResult dp_solve_table(const Dag& dag, const RoadGraph& road, double t_d);
Route dp_solve(const Dag& dag, const RoadGraph& road, double t_d);

double detour_ratio(int route_dist_between, int shortest);

// Sum of w(i, j) over all ordered pairs with i before j on the route.
double path_request_count(const RequestGraph& req, const Route& route);
double path_request_count(const RequestGraph& req, std::span<const CellId> cells);

// Sum of road distances along consecutive cells; throws on a non-adjacent step.
int path_distance(const RoadGraph& road, std::span<const CellId> cells);

// Route with expected_requests = sum of consecutive request weights.
Route make_route(const RoadGraph& road, const RequestGraph& req, std::vector<CellId> cells);

// Destination choice, DAG and DP in one call; nullopt when the source has no demand.
std::optional<Route> recommend(const RoadGraph& road, const RequestGraph& req, CellId source, double t_d);

}  // namespace rideshare
