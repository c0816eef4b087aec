#include "rideshare/route_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "rideshare/error.hpp"

namespace rideshare {

namespace {
constexpr double kRatioSlack = 1e-9;
constexpr double kAbsent = -std::numeric_limits<double>::infinity();
}  // namespace

// ---------------------------------------------------------------------------
// DAG

std::span<const DagEdge> Dag::out_edges(CellId u) const {
    if (!contains(u)) {
        return {};
    }
    const auto i = static_cast<std::size_t>(index_[static_cast<std::size_t>(u)]);
    return std::span<const DagEdge>(edges_).subspan(edge_begin_[i], edge_begin_[i + 1] - edge_begin_[i]);
}

bool Dag::contains(CellId v) const {
    return v >= 0 && static_cast<std::size_t>(v) < index_.size() && index_[static_cast<std::size_t>(v)] >= 0;
}

std::optional<DagEdge> Dag::edge(CellId u, CellId v) const {
    for (const DagEdge& e : out_edges(u)) {
        if (e.to == v) {
            return e;
        }
    }
    return std::nullopt;
}

int Dag::sp_to_dest(CellId v) const {
    if (!contains(v)) {
        throw Error("cell " + std::to_string(v) + " is not a DAG vertex");
    }
    return sp_to_dest_[static_cast<std::size_t>(index_[static_cast<std::size_t>(v)])];
}

std::vector<CellId> Dag::topological_order() const {
    std::vector<CellId> order = vertices_;
    std::stable_sort(order.begin(), order.end(), [this](CellId a, CellId b) { return sp_to_dest(a) > sp_to_dest(b); });
    return order;
}

std::optional<CellId> select_destination(const RequestGraph& req, CellId source) {
    std::optional<CellId> best;
    double best_weight = 0.0;
    for (const auto& e : req.row(source)) {
        // Rows are ascending by id, so strict > keeps the lowest id on ties.
        if (e.dest != source && e.weight > best_weight) {
            best = e.dest;
            best_weight = e.weight;
        }
    }
    return best;
}

Dag build_dag(const RoadGraph& road, const RequestGraph& req, CellId source, CellId dest) {
    if (source == dest) {
        throw Error("build_dag: source and destination coincide");
    }
    if (req.cell_count() != road.cell_count()) {
        throw Error("build_dag: request graph and road graph cover different cell counts");
    }
    const std::vector<int>& to_dest = road.distances_from(dest);
    const int bound = to_dest[static_cast<std::size_t>(source)];
    if (bound == RoadGraph::kUnreachable) {
        throw Error("build_dag: destination unreachable from source");
    }

    Dag dag;
    dag.source_ = source;
    dag.dest_ = dest;
    dag.sp_source_ = bound;
    dag.index_.assign(static_cast<std::size_t>(road.cell_count()), -1);
    for (CellId v = 0; v < road.cell_count(); ++v) {
        const int d = to_dest[static_cast<std::size_t>(v)];
        if (d != RoadGraph::kUnreachable && d <= bound) {
            dag.index_[static_cast<std::size_t>(v)] = static_cast<int>(dag.vertices_.size());
            dag.vertices_.push_back(v);
            dag.sp_to_dest_.push_back(d);
        }
    }
    dag.edge_begin_.reserve(dag.vertices_.size() + 1);
    for (std::size_t i = 0; i < dag.vertices_.size(); ++i) {
        const CellId u = dag.vertices_[i];
        dag.edge_begin_.push_back(dag.edges_.size());
        for (const Neighbor& n : road.neighbors(u)) {
            if (dag.contains(n.cell) && dag.sp_to_dest(n.cell) < dag.sp_to_dest_[i]) {
                dag.edges_.push_back({u, n.cell, req.weight(u, n.cell), n.dist});
            }
        }
    }
    dag.edge_begin_.push_back(dag.edges_.size());
    return dag;
}

bool edge_feasible(int x, int travelled, int sp_next_to_dest, int sp_source_to_dest, double t_d) {
    if (sp_source_to_dest <= 0) {
        throw Error("edge_feasible: shortest source-destination distance must be > 0");
    }
    return static_cast<double>(x + travelled + sp_next_to_dest) <=
           t_d * static_cast<double>(sp_source_to_dest) + kRatioSlack;
}

// ---------------------------------------------------------------------------
// DP

const DpEntry* DpTable::find(CellId cell, int length) const {
    auto it = entries_.find(DpState{cell, length});
    return it == entries_.end() ? nullptr : &it->second;
}

std::optional<std::pair<DpState, DpEntry>> DpTable::best_at(CellId cell) const {
    std::optional<std::pair<DpState, DpEntry>> best;
    for (auto it = entries_.lower_bound(DpState{cell, 0}); it != entries_.end() && it->first.cell == cell; ++it) {
        if (!best || it->second.value > best->second.value) {
            best = *it;
        }
    }
    return best;
}

void DpTable::write_csv(std::ostream& out) const {
    out << "cell,k,value,pred_cell,pred_k\n";
    for (const auto& [state, entry] : entries_) {
        out << state.cell << ',' << state.length << ',' << entry.value << ',';
        if (entry.pred) {
            out << entry.pred->cell << ',' << entry.pred->length;
        } else {
            out << ',';
        }
        out << '\n';
    }
}

struct DpSolver {
    const Dag& dag;
    double t_d;

    DpResult run() const {
        const int sp_src = dag.source_to_dest();
        const int budget = static_cast<int>(std::floor(t_d * sp_src + kRatioSlack));
        const std::size_t width = static_cast<std::size_t>(budget) + 1;
        const std::size_t n = dag.vertices().size();

        std::vector<double> value(n * width, kAbsent);
        std::vector<DpState> pred(n * width, DpState{-1, -1});
        auto slot = [&](CellId v, int k) {
            return static_cast<std::size_t>(dag.index_[static_cast<std::size_t>(v)]) * width +
                   static_cast<std::size_t>(k);
        };
        value[slot(dag.source(), 0)] = 0.0;

        std::size_t visited = 0;
        for (CellId u : dag.topological_order()) {
            for (int k_prev = 0; k_prev <= budget; ++k_prev) {
                const double here = value[slot(u, k_prev)];
                if (here == kAbsent) {
                    continue;
                }
                ++visited;
                for (const DagEdge& e : dag.out_edges(u)) {
                    const int k = k_prev + e.dist;
                    if (k > budget || !edge_feasible(e.dist, k_prev, dag.sp_to_dest(e.to), sp_src, t_d)) {
                        continue;
                    }
                    const double candidate = here + e.req_weight;
                    const std::size_t s = slot(e.to, k);
                    const DpState& incumbent = pred[s];
                    const bool better =
                        candidate > value[s] ||
                        (candidate == value[s] &&
                         (u < incumbent.cell || (u == incumbent.cell && k_prev < incumbent.length)));
                    if (better) {
                        value[s] = candidate;
                        pred[s] = DpState{u, k_prev};
                    }
                }
            }
        }

        DpResult result;
        result.table = DpTable(budget);
        result.states_visited = visited;
        for (CellId v : dag.vertices()) {
            for (int k = 0; k <= budget; ++k) {
                const std::size_t s = slot(v, k);
                if (value[s] == kAbsent) {
                    continue;
                }
                DpEntry entry{value[s], std::nullopt};
                if (pred[s].cell >= 0) {
                    entry.pred = pred[s];
                }
                result.table.entries_.emplace(DpState{v, k}, entry);
            }
        }
        return result;
    }
};

DpResult dp_solve_table(const Dag& dag, const RoadGraph& road, double t_d) {
    if (!(t_d >= 1.0)) {
        throw Error("dp_solve: detour threshold must be >= 1");
    }
    DpResult result = DpSolver{dag, t_d}.run();
    const auto best = result.table.best_at(dag.dest());
    if (best) {
        std::vector<CellId> cells;
        std::optional<DpState> at = best->first;
        while (at) {
            cells.push_back(at->cell);
            const DpEntry* e = result.table.find(at->cell, at->length);
            at = e->pred;
        }
        std::reverse(cells.begin(), cells.end());
        result.route.cells = std::move(cells);
        result.route.total_dist = best->first.length;
        result.route.expected_requests = best->second.value;
        return result;
    }

    result.fallback = true;
    result.route.cells = road.shortest_path(dag.source(), dag.dest());
    result.route.total_dist = path_distance(road, result.route.cells);
    double sum = 0.0;
    for (std::size_t i = 1; i < result.route.cells.size(); ++i) {
        if (const auto e = dag.edge(result.route.cells[i - 1], result.route.cells[i])) {
            sum += e->req_weight;
        }
    }
    result.route.expected_requests = sum;
    return result;
}

Route dp_solve(const Dag& dag, const RoadGraph& road, double t_d) { return dp_solve_table(dag, road, t_d).route; }

// ---------------------------------------------------------------------------
// Route metrics

double detour_ratio(int route_dist_between, int shortest) {
    if (shortest <= 0) {
        throw Error("detour_ratio: shortest distance must be > 0");
    }
    return static_cast<double>(route_dist_between) / static_cast<double>(shortest);
}

double path_request_count(const RequestGraph& req, std::span<const CellId> cells) {
    double sum = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        for (std::size_t j = i + 1; j < cells.size(); ++j) {
            sum += req.weight(cells[i], cells[j]);
        }
    }
    return sum;
}

double path_request_count(const RequestGraph& req, const Route& route) {
    return path_request_count(req, route.cells);
}

int path_distance(const RoadGraph& road, std::span<const CellId> cells) {
    int total = 0;
    for (std::size_t i = 1; i < cells.size(); ++i) {
        const auto d = road.edge_distance(cells[i - 1], cells[i]);
        if (!d) {
            throw Error("path steps between non-adjacent cells " + std::to_string(cells[i - 1]) + " and " +
                        std::to_string(cells[i]));
        }
        total += *d;
    }
    return total;
}

Route make_route(const RoadGraph& road, const RequestGraph& req, std::vector<CellId> cells) {
    Route r;
    r.total_dist = path_distance(road, cells);
    for (std::size_t i = 1; i < cells.size(); ++i) {
        r.expected_requests += req.weight(cells[i - 1], cells[i]);
    }
    r.cells = std::move(cells);
    return r;
}

std::optional<Route> recommend(const RoadGraph& road, const RequestGraph& req, CellId source, double t_d) {
    const auto dest = select_destination(req, source);
    if (!dest) {
        return std::nullopt;
    }
    const Dag dag = build_dag(road, req, source, *dest);
    return dp_solve(dag, road, t_d);
}

}  // namespace rideshare
