#include "rideshare/grid.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>
#include <mutex>
#include <ostream>
#include <queue>
#include <sstream>
#include <tuple>

#include "rideshare/error.hpp"

namespace rideshare {

struct RoadGraph::DistanceCache {
    explicit DistanceCache(int n) : rows(static_cast<std::size_t>(n)) {}

    std::mutex mutex;
    std::vector<std::unique_ptr<const std::vector<int>>> rows;
};

void GridSpec::validate() const {
    if (rows < 1 || cols < 1) {
        throw ConfigError("grid: rows and cols must be >= 1 (got " + std::to_string(rows) + "x" +
                          std::to_string(cols) + ")");
    }
    if (!(cell_size_miles > 0.0)) {
        throw ConfigError("grid: cell_size_miles must be > 0");
    }
    if (diagonal_weight < 1) {
        throw ConfigError("grid: diagonal_weight must be >= 1");
    }
}

RoadGraph::RoadGraph(int cell_count, std::vector<Edge> edges, std::optional<GridSpec> grid)
    : adjacency_(static_cast<std::size_t>(cell_count)),
      grid_(grid),
      cache_(std::make_shared<DistanceCache>(cell_count)) {
    if (cell_count < 1) {
        throw Error("road graph needs at least one cell");
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.u, a.v, a.dist) < std::tie(b.u, b.v, b.dist);
    });
    for (const Edge& e : edges) {
        if (e.u < 0 || e.u >= cell_count || e.v < 0 || e.v >= cell_count) {
            throw Error("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") references a missing cell");
        }
        if (e.u == e.v) {
            throw Error("self-loop on cell " + std::to_string(e.u));
        }
        if (e.dist <= 0) {
            throw Error("edge distance must be positive on (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
        }
        // Parallel edges collapse to the shortest one.
        if (!edges_.empty() && edges_.back().u == e.u && edges_.back().v == e.v) {
            continue;
        }
        edges_.push_back(e);
    }
    for (const Edge& e : edges_) {
        adjacency_[static_cast<std::size_t>(e.u)].push_back({e.v, e.dist});
        adjacency_[static_cast<std::size_t>(e.v)].push_back({e.u, e.dist});
    }
    for (auto& row : adjacency_) {
        std::sort(row.begin(), row.end(), [](const Neighbor& a, const Neighbor& b) {
            return std::tie(a.cell, a.dist) < std::tie(b.cell, b.dist);
        });
        row.erase(std::unique(row.begin(), row.end(),
                              [](const Neighbor& a, const Neighbor& b) { return a.cell == b.cell; }),
                  row.end());
    }

    // Connectivity.
    std::vector<char> seen(adjacency_.size(), 0);
    std::vector<CellId> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        CellId c = stack.back();
        stack.pop_back();
        for (const Neighbor& n : adjacency_[static_cast<std::size_t>(c)]) {
            if (!seen[static_cast<std::size_t>(n.cell)]) {
                seen[static_cast<std::size_t>(n.cell)] = 1;
                ++reached;
                stack.push_back(n.cell);
            }
        }
    }
    if (reached != adjacency_.size()) {
        throw Error("road graph is not connected (" + std::to_string(reached) + " of " +
                    std::to_string(adjacency_.size()) + " cells reachable from cell 0)");
    }
}

RoadGraph RoadGraph::from_grid(const GridSpec& spec) {
    spec.validate();
    std::vector<Edge> edges;
    for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
            const CellId here = spec.cell_at(r, c);
            // Emit each undirected edge once: east, south-west, south, south-east.
            const int deltas[4][2] = {{0, 1}, {1, -1}, {1, 0}, {1, 1}};
            for (const auto& d : deltas) {
                const int nr = r + d[0];
                const int nc = c + d[1];
                if (!spec.contains(nr, nc)) {
                    continue;
                }
                const bool diagonal = d[0] != 0 && d[1] != 0;
                edges.push_back({here, spec.cell_at(nr, nc), diagonal ? spec.diagonal_weight : 1});
            }
        }
    }
    return RoadGraph(spec.cell_count(), std::move(edges), spec);
}

RoadGraph RoadGraph::from_edges(int cell_count, std::span<const Edge> edges) {
    std::vector<Edge> normalized;
    normalized.reserve(edges.size());
    for (Edge e : edges) {
        if (e.u > e.v) {
            std::swap(e.u, e.v);
        }
        normalized.push_back(e);
    }
    return RoadGraph(cell_count, std::move(normalized), std::nullopt);
}

RoadGraph RoadGraph::read_edge_list(std::istream& in) {
    std::string line;
    std::optional<int> cells;
    std::vector<Edge> edges;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        std::istringstream ls(line);
        if (!cells) {
            std::string tag;
            int m = 0;
            if (!(ls >> tag >> m) || tag != "cells") {
                throw Error("edge list line " + std::to_string(line_no) + ": expected header `cells m`");
            }
            cells = m;
            continue;
        }
        Edge e;
        if (!(ls >> e.u >> e.v >> e.dist)) {
            throw Error("edge list line " + std::to_string(line_no) + ": expected `u v w`");
        }
        edges.push_back(e);
    }
    if (!cells) {
        throw Error("edge list: missing `cells m` header");
    }
    return from_edges(*cells, edges);
}

RoadGraph RoadGraph::load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open edge list '" + path + "'");
    }
    return read_edge_list(in);
}

void RoadGraph::write_edge_list(std::ostream& out) const {
    out << "cells " << cell_count() << '\n';
    for (const Edge& e : edges_) {
        out << e.u << ' ' << e.v << ' ' << e.dist << '\n';
    }
}

void RoadGraph::check_cell(CellId c) const {
    if (!contains(c)) {
        throw Error("cell " + std::to_string(c) + " is outside the road graph");
    }
}

std::span<const Neighbor> RoadGraph::neighbors(CellId c) const {
    check_cell(c);
    return adjacency_[static_cast<std::size_t>(c)];
}

std::optional<int> RoadGraph::edge_distance(CellId u, CellId v) const {
    for (const Neighbor& n : neighbors(u)) {
        if (n.cell == v) {
            return n.dist;
        }
    }
    return std::nullopt;
}

const std::vector<int>& RoadGraph::distances_from(CellId source) const {
    check_cell(source);
    std::lock_guard lock(cache_->mutex);
    auto& slot = cache_->rows[static_cast<std::size_t>(source)];
    if (slot) {
        return *slot;
    }
    std::vector<int> dist(adjacency_.size(), kUnreachable);
    using Item = std::pair<int, CellId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[static_cast<std::size_t>(source)] = 0;
    queue.push({0, source});
    while (!queue.empty()) {
        auto [d, c] = queue.top();
        queue.pop();
        if (d != dist[static_cast<std::size_t>(c)]) {
            continue;
        }
        for (const Neighbor& n : adjacency_[static_cast<std::size_t>(c)]) {
            int& best = dist[static_cast<std::size_t>(n.cell)];
            if (best == kUnreachable || d + n.dist < best) {
                best = d + n.dist;
                queue.push({best, n.cell});
            }
        }
    }
    slot = std::make_unique<const std::vector<int>>(std::move(dist));
    return *slot;
}

int RoadGraph::shortest_path_len(CellId a, CellId b) const {
    check_cell(b);
    const int d = distances_from(a)[static_cast<std::size_t>(b)];
    if (d == kUnreachable) {
        throw Error("no path between cells " + std::to_string(a) + " and " + std::to_string(b));
    }
    return d;
}

std::vector<CellId> RoadGraph::shortest_path(CellId a, CellId b) const {
    const std::vector<int>& to_b = distances_from(b);
    if (to_b[static_cast<std::size_t>(a)] == kUnreachable) {
        throw Error("no path between cells " + std::to_string(a) + " and " + std::to_string(b));
    }
    std::vector<CellId> path{a};
    CellId here = a;
    std::vector<char> visited(adjacency_.size(), 0);
    visited[static_cast<std::size_t>(a)] = 1;
    while (here != b) {
        const int remaining = to_b[static_cast<std::size_t>(here)];
        std::optional<CellId> next;
        // Neighbours are sorted by id, so the first tight edge is the lowest id.
        for (const Neighbor& n : adjacency_[static_cast<std::size_t>(here)]) {
            if (!visited[static_cast<std::size_t>(n.cell)] &&
                to_b[static_cast<std::size_t>(n.cell)] + n.dist == remaining) {
                next = n.cell;
                break;
            }
        }
        if (!next) {
            throw Error("shortest path reconstruction failed");
        }
        here = *next;
        visited[static_cast<std::size_t>(here)] = 1;
        path.push_back(here);
    }
    return path;
}

std::vector<CellId> RoadGraph::forward_neighbors(CellId v, CellId dest) const {
    const std::vector<int>& to_dest = distances_from(dest);
    const int here = to_dest[static_cast<std::size_t>(v)];
    std::vector<CellId> out;
    for (const Neighbor& n : neighbors(v)) {
        const int d = to_dest[static_cast<std::size_t>(n.cell)];
        if (d != kUnreachable && d < here) {
            out.push_back(n.cell);
        }
    }
    return out;
}

RoadGraph build_grid(const GridSpec& spec) { return RoadGraph::from_grid(spec); }

}  // namespace rideshare
