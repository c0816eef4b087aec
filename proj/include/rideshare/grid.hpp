#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rideshare {

using CellId = std::int32_t;

struct GridSpec {
    int rows = 1;
    int cols = 1;
    double cell_size_miles = 1.24;
    // Distance-units for a diagonal move; orthogonal moves always cost 1.
    int diagonal_weight = 1;

    int cell_count() const { return rows * cols; }
    CellId cell_at(int row, int col) const { return row * cols + col; }
    int row_of(CellId c) const { return c / cols; }
    int col_of(CellId c) const { return c % cols; }
    bool contains(int row, int col) const { return row >= 0 && row < rows && col >= 0 && col < cols; }

    // Throws ConfigError when a field is out of range.
    void validate() const;
};

struct Edge {
    CellId u = 0;
    CellId v = 0;
    int dist = 0;
};

struct Neighbor {
    CellId cell = 0;
    int dist = 0;
};

// Undirected road graph over grid cells with nonnegative integer distances.
//
// The graph is immutable after construction. Single-source distance rows are
// computed on first use and cached; the cache is shared between copies and is
// safe to read from several threads.
class RoadGraph {
public:
    static RoadGraph from_grid(const GridSpec& spec);
    static RoadGraph from_edges(int cell_count, std::span<const Edge> edges);

    // Edge-list text: header `cells m`, then one `u v w` line per edge.
    // Blank lines and lines starting with '#' are ignored.
    static RoadGraph read_edge_list(std::istream& in);
    static RoadGraph load_edge_list(const std::string& path);
    void write_edge_list(std::ostream& out) const;

    int cell_count() const { return static_cast<int>(adjacency_.size()); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::optional<GridSpec>& grid() const { return grid_; }

    bool contains(CellId c) const { return c >= 0 && c < cell_count(); }
    std::span<const Neighbor> neighbors(CellId c) const;
    std::optional<int> edge_distance(CellId u, CellId v) const;
    bool adjacent(CellId u, CellId v) const { return edge_distance(u, v).has_value(); }

    // Distances from `source` to every cell; unreachable cells hold kUnreachable.
    const std::vector<int>& distances_from(CellId source) const;
    int shortest_path_len(CellId a, CellId b) const;
    // Cells a..b inclusive. Among equal-length continuations the lowest CellId wins.
    std::vector<CellId> shortest_path(CellId a, CellId b) const;

    // Road neighbours u of v with SP(u, dest) < SP(v, dest), ascending by id.
    std::vector<CellId> forward_neighbors(CellId v, CellId dest) const;

    static constexpr int kUnreachable = -1;

private:
    struct DistanceCache;

    RoadGraph(int cell_count, std::vector<Edge> edges, std::optional<GridSpec> grid);
    void check_cell(CellId c) const;

    std::vector<std::vector<Neighbor>> adjacency_;
    std::vector<Edge> edges_;
    std::optional<GridSpec> grid_;
    std::shared_ptr<DistanceCache> cache_;
};

RoadGraph build_grid(const GridSpec& spec);

}  // namespace rideshare
