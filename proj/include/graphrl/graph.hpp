#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include "graphrl/types.hpp"

namespace graphrl {

// Undirected edge stored with u < v.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    auto operator<=>(const Edge&) const = default;
};

// One stored adjacency entry (row, col) with implicit value 1.0.
struct AdjacencyEntry {
    NodeId row = 0;
    NodeId col = 0;
    bool operator==(const AdjacencyEntry&) const = default;
};

// Immutable, unweighted, undirected graph.
//
// Adjacency is kept row-sorted: for each node the sorted list of neighbours,
// which is the coordinate list ordered by (row, col). Every edge contributes
// the two entries (u, v) and (v, u).
class Graph {
public:
    Graph() = default;

    // Builds a graph from an edge list. Throws DataError on self-loops,
    // out-of-range indices or duplicate edges (in either orientation).
    Graph(NodeId num_nodes, std::vector<Edge> edges);

    [[nodiscard]] NodeId num_nodes() const { return num_nodes_; }
    [[nodiscard]] std::size_t num_edges() const { return edges_.size(); }
    [[nodiscard]] std::size_t num_entries() const { return neighbors_.size(); }

    // Sorted, u < v.
    [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }

    [[nodiscard]] std::span<const NodeId> neighbors(NodeId v) const {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }
    [[nodiscard]] NodeId degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
    [[nodiscard]] bool has_edge(NodeId u, NodeId v) const;

    // Coordinate-format adjacency, sorted by (row, col).
    [[nodiscard]] std::vector<AdjacencyEntry> coordinate_adjacency() const;

    bool operator==(const Graph& other) const {
        return num_nodes_ == other.num_nodes_ && edges_ == other.edges_;
    }

private:
    NodeId num_nodes_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> neighbors_;
};

// True iff every edge of `graph` has an endpoint flagged in `in_cover`
// (indexed by node, size num_nodes).
bool is_vertex_cover(const Graph& graph, std::span<const std::uint8_t> in_cover);
bool is_vertex_cover(const Graph& graph, std::span<const NodeId> cover);

}  // namespace graphrl
