#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "graphrl/graph.hpp"

namespace graphrl {

struct CoverResult {
    std::vector<NodeId> cover;  // sorted
    std::size_t size = 0;
    std::string method;
    bool exact = false;
};

inline constexpr NodeId kDefaultExactLimit = 40;
inline constexpr NodeId kMaxExactLimit = 64;

// Graph too large for the exact solver.
class OracleLimitError : public DataError {
public:
    using DataError::DataError;
};

// Minimum vertex cover by branch and bound (degree-0/1 reductions,
// max-degree branching, matching bound for pruning). Throws
// OracleLimitError if the graph has more than `limit` nodes.
CoverResult exact_mvc(const Graph& graph, NodeId limit = kDefaultExactLimit);

// Both endpoints of a greedy maximal matching over the sorted edge list.
CoverResult two_approx_mvc(const Graph& graph);

// Size of the greedy maximal matching; never exceeds the minimum cover.
std::size_t matching_lower_bound(const Graph& graph);

// N minus the number of cliques in a clique partition (a DSATUR colouring of
// the complement). Every independent set meets each clique at most once, so
// this never exceeds the minimum cover either.
std::size_t clique_partition_lower_bound(const Graph& graph);

struct Reference {
    double size = 0.0;
    std::string kind;  // "exact", "matching_lb" or "clique_lb"
    [[nodiscard]] bool exact() const { return kind == "exact"; }
};

// Exact size when the graph is within `exact_limit`, otherwise the larger of
// the two lower bounds.
Reference reference_size(const Graph& graph, NodeId exact_limit = kDefaultExactLimit);

// |cover| / |reference|. Throws DataError if cover is not a vertex cover of
// graph. A reference of size 0 gives 1 for an empty cover.
double approx_ratio(const Graph& graph, const CoverResult& cover, const CoverResult& reference);
double approx_ratio(std::size_t cover_size, double reference_size);

}  // namespace graphrl
