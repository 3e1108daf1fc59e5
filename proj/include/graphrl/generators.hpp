#pragma once

#include <cstdint>

#include "graphrl/graph.hpp"

namespace graphrl {

// G(n, rho): every unordered pair is an edge independently with probability rho.
Graph generate_er(NodeId n, double rho, std::uint64_t seed);

// Preferential attachment. The first d nodes form a clique K_d; each later
// node attaches to d distinct existing nodes chosen with probability
// proportional to their current degree (node d, the first to arrive, connects
// to all of K_d). The result has d(d-1)/2 + d(n-d) edges.
// Throws ConfigError unless n > d >= 1.
Graph generate_ba(NodeId n, NodeId d, std::uint64_t seed);

}  // namespace graphrl
