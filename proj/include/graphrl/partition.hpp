#pragma once

#include <vector>

#include "graphrl/types.hpp"

namespace graphrl {

// Row block owned by one worker.
struct Partition {
    int rank = 0;
    int num_workers = 1;
    NodeRange rows;

    bool operator==(const Partition&) const = default;
};

// Balanced contiguous blocks: with n = q*p + r, ranks 0..r-1 own q+1 rows and
// the remaining ranks own q, in rank order. Throws ConfigError unless 1 <= p <= n.
std::vector<Partition> partition_rows(NodeId n, int p);
Partition partition_for(NodeId n, int p, int rank);

}  // namespace graphrl
