#include "graphrl/partition.hpp"

#include <string>

namespace graphrl {

Partition partition_for(NodeId n, int p, int rank) {
    if (p < 1 || static_cast<NodeId>(p) > n) {
        throw ConfigError("cannot split " + std::to_string(n) + " rows over " + std::to_string(p) +
                          " workers (need 1 <= P <= N)");
    }
    if (rank < 0 || rank >= p) throw ConfigError("rank " + std::to_string(rank) + " out of range");
    const NodeId workers = static_cast<NodeId>(p);
    const NodeId r = static_cast<NodeId>(rank);
    const NodeId base = n / workers;
    const NodeId extra = n % workers;
    const NodeId begin = r * base + (r < extra ? r : extra);
    const NodeId size = base + (r < extra ? 1 : 0);
    return {rank, p, {begin, begin + size}};
}

std::vector<Partition> partition_rows(NodeId n, int p) {
    std::vector<Partition> parts;
    parts.push_back(partition_for(n, p, 0));
    for (int rank = 1; rank < p; ++rank) parts.push_back(partition_for(n, p, rank));
    return parts;
}

}  // namespace graphrl
