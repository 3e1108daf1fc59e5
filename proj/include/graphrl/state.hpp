#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "graphrl/collective.hpp"
#include "graphrl/graph.hpp"
#include "graphrl/partition.hpp"

namespace graphrl {

// Rows [rows.begin, rows.end) of a residual adjacency matrix with N columns,
// stored row-compressed with a live-entry count per row so rows and columns
// can be zeroed in place. Live columns in each row stay sorted, so
// entries() is the coordinate list ordered by (row, col).
class ResidualSlice {
public:
    ResidualSlice() = default;

    // The `rows` block of `graph` with every row and column of a node flagged
    // in `removed` (global, size N, or empty for none) zeroed.
    ResidualSlice(const Graph& graph, NodeRange rows, std::span<const std::uint8_t> removed = {});

    [[nodiscard]] NodeRange rows() const { return rows_; }
    [[nodiscard]] NodeId num_columns() const { return num_columns_; }

    // Live columns of global row v, which must be locally owned.
    [[nodiscard]] std::span<const NodeId> row(NodeId v) const {
        const auto i = v - rows_.begin;
        return {cols_.data() + offsets_[i], cols_.data() + offsets_[i] + live_[i]};
    }
    [[nodiscard]] NodeId degree(NodeId v) const { return live_[v - rows_.begin]; }
    [[nodiscard]] std::size_t nnz() const { return nnz_; }

    void clear_row(NodeId v);
    // Zeroes entry (row, col) if present; row must be locally owned.
    void erase(NodeId row, NodeId col);

    [[nodiscard]] std::vector<AdjacencyEntry> entries() const;

    // Bytes held by the index and column arrays.
    [[nodiscard]] std::size_t memory_bytes() const;

    bool operator==(const ResidualSlice& other) const;

private:
    NodeRange rows_;
    NodeId num_columns_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> live_;
    std::vector<NodeId> cols_;
    std::size_t nnz_ = 0;
};

// One graph's locally owned state.
struct GraphSlice {
    ResidualSlice adjacency;
    std::vector<std::uint8_t> solution;   // S restricted to local rows
    std::vector<std::uint8_t> candidate;  // C restricted to local rows
};

// Per-worker state for a batch of B graphs with a common node count.
//
// Besides the local slices, every rank keeps a replicated copy of the global
// solution set and of residual degrees. Actions are applied by all ranks in
// lockstep, so the replicas agree; they provide the O(N) snapshot stored in
// replay tuples and let any rank validate an action without communication.
class PartitionedState {
public:
    PartitionedState() = default;
    PartitionedState(Partition partition, std::vector<std::shared_ptr<const Graph>> graphs,
                     std::vector<std::size_t> graph_ids = {});

    [[nodiscard]] const Partition& partition() const { return partition_; }
    [[nodiscard]] NodeId num_nodes() const { return num_nodes_; }
    [[nodiscard]] std::size_t batch_size() const { return slots_.size(); }

    [[nodiscard]] const GraphSlice& slice(std::size_t slot) const { return slices_[slot]; }
    [[nodiscard]] std::span<const GraphSlice> slices() const { return slices_; }
    [[nodiscard]] const Graph& graph(std::size_t slot) const { return *slots_[slot].graph; }
    [[nodiscard]] std::size_t graph_id(std::size_t slot) const { return slots_[slot].graph_id; }

    // Replicated views, indexed by global node id.
    [[nodiscard]] const std::vector<std::uint8_t>& solution_mask(std::size_t slot) const {
        return slots_[slot].in_solution;
    }
    [[nodiscard]] const std::vector<NodeId>& solution_order(std::size_t slot) const {
        return slots_[slot].order;
    }
    [[nodiscard]] NodeId residual_degree(std::size_t slot, NodeId v) const {
        return slots_[slot].residual_degree[v];
    }
    [[nodiscard]] bool is_candidate(std::size_t slot, NodeId v) const {
        return !slots_[slot].in_solution[v] && slots_[slot].residual_degree[v] > 0;
    }
    [[nodiscard]] std::size_t num_candidates(std::size_t slot) const;

    friend void apply_action(PartitionedState& state, std::size_t slot, NodeId v);

private:
    struct Slot {
        std::shared_ptr<const Graph> graph;
        std::size_t graph_id = 0;
        std::vector<std::uint8_t> in_solution;
        std::vector<NodeId> residual_degree;
        std::vector<NodeId> order;
    };

    Partition partition_;
    NodeId num_nodes_ = 0;
    std::vector<Slot> slots_;
    std::vector<GraphSlice> slices_;
};

// Adds candidate v of graph `slot` to the solution: S[v] = 1, C[v] = 0, row v
// (if owned) and column v zeroed, and nodes left without residual edges drop
// out of C. Throws DataError if v is out of range, already in S, or not a
// candidate.
void apply_action(PartitionedState& state, std::size_t slot, NodeId v);

// Collective: true iff the residual adjacency of `slot` is empty on every rank.
bool is_covered(const PartitionedState& state, std::size_t slot, Communicator& comm);

// Collective: is_covered for every slot using a single all-reduce.
std::vector<std::uint8_t> covered_flags(const PartitionedState& state, Communicator& comm);

}  // namespace graphrl
