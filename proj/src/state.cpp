#include "graphrl/state.hpp"

#include <algorithm>
#include <string>

namespace graphrl {

ResidualSlice::ResidualSlice(const Graph& graph, NodeRange rows, std::span<const std::uint8_t> removed)
    : rows_(rows), num_columns_(graph.num_nodes()) {
    if (rows.end > graph.num_nodes() || rows.begin > rows.end) {
        throw DataError("row block out of range for graph");
    }
    auto gone = [&](NodeId v) { return !removed.empty() && removed[v] != 0; };
    offsets_.assign(static_cast<std::size_t>(rows.size()) + 1, 0);
    live_.assign(rows.size(), 0);
    for (NodeId v = rows.begin; v < rows.end; ++v) {
        const auto i = v - rows.begin;
        offsets_[i + 1] = offsets_[i] + graph.degree(v);
    }
    cols_.resize(offsets_.back());
    for (NodeId v = rows.begin; v < rows.end; ++v) {
        const auto i = v - rows.begin;
        if (gone(v)) continue;
        auto* out = cols_.data() + offsets_[i];
        for (NodeId u : graph.neighbors(v)) {
            if (!gone(u)) out[live_[i]++] = u;
        }
        nnz_ += live_[i];
    }
}

void ResidualSlice::clear_row(NodeId v) {
    auto& live = live_[v - rows_.begin];
    nnz_ -= live;
    live = 0;
}

void ResidualSlice::erase(NodeId row, NodeId col) {
    const auto i = row - rows_.begin;
    auto* first = cols_.data() + offsets_[i];
    auto* last = first + live_[i];
    auto* it = std::lower_bound(first, last, col);
    if (it == last || *it != col) return;
    std::copy(it + 1, last, it);
    --live_[i];
    --nnz_;
}

std::vector<AdjacencyEntry> ResidualSlice::entries() const {
    std::vector<AdjacencyEntry> out;
    out.reserve(nnz_);
    for (NodeId v = rows_.begin; v < rows_.end; ++v) {
        for (NodeId u : row(v)) out.push_back({v, u});
    }
    return out;
}

std::size_t ResidualSlice::memory_bytes() const {
    return offsets_.size() * sizeof(std::size_t) + live_.size() * sizeof(NodeId) +
           cols_.size() * sizeof(NodeId);
}

bool ResidualSlice::operator==(const ResidualSlice& other) const {
    return rows_ == other.rows_ && num_columns_ == other.num_columns_ && entries() == other.entries();
}

PartitionedState::PartitionedState(Partition partition, std::vector<std::shared_ptr<const Graph>> graphs,
                                   std::vector<std::size_t> graph_ids)
    : partition_(partition) {
    if (!graph_ids.empty() && graph_ids.size() != graphs.size()) {
        throw DataError("graph id list does not match the batch");
    }
    if (!graphs.empty()) num_nodes_ = graphs.front()->num_nodes();
    slots_.reserve(graphs.size());
    slices_.reserve(graphs.size());
    for (std::size_t b = 0; b < graphs.size(); ++b) {
        const Graph& g = *graphs[b];
        if (g.num_nodes() != num_nodes_) {
            throw DataError("batched graphs must share a node count (" + std::to_string(num_nodes_) +
                            " vs " + std::to_string(g.num_nodes()) + ")");
        }
        if (partition.rows.end > num_nodes_) throw DataError("partition exceeds graph size");
        Slot slot;
        slot.graph_id = graph_ids.empty() ? b : graph_ids[b];
        slot.in_solution.assign(num_nodes_, 0);
        slot.residual_degree.resize(num_nodes_);
        for (NodeId v = 0; v < num_nodes_; ++v) slot.residual_degree[v] = g.degree(v);

        GraphSlice slice;
        slice.adjacency = ResidualSlice(g, partition.rows);
        slice.solution.assign(partition.rows.size(), 0);
        slice.candidate.resize(partition.rows.size());
        for (NodeId v = partition.rows.begin; v < partition.rows.end; ++v) {
            slice.candidate[v - partition.rows.begin] = g.degree(v) > 0 ? 1 : 0;
        }
        slot.graph = std::move(graphs[b]);
        slots_.push_back(std::move(slot));
        slices_.push_back(std::move(slice));
    }
}

std::size_t PartitionedState::num_candidates(std::size_t slot) const {
    std::size_t count = 0;
    for (NodeId v = 0; v < num_nodes_; ++v) count += is_candidate(slot, v) ? 1 : 0;
    return count;
}

void apply_action(PartitionedState& state, std::size_t slot, NodeId v) {
    auto& s = state.slots_.at(slot);
    if (v >= state.num_nodes_) {
        throw DataError("action " + std::to_string(v) + " out of range for " +
                        std::to_string(state.num_nodes_) + " nodes");
    }
    if (s.in_solution[v]) throw DataError("node " + std::to_string(v) + " is already in the solution");
    if (s.residual_degree[v] == 0) {
        throw DataError("node " + std::to_string(v) + " is not a candidate (no uncovered edges)");
    }

    const NodeRange rows = state.partition_.rows;
    auto& local = state.slices_[slot];
    s.in_solution[v] = 1;
    s.order.push_back(v);
    s.residual_degree[v] = 0;
    if (rows.contains(v)) {
        local.solution[v - rows.begin] = 1;
        local.candidate[v - rows.begin] = 0;
        local.adjacency.clear_row(v);
    }
    for (NodeId u : s.graph->neighbors(v)) {
        if (s.in_solution[u]) continue;
        --s.residual_degree[u];
        if (rows.contains(u)) {
            local.adjacency.erase(u, v);
            if (local.adjacency.degree(u) == 0) local.candidate[u - rows.begin] = 0;
        }
    }
}

bool is_covered(const PartitionedState& state, std::size_t slot, Communicator& comm) {
    const std::vector<std::uint64_t> local{state.slice(slot).adjacency.nnz()};
    return comm.all_reduce_sum(local)[0] == 0;
}

std::vector<std::uint8_t> covered_flags(const PartitionedState& state, Communicator& comm) {
    std::vector<std::uint64_t> local(state.batch_size());
    for (std::size_t b = 0; b < local.size(); ++b) local[b] = state.slice(b).adjacency.nnz();
    const auto total = comm.all_reduce_sum(local);
    std::vector<std::uint8_t> out(total.size());
    for (std::size_t b = 0; b < total.size(); ++b) out[b] = total[b] == 0 ? 1 : 0;
    return out;
}

}  // namespace graphrl
