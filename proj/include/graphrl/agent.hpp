#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "graphrl/checkpoint.hpp"
#include "graphrl/inference.hpp"
#include "graphrl/optimizer.hpp"
#include "graphrl/policy.hpp"
#include "graphrl/rng.hpp"
#include "graphrl/state.hpp"

namespace graphrl {

using Dataset = std::vector<std::shared_ptr<const Graph>>;

struct ExperienceTuple {
    std::uint32_t graph_index = 0;
    std::vector<std::uint8_t> solution;  // pre-action S, one flag per node
    NodeId action = 0;
    float target = 0.0F;

    bool operator==(const ExperienceTuple&) const = default;
};

// FIFO ring of experience tuples for graphs with a fixed node count.
// Snapshots are stored as packed bitsets.
class ReplayBuffer {
public:
    ReplayBuffer(std::size_t capacity, NodeId num_nodes);

    // Throws DataError if the action is in the snapshot, the target is not
    // finite, or the snapshot length differs from the node count.
    void push(const ExperienceTuple& tuple);

    [[nodiscard]] std::size_t size() const { return graph_index_.size(); }
    [[nodiscard]] std::size_t capacity() const { return capacity_; }
    [[nodiscard]] NodeId num_nodes() const { return num_nodes_; }
    [[nodiscard]] std::uint64_t total_pushed() const { return pushed_; }

    // Slot i in [0, size()); slots are overwritten oldest-first once full.
    [[nodiscard]] ExperienceTuple at(std::size_t i) const;
    // Slot holding the i-th oldest tuple.
    [[nodiscard]] std::size_t oldest_slot(std::size_t i) const;

    // Bytes held by stored tuples.
    [[nodiscard]] std::size_t memory_bytes() const;
    [[nodiscard]] std::size_t bytes_per_tuple() const { return words_ * 8 + 12; }

private:
    std::size_t capacity_;
    NodeId num_nodes_;
    std::size_t words_;
    std::size_t next_ = 0;
    std::uint64_t pushed_ = 0;
    std::vector<std::uint32_t> graph_index_;
    std::vector<NodeId> action_;
    std::vector<float> target_;
    std::vector<std::uint64_t> bits_;
};

struct TrainConfig {
    int embed_dim = 32;
    int layers = 2;
    std::size_t batch_size = 32;
    int tau = 4;
    double gamma = 0.9;
    double epsilon_start = 0.9;
    double epsilon_end = 0.1;
    std::uint64_t epsilon_decay_steps = 500;
    double learning_rate = 1e-5;
    std::size_t replay_capacity = 50000;
    double init_scale = 0.05;
    std::uint64_t seed = 1;
    std::uint64_t eval_every = 10;
    std::uint64_t max_steps = 1000;  // steps in this run; 0 means no limit
    std::optional<std::size_t> episodes;  // unset means no limit

    // Throws ConfigError.
    void validate() const;
};

// Linear decay from epsilon_start to epsilon_end over epsilon_decay_steps.
double epsilon_at(const TrainConfig& cfg, std::uint64_t step);

// Collective. Epsilon-greedy choice for graph `slot`: with probability
// epsilon a uniform candidate, otherwise the best-scoring candidate (lowest
// index on ties). Every rank must pass an identically seeded rng. Throws
// DataError if there is no candidate.
NodeId act(const PartitionedState& state, std::size_t slot, const PolicyParams<float>& params, double epsilon,
           Rng& rng, Communicator& comm);

// Collective. reward if `terminal`, else reward + gamma * max over the
// candidates of Q(next_state, .).
double compute_target(double reward, const PartitionedState& next_state, bool terminal,
                      const PolicyParams<float>& params, double gamma, Communicator& comm);

// Residual adjacency, solution and candidate slices of each tuple's state,
// restricted to the partition's rows. Throws DataError for mixed node counts.
std::vector<GraphSlice> tuples_to_graphs(std::span<const ExperienceTuple> tuples, const Dataset& dataset,
                                         const Partition& partition);

// Collective. Samples B tuples without replacement and runs tau
// forward/backward/Adam iterations on that batch. Returns the tau losses,
// or nothing if the buffer holds fewer than B tuples.
std::vector<double> train_step(const ReplayBuffer& buffer, const Dataset& dataset, PolicyParams<float>& params,
                               AdamState<float>& adam, const TrainConfig& cfg, Rng& rng, Communicator& comm);

struct EvalSet {
    Dataset graphs;
    std::vector<double> reference;  // optimum or lower bound per graph
};

struct MetricsRow {
    std::uint64_t step = 0;
    double epsilon = 0.0;
    double loss = 0.0;  // mean loss of the latest train_step, NaN before the first
    double mean_approx_ratio = 0.0;
    double cover_size_mean = 0.0;
};

// Collective. Greedy (d = 1) covers of every graph and their mean ratio to
// the references.
MetricsRow evaluate(const EvalSet& eval, const PolicyParams<float>& params, Communicator& comm);

struct TrainResult {
    PolicyParams<float> params;
    AdamState<float> optimizer;
    std::uint64_t steps = 0;  // total, including steps from a resumed checkpoint
    std::size_t episodes = 0;
    std::vector<MetricsRow> metrics;
    std::size_t replay_size = 0;
    std::size_t replay_bytes = 0;

    [[nodiscard]] Checkpoint checkpoint() const { return {params, optimizer, steps}; }
};

// Collective. Episodes on uniformly drawn training graphs until either limit
// is hit; evaluates `eval` every eval_every steps. With `resume`, parameters,
// optimizer state and the step counter continue from the checkpoint.
TrainResult train(const Dataset& dataset, const EvalSet& eval, const TrainConfig& cfg, Communicator& comm,
                  const Checkpoint* resume = nullptr,
                  const std::function<void(const MetricsRow&)>& on_metrics = {});

}  // namespace graphrl
