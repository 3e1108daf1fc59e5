#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "graphrl/state.hpp"

namespace graphrl {

// Rules of a graph problem. Reward and candidate rules are pure functions of
// the state and the action; the termination test is collective because the
// residual adjacency is partitioned.
class Problem {
public:
    virtual ~Problem() = default;
    [[nodiscard]] virtual std::string_view name() const = 0;
    [[nodiscard]] virtual double reward(const PartitionedState& state, std::size_t slot, NodeId v) const = 0;
    [[nodiscard]] virtual bool is_candidate(const PartitionedState& state, std::size_t slot, NodeId v) const = 0;
    [[nodiscard]] virtual bool is_terminal(const PartitionedState& state, std::size_t slot,
                                           Communicator& comm) const = 0;
};

// Minimum vertex cover: -1 per selected node, candidates are nodes with
// uncovered edges, terminal once every edge is covered.
class MvcProblem final : public Problem {
public:
    [[nodiscard]] std::string_view name() const override { return "mvc"; }
    [[nodiscard]] double reward(const PartitionedState&, std::size_t, NodeId) const override { return -1.0; }
    [[nodiscard]] bool is_candidate(const PartitionedState& state, std::size_t slot, NodeId v) const override {
        return v < state.num_nodes() && state.is_candidate(slot, v);
    }
    [[nodiscard]] bool is_terminal(const PartitionedState& state, std::size_t slot,
                                   Communicator& comm) const override {
        return is_covered(state, slot, comm);
    }
};

// Throws ConfigError for unknown names.
std::shared_ptr<const Problem> make_problem(std::string_view name);
std::vector<std::string> problem_names();

struct StepResult {
    double reward = 0.0;
    bool done = false;
};

// Single-graph episode over the local partition.
class MvcEnv {
public:
    // Collective.
    static MvcEnv reset(std::shared_ptr<const Graph> graph, const Partition& partition, Communicator& comm,
                        std::size_t graph_id = 0, std::shared_ptr<const Problem> problem = make_problem("mvc"));

    // Collective; every rank passes the same v. Throws DataError for a
    // non-candidate action or a step after termination.
    StepResult step(NodeId v, Communicator& comm);

    [[nodiscard]] const PartitionedState& state() const { return state_; }
    [[nodiscard]] bool done() const { return done_; }
    [[nodiscard]] std::size_t steps() const { return steps_; }
    [[nodiscard]] double total_reward() const { return total_reward_; }

private:
    std::shared_ptr<const Problem> problem_;
    PartitionedState state_;
    bool done_ = false;
    std::size_t steps_ = 0;
    double total_reward_ = 0.0;
};

}  // namespace graphrl
