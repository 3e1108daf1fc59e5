#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "graphrl/policy.hpp"
#include "graphrl/state.hpp"

namespace graphrl {

// Number of nodes picked per policy evaluation as a function of the current
// candidate count |C|. Tier (f, d) applies when |C| > f*N; the first matching
// tier wins. Thresholds strictly decrease, d does not increase, and the last
// threshold is 0 so every non-empty C is covered.
class SelectionSchedule {
public:
    struct Tier {
        double fraction = 0.0;
        int d = 1;
        bool operator==(const Tier&) const = default;
    };

    SelectionSchedule() : SelectionSchedule(fixed(1)) {}
    explicit SelectionSchedule(std::vector<Tier> tiers);

    // 8 above N/2, 4 above N/4, 2 above N/8, else 1.
    static SelectionSchedule adaptive();
    static SelectionSchedule fixed(int d);
    // "adaptive", "fixed:<d>", or a tier list such as "0.5:8,0.25:4,0:1".
    // Throws ConfigError.
    static SelectionSchedule parse(const std::string& text);

    [[nodiscard]] int d_for(std::size_t num_candidates, NodeId num_nodes) const;
    [[nodiscard]] const std::vector<Tier>& tiers() const { return tiers_; }
    [[nodiscard]] std::string to_string() const;

    bool operator==(const SelectionSchedule&) const = default;

private:
    std::vector<Tier> tiers_;
};

// Up to d candidates with the highest scores, highest first, ties to the
// lower index. Throws DataError if no node is a candidate.
std::vector<NodeId> select_top_d(std::span<const float> scores, std::span<const std::uint8_t> candidate,
                                 int d);

// Collective. Scores of every node of every graph in the batch, laid out
// [graph][node], with non-candidates set to -infinity. One policy
// evaluation: embed_forward, q_forward and one all-gather of the scores.
std::vector<float> global_scores(const PartitionedState& state, const PolicyParams<float>& params,
                                 Communicator& comm);

struct GraphSolution {
    std::size_t graph_id = 0;
    std::vector<NodeId> cover;  // sorted
    std::vector<NodeId> order;  // insertion order
    std::size_t policy_evals = 0;
    std::size_t skipped = 0;    // picks dropped because an earlier pick in the group covered them
};

struct SolveResult {
    std::vector<GraphSolution> graphs;
    std::size_t policy_evals = 0;  // batched evaluations performed
    double seconds = 0.0;
};

// Collective. Greedy construction on a batch of graphs with a common node
// count: evaluate the policy, add the top-d candidates of each unfinished
// graph, repeat until every graph is covered.
SolveResult solve(const std::vector<std::shared_ptr<const Graph>>& graphs, const PolicyParams<float>& params,
                  const SelectionSchedule& schedule, Communicator& comm, std::vector<std::size_t> graph_ids = {});

// Collective. solve() over graphs of any sizes, batching graphs that share a
// node count (at most max_batch per call). Results are in input order.
std::vector<GraphSolution> solve_all(const std::vector<std::shared_ptr<const Graph>>& graphs,
                                     const PolicyParams<float>& params, const SelectionSchedule& schedule,
                                     Communicator& comm, std::size_t max_batch = 16);

}  // namespace graphrl
