#include "graphrl/env.hpp"

namespace graphrl {

std::shared_ptr<const Problem> make_problem(std::string_view name) {
    if (name == "mvc") return std::make_shared<MvcProblem>();
    throw ConfigError("unknown problem '" + std::string(name) + "' (available: mvc)");
}

std::vector<std::string> problem_names() { return {"mvc"}; }

MvcEnv MvcEnv::reset(std::shared_ptr<const Graph> graph, const Partition& partition, Communicator& comm,
                     std::size_t graph_id, std::shared_ptr<const Problem> problem) {
    MvcEnv env;
    env.problem_ = std::move(problem);
    env.state_ = PartitionedState(partition, {std::move(graph)}, {graph_id});
    env.done_ = env.problem_->is_terminal(env.state_, 0, comm);
    return env;
}

StepResult MvcEnv::step(NodeId v, Communicator& comm) {
    if (done_) throw DataError("step after the episode terminated");
    if (!problem_->is_candidate(state_, 0, v)) {
        throw DataError("invalid action " + std::to_string(v) + ": not a candidate node");
    }
    const double reward = problem_->reward(state_, 0, v);
    apply_action(state_, 0, v);
    ++steps_;
    total_reward_ += reward;
    done_ = problem_->is_terminal(state_, 0, comm);
    return {reward, done_};
}

}  // namespace graphrl
