#include "graphrl/agent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "graphrl/env.hpp"
#include "graphrl/oracle.hpp"

namespace graphrl {

ReplayBuffer::ReplayBuffer(std::size_t capacity, NodeId num_nodes)
    : capacity_(capacity), num_nodes_(num_nodes), words_((static_cast<std::size_t>(num_nodes) + 63) / 64) {
    if (capacity == 0) throw ConfigError("replay capacity must be positive");
}

void ReplayBuffer::push(const ExperienceTuple& t) {
    if (t.solution.size() != num_nodes_) {
        throw DataError("snapshot has " + std::to_string(t.solution.size()) + " flags, buffer expects " +
                        std::to_string(num_nodes_));
    }
    if (t.action >= num_nodes_) throw DataError("tuple action out of range");
    if (t.solution[t.action]) throw DataError("tuple action is already in its solution snapshot");
    if (!std::isfinite(t.target)) throw DataError("tuple target is not finite");

    std::size_t slot = next_;
    if (size() < capacity_) {
        graph_index_.push_back(0);
        action_.push_back(0);
        target_.push_back(0.0F);
        bits_.resize(bits_.size() + words_, 0);
    }
    graph_index_[slot] = t.graph_index;
    action_[slot] = t.action;
    target_[slot] = t.target;
    auto* words = bits_.data() + slot * words_;
    std::fill(words, words + words_, 0);
    for (NodeId v = 0; v < num_nodes_; ++v) {
        if (t.solution[v]) words[v / 64] |= std::uint64_t{1} << (v % 64);
    }
    next_ = (next_ + 1) % capacity_;
    ++pushed_;
}

ExperienceTuple ReplayBuffer::at(std::size_t i) const {
    if (i >= size()) throw DataError("replay slot out of range");
    ExperienceTuple t;
    t.graph_index = graph_index_[i];
    t.action = action_[i];
    t.target = target_[i];
    t.solution.resize(num_nodes_);
    const auto* words = bits_.data() + i * words_;
    for (NodeId v = 0; v < num_nodes_; ++v) t.solution[v] = (words[v / 64] >> (v % 64)) & 1U;
    return t;
}

std::size_t ReplayBuffer::oldest_slot(std::size_t i) const {
    if (i >= size()) throw DataError("replay index out of range");
    return size() < capacity_ ? i : (next_ + i) % capacity_;
}

std::size_t ReplayBuffer::memory_bytes() const {
    return graph_index_.size() * sizeof(std::uint32_t) + action_.size() * sizeof(NodeId) +
           target_.size() * sizeof(float) + bits_.size() * sizeof(std::uint64_t);
}

void TrainConfig::validate() const {
    if (embed_dim < 1) throw ConfigError("K must be >= 1");
    if (layers < 1) throw ConfigError("L must be >= 1");
    if (batch_size < 1) throw ConfigError("batch size must be >= 1");
    if (tau < 1) throw ConfigError("tau must be >= 1");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in (0, 1]");
    if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0 && epsilon_end >= 0.0 && epsilon_end <= 1.0)) {
        throw ConfigError("epsilon values must lie in [0, 1]");
    }
    if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
    if (replay_capacity < batch_size) throw ConfigError("replay capacity must be at least the batch size");
    if (!(init_scale > 0.0)) throw ConfigError("init scale must be positive");
    if (max_steps == 0 && !episodes) throw ConfigError("either max_steps or episodes must bound training");
}

double epsilon_at(const TrainConfig& cfg, std::uint64_t step) {
    if (cfg.epsilon_decay_steps == 0 || step >= cfg.epsilon_decay_steps) return cfg.epsilon_end;
    const double frac = static_cast<double>(step) / static_cast<double>(cfg.epsilon_decay_steps);
    return cfg.epsilon_start + (cfg.epsilon_end - cfg.epsilon_start) * frac;
}

NodeId act(const PartitionedState& state, std::size_t slot, const PolicyParams<float>& params, double epsilon,
           Rng& rng, Communicator& comm) {
    const NodeId n = state.num_nodes();
    std::vector<NodeId> candidates;
    std::vector<std::uint8_t> mask(n, 0);
    for (NodeId v = 0; v < n; ++v) {
        if (state.is_candidate(slot, v)) {
            candidates.push_back(v);
            mask[v] = 1;
        }
    }
    if (candidates.empty()) throw DataError("no candidate node to act on");
    if (rng.bernoulli(epsilon)) return candidates[rng.index(candidates.size())];
    const auto scores = global_scores(state, params, comm);
    return select_top_d(std::span<const float>(scores).subspan(slot * n, n), mask, 1).front();
}

double compute_target(double reward, const PartitionedState& next_state, bool terminal,
                      const PolicyParams<float>& params, double gamma, Communicator& comm) {
    if (terminal) return reward;
    const auto scores = global_scores(next_state, params, comm);
    const NodeId n = next_state.num_nodes();
    float best = -std::numeric_limits<float>::infinity();
    for (NodeId v = 0; v < n; ++v) {
        if (next_state.is_candidate(0, v)) best = std::max(best, scores[v]);
    }
    if (!std::isfinite(best)) return reward;
    return reward + gamma * static_cast<double>(best);
}

std::vector<GraphSlice> tuples_to_graphs(std::span<const ExperienceTuple> tuples, const Dataset& dataset,
                                         const Partition& partition) {
    std::vector<GraphSlice> out;
    out.reserve(tuples.size());
    std::optional<NodeId> n;
    for (const auto& t : tuples) {
        if (t.graph_index >= dataset.size()) throw DataError("tuple references a missing graph");
        const Graph& g = *dataset[t.graph_index];
        if (n && *n != g.num_nodes()) throw DataError("tuples in one batch reference graphs of different sizes");
        n = g.num_nodes();
        if (t.solution.size() != g.num_nodes()) throw DataError("snapshot length does not match its graph");
        GraphSlice s;
        s.adjacency = ResidualSlice(g, partition.rows, t.solution);
        s.solution.resize(partition.rows.size());
        s.candidate.resize(partition.rows.size());
        for (NodeId v = partition.rows.begin; v < partition.rows.end; ++v) {
            const auto i = v - partition.rows.begin;
            s.solution[i] = t.solution[v];
            s.candidate[i] = !t.solution[v] && s.adjacency.degree(v) > 0 ? 1 : 0;
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<double> train_step(const ReplayBuffer& buffer, const Dataset& dataset, PolicyParams<float>& params,
                               AdamState<float>& adam, const TrainConfig& cfg, Rng& rng, Communicator& comm) {
    if (buffer.size() < cfg.batch_size) return {};
    const auto picks = rng.sample_without_replacement(buffer.size(), cfg.batch_size);
    std::vector<ExperienceTuple> tuples;
    tuples.reserve(picks.size());
    for (auto i : picks) tuples.push_back(buffer.at(i));
    const auto partition = partition_for(buffer.num_nodes(), comm.size(), comm.rank());
    const auto slices = tuples_to_graphs(tuples, dataset, partition);
    std::vector<NodeId> actions;
    std::vector<float> targets;
    for (const auto& t : tuples) {
        actions.push_back(t.action);
        targets.push_back(t.target);
    }
    std::vector<double> losses;
    for (int it = 0; it < cfg.tau; ++it) {
        const auto lg = loss_and_gradients<float>(slices, actions, targets, params, comm);
        adam_step(params, lg.grads, adam);
        losses.push_back(lg.loss);
    }
    return losses;
}

MetricsRow evaluate(const EvalSet& eval, const PolicyParams<float>& params, Communicator& comm) {
    MetricsRow row;
    if (eval.graphs.empty()) return row;
    if (eval.reference.size() != eval.graphs.size()) throw DataError("evaluation references do not match graphs");
    const auto solved = solve_all(eval.graphs, params, SelectionSchedule::fixed(1), comm);
    double ratio_sum = 0.0;
    double cover_sum = 0.0;
    for (std::size_t i = 0; i < solved.size(); ++i) {
        ratio_sum += approx_ratio(solved[i].cover.size(), eval.reference[i]);
        cover_sum += static_cast<double>(solved[i].cover.size());
    }
    row.mean_approx_ratio = ratio_sum / static_cast<double>(solved.size());
    row.cover_size_mean = cover_sum / static_cast<double>(solved.size());
    return row;
}

TrainResult train(const Dataset& dataset, const EvalSet& eval, const TrainConfig& cfg, Communicator& comm,
                  const Checkpoint* resume, const std::function<void(const MetricsRow&)>& on_metrics) {
    cfg.validate();
    if (dataset.empty()) throw DataError("training dataset is empty");
    const NodeId n = dataset.front()->num_nodes();
    bool any_edges = false;
    for (const auto& g : dataset) {
        if (g->num_nodes() != n) throw DataError("training graphs must share a node count");
        any_edges = any_edges || g->num_edges() > 0;
    }
    if (!any_edges) throw DataError("every training graph is edgeless");

    TrainResult result;
    if (resume) {
        if (resume->params.embed_dim != cfg.embed_dim || resume->params.layers != cfg.layers) {
            throw ConfigError("checkpoint K/L do not match the configuration");
        }
        result.params = resume->params;
        result.optimizer = resume->optimizer ? *resume->optimizer
                                             : AdamState<float>::init(result.params, {cfg.learning_rate});
        result.optimizer.config.learning_rate = cfg.learning_rate;
        result.steps = resume->train_steps;
    } else {
        result.params = PolicyParams<float>::random(cfg.embed_dim, cfg.layers, cfg.seed, cfg.init_scale);
        result.optimizer = AdamState<float>::init(result.params, {cfg.learning_rate});
    }

    const auto partition = partition_for(n, comm.size(), comm.rank());
    ReplayBuffer buffer(cfg.replay_capacity, n);
    Rng rng(cfg.seed * 0x9E3779B97F4A7C15ULL + result.steps + 1);
    double last_loss = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t run_steps = 0;
    auto budget_left = [&] { return cfg.max_steps == 0 || run_steps < cfg.max_steps; };

    while ((!cfg.episodes || result.episodes < *cfg.episodes) && budget_left()) {
        const auto gi = static_cast<std::uint32_t>(rng.index(dataset.size()));
        auto env = MvcEnv::reset(dataset[gi], partition, comm, gi);
        ++result.episodes;
        while (!env.done() && budget_left()) {
            const double eps = epsilon_at(cfg, result.steps);
            const NodeId v = act(env.state(), 0, result.params, eps, rng, comm);
            ExperienceTuple tuple{gi, env.state().solution_mask(0), v, 0.0F};
            const auto [reward, done] = env.step(v, comm);
            tuple.target = static_cast<float>(
                compute_target(reward, env.state(), done, result.params, cfg.gamma, comm));
            buffer.push(tuple);
            ++result.steps;
            ++run_steps;

            const auto losses = train_step(buffer, dataset, result.params, result.optimizer, cfg, rng, comm);
            if (!losses.empty()) {
                last_loss = std::accumulate(losses.begin(), losses.end(), 0.0) / static_cast<double>(losses.size());
            }
            if (cfg.eval_every > 0 && result.steps % cfg.eval_every == 0 && !eval.graphs.empty()) {
                auto row = evaluate(eval, result.params, comm);
                row.step = result.steps;
                row.epsilon = eps;
                row.loss = last_loss;
                result.metrics.push_back(row);
                if (on_metrics) on_metrics(row);
            }
        }
    }
    result.replay_size = buffer.size();
    result.replay_bytes = buffer.memory_bytes();
    return result;
}

}  // namespace graphrl
