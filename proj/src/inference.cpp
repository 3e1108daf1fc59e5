#include "graphrl/inference.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace graphrl {

SelectionSchedule::SelectionSchedule(std::vector<Tier> tiers) : tiers_(std::move(tiers)) {
    if (tiers_.empty()) throw ConfigError("selection schedule needs at least one tier");
    for (std::size_t i = 0; i < tiers_.size(); ++i) {
        const auto& t = tiers_[i];
        if (t.d < 1) throw ConfigError("selection schedule: d must be positive");
        if (!(t.fraction >= 0.0 && t.fraction < 1.0)) {
            throw ConfigError("selection schedule: thresholds must lie in [0, 1)");
        }
        if (i > 0 && !(t.fraction < tiers_[i - 1].fraction)) {
            throw ConfigError("selection schedule: thresholds must strictly decrease");
        }
        if (i > 0 && t.d > tiers_[i - 1].d) throw ConfigError("selection schedule: d must not increase");
    }
    if (tiers_.back().fraction != 0.0) throw ConfigError("selection schedule: last threshold must be 0");
}

SelectionSchedule SelectionSchedule::adaptive() {
    return SelectionSchedule({{0.5, 8}, {0.25, 4}, {0.125, 2}, {0.0, 1}});
}

SelectionSchedule SelectionSchedule::fixed(int d) { return SelectionSchedule({{0.0, d}}); }

SelectionSchedule SelectionSchedule::parse(const std::string& text) {
    if (text == "adaptive") return adaptive();
    auto parse_int = [&](const std::string& s) {
        std::size_t used = 0;
        int value = 0;
        try {
            value = std::stoi(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || s.empty()) throw ConfigError("bad d value '" + s + "' in schedule '" + text + "'");
        return value;
    };
    if (text.rfind("fixed:", 0) == 0) return fixed(parse_int(text.substr(6)));
    std::vector<Tier> tiers;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw ConfigError("bad schedule '" + text + "': expected adaptive, fixed:<d>, or f:d,...");
        }
        Tier t;
        try {
            std::size_t used = 0;
            t.fraction = std::stod(item.substr(0, colon), &used);
            if (used != colon) throw ConfigError("");
        } catch (const std::exception&) {
            throw ConfigError("bad threshold in schedule '" + text + "'");
        }
        t.d = parse_int(item.substr(colon + 1));
        tiers.push_back(t);
    }
    return SelectionSchedule(std::move(tiers));
}

int SelectionSchedule::d_for(std::size_t num_candidates, NodeId num_nodes) const {
    for (const auto& t : tiers_) {
        if (static_cast<double>(num_candidates) > t.fraction * static_cast<double>(num_nodes)) return t.d;
    }
    return tiers_.back().d;
}

std::string SelectionSchedule::to_string() const {
    if (*this == adaptive()) return "adaptive";
    if (tiers_.size() == 1) return "fixed:" + std::to_string(tiers_[0].d);
    std::ostringstream out;
    for (std::size_t i = 0; i < tiers_.size(); ++i) {
        if (i) out << ',';
        out << tiers_[i].fraction << ':' << tiers_[i].d;
    }
    return out.str();
}

std::vector<NodeId> select_top_d(std::span<const float> scores, std::span<const std::uint8_t> candidate, int d) {
    if (d < 1) throw ConfigError("d must be positive");
    if (scores.size() != candidate.size()) throw DataError("score and candidate vectors differ in length");
    std::vector<NodeId> pool;
    for (NodeId v = 0; v < candidate.size(); ++v) {
        if (candidate[v]) pool.push_back(v);
    }
    if (pool.empty()) throw DataError("no candidate nodes to select from");
    const auto take = std::min(pool.size(), static_cast<std::size_t>(d));
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take), pool.end(),
                      [&](NodeId a, NodeId b) {
                          if (scores[a] != scores[b]) return scores[a] > scores[b];
                          return a < b;
                      });
    pool.resize(take);
    return pool;
}

std::vector<float> global_scores(const PartitionedState& state, const PolicyParams<float>& params,
                                 Communicator& comm) {
    const auto slices = state.slices();
    const auto masks = candidate_masks(slices);
    const auto embed = embed_forward(slices, params, comm);
    auto scores = q_forward(embed, masks, params, comm);
    const std::size_t n_loc = scores.rows.size();
    for (std::size_t b = 0; b < scores.batch; ++b) {
        for (std::size_t i = 0; i < n_loc; ++i) {
            if (!masks[b][i]) scores.values[b * n_loc + i] = -std::numeric_limits<float>::infinity();
        }
    }
    return comm.all_gather(scores.values, scores.batch);
}

SolveResult solve(const std::vector<std::shared_ptr<const Graph>>& graphs, const PolicyParams<float>& params,
                  const SelectionSchedule& schedule, Communicator& comm, std::vector<std::size_t> graph_ids) {
    const auto start = std::chrono::steady_clock::now();
    SolveResult result;
    if (graphs.empty()) return result;
    const NodeId n = graphs.front()->num_nodes();
    if (n == 0) {
        for (std::size_t b = 0; b < graphs.size(); ++b) {
            result.graphs.push_back({graph_ids.empty() ? b : graph_ids[b], {}, {}, 0, 0});
        }
        return result;
    }
    PartitionedState state(partition_for(n, comm.size(), comm.rank()), graphs, graph_ids);
    const std::size_t batch = state.batch_size();
    result.graphs.resize(batch);
    for (std::size_t b = 0; b < batch; ++b) result.graphs[b].graph_id = state.graph_id(b);

    auto covered = covered_flags(state, comm);
    std::vector<std::uint8_t> mask(n);
    while (std::find(covered.begin(), covered.end(), 0) != covered.end()) {
        const auto scores = global_scores(state, params, comm);
        ++result.policy_evals;
        for (std::size_t b = 0; b < batch; ++b) {
            if (covered[b]) continue;
            auto& out = result.graphs[b];
            ++out.policy_evals;
            std::size_t count = 0;
            for (NodeId v = 0; v < n; ++v) {
                mask[v] = state.is_candidate(b, v) ? 1 : 0;
                count += mask[v];
            }
            const int d = schedule.d_for(count, n);
            const auto picks = select_top_d(std::span<const float>(scores).subspan(b * n, n), mask, d);
            for (NodeId v : picks) {
                if (state.is_candidate(b, v)) {
                    apply_action(state, b, v);
                } else {
                    ++out.skipped;
                }
            }
        }
        covered = covered_flags(state, comm);
    }
    for (std::size_t b = 0; b < batch; ++b) {
        auto& out = result.graphs[b];
        out.order = state.solution_order(b);
        out.cover = out.order;
        std::sort(out.cover.begin(), out.cover.end());
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::vector<GraphSolution> solve_all(const std::vector<std::shared_ptr<const Graph>>& graphs,
                                     const PolicyParams<float>& params, const SelectionSchedule& schedule,
                                     Communicator& comm, std::size_t max_batch) {
    std::map<NodeId, std::vector<std::size_t>> by_size;
    for (std::size_t i = 0; i < graphs.size(); ++i) by_size[graphs[i]->num_nodes()].push_back(i);
    std::vector<GraphSolution> out(graphs.size());
    for (const auto& [n, members] : by_size) {
        for (std::size_t first = 0; first < members.size(); first += max_batch) {
            const auto last = std::min(members.size(), first + max_batch);
            std::vector<std::shared_ptr<const Graph>> batch;
            std::vector<std::size_t> ids;
            for (std::size_t j = first; j < last; ++j) {
                batch.push_back(graphs[members[j]]);
                ids.push_back(members[j]);
            }
            auto solved = solve(batch, params, schedule, comm, ids);
            for (auto& g : solved.graphs) out[g.graph_id] = std::move(g);
        }
    }
    return out;
}

}  // namespace graphrl
