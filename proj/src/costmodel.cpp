#include "graphrl/costmodel.hpp"

#include <cmath>

#include "graphrl/agent.hpp"
#include "graphrl/collective.hpp"
#include "graphrl/generators.hpp"
#include "graphrl/policy.hpp"

namespace graphrl {

void CostConfig::validate() const {
    if (!(B > 0 && N > 0 && K > 0 && L > 0 && P > 0 && R > 0)) {
        throw ConfigError("cost model: B, N, K, L, P and R must be positive");
    }
    if (!(rho > 0 && rho <= 1)) throw ConfigError("cost model: rho must lie in (0, 1]");
    if (P > N) throw ConfigError("cost model: P must not exceed N");
    if (!(alpha >= 0 && beta >= 0)) throw ConfigError("cost model: alpha and beta must be non-negative");
}

CostTerms t_embed(const CostConfig& c) {
    c.validate();
    CostTerms t;
    t.compute = c.N * c.N / c.P * (c.B * c.K * (c.rho + c.L) + c.B * c.K * (2 + c.K + 4 * c.L) / c.N);
    t.latency = c.alpha * c.L * std::log2(c.P);
    t.bandwidth = c.beta * c.L * c.B * c.K * c.N;
    return t;
}

double t_embed_seq(const CostConfig& c) {
    auto seq = c;
    seq.P = 1;
    return t_embed(seq).compute;
}

CostTerms t_action(const CostConfig& c) {
    c.validate();
    CostTerms t;
    t.compute = c.B * c.K * c.N / c.P * (6 + c.K + c.K * c.P / c.N);
    t.latency = c.alpha * std::log2(c.P);
    t.bandwidth = c.beta * c.B * c.K;
    return t;
}

double t_action_seq(const CostConfig& c) {
    auto seq = c;
    seq.P = 1;
    return t_action(seq).compute;
}

double efficiency_embed(const CostConfig& c) {
    c.validate();
    return 1.0 / (1.0 + c.beta * c.P / (c.N * (1.0 + c.rho / c.L)));
}

double efficiency_action(const CostConfig& c) {
    c.validate();
    const double cc = (c.K + 6) / c.K;
    return 1.0 / (1.0 + c.P / (cc * c.N + 1.0) + c.beta / (c.N * (c.K + 6)));
}

MemoryBreakdown memory_bytes(const CostConfig& c) {
    c.validate();
    MemoryBreakdown m;
    m.adjacency = 20 * c.N * c.N * c.rho * c.B / c.P;
    m.solutions = 4 * c.N * c.B / c.P;
    m.candidates = 4 * c.N * c.B / c.P;
    m.replay = 8 * c.R * (c.N / c.P + 1);
    return m;
}

double adjacency_bytes_from_entries(double entries, double B, double P) { return 20 * entries * B / P; }

double implied_edges(const CostConfig& c) { return c.N * c.N * c.rho / 2; }

std::vector<ComparisonRow> compare_instrumented(const CostConfig& c, const Measurement& m) {
    const auto mem = memory_bytes(c);
    auto row = [](std::string name, double model, double measured) {
        const bool zero_both = model == 0 && measured == 0;
        const bool diverges = !zero_both && (model <= 0 || measured <= 0 || measured > 2 * model ||
                                             model > 2 * measured);
        return ComparisonRow{std::move(name), model, measured, diverges};
    };
    std::vector<ComparisonRow> out;
    out.push_back(row("embed all-reduces per forward", c.L, m.embed_all_reduces_per_forward));
    out.push_back(row("embed all-reduce elements", c.B * c.K * c.N, m.embed_elements_per_all_reduce));
    out.push_back(row("q all-reduces per forward", 1, m.q_all_reduces_per_forward));
    out.push_back(row("q all-reduce elements", c.B * c.K, m.q_elements_per_all_reduce));
    out.push_back(row("adjacency entries (N^2 rho B)", c.N * c.N * c.rho * c.B, m.adjacency_entries));
    out.push_back(row("adjacency bytes per rank", mem.adjacency, m.adjacency_bytes_per_rank));
    out.push_back(row("replay bytes", mem.replay, m.replay_bytes));
    return out;
}

Measurement measure_instrumented(const CostConfig& c, std::uint64_t seed) {
    c.validate();
    const auto n = static_cast<NodeId>(std::llround(c.N));
    const auto b = static_cast<std::size_t>(std::llround(c.B));
    const auto p = static_cast<int>(std::llround(c.P));
    const auto r = static_cast<std::size_t>(std::llround(c.R));
    const int k = static_cast<int>(std::llround(c.K));
    const int l = static_cast<int>(std::llround(c.L));

    std::vector<std::shared_ptr<const Graph>> graphs;
    for (std::size_t i = 0; i < b; ++i) graphs.push_back(std::make_shared<Graph>(generate_er(n, c.rho, seed + i)));
    const auto params = PolicyParams<float>::random(k, l, seed);

    Measurement m;
    WorkerGroup group(p);
    std::vector<double> entries(static_cast<std::size_t>(p), 0);
    std::vector<double> bytes(static_cast<std::size_t>(p), 0);
    std::vector<CollectiveRecord> embed_records;
    std::vector<CollectiveRecord> q_records;
    group.set_recording(true);
    group.run([&](Communicator& comm) {
        PartitionedState state(partition_for(n, p, comm.rank()), graphs);
        for (const auto& s : state.slices()) {
            entries[static_cast<std::size_t>(comm.rank())] += static_cast<double>(s.adjacency.nnz());
            bytes[static_cast<std::size_t>(comm.rank())] += static_cast<double>(s.adjacency.memory_bytes());
        }
        const auto embed = embed_forward(state.slices(), params, comm);
        comm.barrier();
        q_forward(embed, candidate_masks(state.slices()), params, comm);
    });
    const auto records = group.records();
    bool after_barrier = false;
    for (const auto& rec : records) {
        if (rec.op == CollectiveOp::barrier) {
            after_barrier = true;
            continue;
        }
        (after_barrier ? q_records : embed_records).push_back(rec);
    }
    auto summarize = [](const std::vector<CollectiveRecord>& recs, double& calls, double& elements) {
        calls = 0;
        elements = 0;
        for (const auto& rec : recs) {
            if (rec.op != CollectiveOp::all_reduce_sum) continue;
            ++calls;
            elements = static_cast<double>(rec.elements);
        }
    };
    summarize(embed_records, m.embed_all_reduces_per_forward, m.embed_elements_per_all_reduce);
    summarize(q_records, m.q_all_reduces_per_forward, m.q_elements_per_all_reduce);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        m.adjacency_entries += entries[i];
        m.adjacency_bytes_per_rank = std::max(m.adjacency_bytes_per_rank, bytes[i]);
    }

    ReplayBuffer buffer(r, n);
    std::vector<std::uint8_t> snapshot(n, 0);
    for (std::size_t i = 0; i < r; ++i) {
        const auto v = static_cast<NodeId>(i % n);
        std::fill(snapshot.begin(), snapshot.end(), 0);
        for (NodeId u = 0; u < v; u += 2) snapshot[u] = 1;
        buffer.push({0, snapshot, v, -1.0F});
    }
    m.replay_tuples = static_cast<double>(buffer.size());
    m.replay_bytes = static_cast<double>(buffer.memory_bytes());
    return m;
}

}  // namespace graphrl
