#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace graphrl {

struct CostConfig {
    double B = 1;
    double N = 100;
    double rho = 0.15;
    double K = 32;
    double L = 2;
    double P = 1;
    double alpha = 1e-5;  // seconds per message
    double beta = 1e-9;   // seconds per element
    double R = 50000;

    // Throws ConfigError.
    void validate() const;
};

struct CostTerms {
    double compute = 0.0;
    double latency = 0.0;
    double bandwidth = 0.0;
    [[nodiscard]] double total() const { return compute + latency + bandwidth; }
};

// Embedding: N^2/P (BK(rho+L) + BK(2+K+4L)/N), alpha L log2 P, beta L B K N.
CostTerms t_embed(const CostConfig& cfg);
double t_embed_seq(const CostConfig& cfg);
// Action evaluation: BKN/P (6+K+KP/N), alpha log2 P, beta B K.
CostTerms t_action(const CostConfig& cfg);
double t_action_seq(const CostConfig& cfg);

double efficiency_embed(const CostConfig& cfg);
double efficiency_action(const CostConfig& cfg);

struct MemoryBreakdown {
    double adjacency = 0.0;
    double solutions = 0.0;
    double candidates = 0.0;
    double replay = 0.0;
    [[nodiscard]] double total() const { return adjacency + solutions + candidates + replay; }
};

// 20 N^2 rho B / P, 4NB/P, 4NB/P and 8R(N/P + 1) bytes.
MemoryBreakdown memory_bytes(const CostConfig& cfg);
// Adjacency bytes for a known number of stored entries: 20 entries B / P.
double adjacency_bytes_from_entries(double entries, double B, double P);
// Expected undirected edge count N^2 rho / 2.
double implied_edges(const CostConfig& cfg);

// Counters gathered from a real run.
struct Measurement {
    double embed_all_reduces_per_forward = 0;
    double embed_elements_per_all_reduce = 0;
    double q_all_reduces_per_forward = 0;
    double q_elements_per_all_reduce = 0;
    double adjacency_entries = 0;        // stored entries over all ranks and graphs
    double adjacency_bytes_per_rank = 0; // in-process bytes, largest rank
    double replay_tuples = 0;
    double replay_bytes = 0;
};

struct ComparisonRow {
    std::string quantity;
    double model = 0.0;
    double measured = 0.0;
    bool diverges = false;  // measured and model differ by more than 2x
};

std::vector<ComparisonRow> compare_instrumented(const CostConfig& cfg, const Measurement& m);

// Runs one embed_forward and one q_forward on B random G(N, rho) graphs over
// P in-process workers with recording on, and fills a replay buffer with R
// tuples. N, B, K, L, P and R are rounded to integers.
Measurement measure_instrumented(const CostConfig& cfg, std::uint64_t seed);

}  // namespace graphrl
