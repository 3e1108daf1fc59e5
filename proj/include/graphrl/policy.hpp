#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "graphrl/collective.hpp"
#include "graphrl/state.hpp"

namespace graphrl {

// Dense row-major matrix.
template <typename Real>
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Real> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, Real fill = Real(0)) : rows(r), cols(c), data(r * c, fill) {}

    Real& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    Real operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    [[nodiscard]] std::size_t size() const { return data.size(); }

    bool operator==(const Matrix&) const = default;
};

// Trainable parameters of the embedding (theta1..theta4) and scoring
// (theta5..theta7) networks.
//
//   embed_v <- relu(theta1 s_v + theta3 relu(theta2 deg_v) + theta4 sum_{u in N(v)} embed_u)
//   score_v  = theta7 . relu[theta5 sum_u embed_u || theta6 c_v embed_v]
//
// s_v is the partial-solution indicator, deg_v the residual degree (unit
// edge weights) and c_v the candidate indicator.
template <typename Real>
struct PolicyParams {
    int embed_dim = 0;  // K
    int layers = 0;     // L

    Matrix<Real> theta1;  // K x 1, solution indicator
    Matrix<Real> theta2;  // K x 1, edge weight
    Matrix<Real> theta3;  // K x K, aggregated edge features
    Matrix<Real> theta4;  // K x K, neighbour embeddings
    Matrix<Real> theta5;  // K x K, pooled graph embedding
    Matrix<Real> theta6;  // K x K, node embedding
    Matrix<Real> theta7;  // 2K x 1, readout

    static PolicyParams zeros(int embed_dim, int layers);
    // Entries uniform in (-scale, scale).
    static PolicyParams random(int embed_dim, int layers, std::uint64_t seed, double scale = 0.05);

    std::array<Matrix<Real>*, 7> tensors() {
        return {&theta1, &theta2, &theta3, &theta4, &theta5, &theta6, &theta7};
    }
    std::array<const Matrix<Real>*, 7> tensors() const {
        return {&theta1, &theta2, &theta3, &theta4, &theta5, &theta6, &theta7};
    }
    [[nodiscard]] std::size_t num_values() const;

    // Throws DataError on a shape mismatch or a non-finite entry.
    void validate() const;

    template <typename Other>
    PolicyParams<Other> cast() const {
        PolicyParams<Other> out = PolicyParams<Other>::zeros(embed_dim, layers);
        auto dst = out.tensors();
        auto src = tensors();
        for (std::size_t t = 0; t < src.size(); ++t) {
            for (std::size_t i = 0; i < src[t]->size(); ++i) {
                dst[t]->data[i] = static_cast<Other>(src[t]->data[i]);
            }
        }
        return out;
    }

    bool operator==(const PolicyParams&) const = default;
};

// Embeddings of locally owned nodes for a batch, laid out [graph][node][k].
template <typename Real>
struct EmbeddingSlice {
    std::size_t batch = 0;
    int embed_dim = 0;
    NodeRange rows;
    std::vector<Real> values;

    [[nodiscard]] std::span<const Real> node(std::size_t b, NodeId v) const {
        const auto offset = (b * rows.size() + (v - rows.begin)) * static_cast<std::size_t>(embed_dim);
        return {values.data() + offset, static_cast<std::size_t>(embed_dim)};
    }
};

// Scores of locally owned nodes, laid out [graph][node].
template <typename Real>
struct ScoreSlice {
    std::size_t batch = 0;
    NodeRange rows;
    std::vector<Real> values;

    [[nodiscard]] Real at(std::size_t b, NodeId v) const {
        return values[b * rows.size() + (v - rows.begin)];
    }
};

// Intermediate values kept by the forward passes for the backward pass.
template <typename Real>
struct EmbedTape {
    std::vector<Real> edge_features;             // relu(theta2 deg_v), [b][v][k]
    std::vector<std::vector<Real>> neighbor_sum;  // per layer, [b][v][k]
    std::vector<std::vector<Real>> preactivation; // per layer, [b][v][k]
};

template <typename Real>
struct ScoreTape {
    std::vector<Real> pooled;        // sum of all embeddings, [b][k]
    std::vector<Real> pooled_proj;   // theta5 * pooled, [b][k]
    std::vector<Real> node_proj;     // theta6 * c_v embed_v, [b][v][k]
};

// Local candidate masks, one per graph in the batch.
using CandidateMasks = std::vector<std::span<const std::uint8_t>>;
CandidateMasks candidate_masks(std::span<const GraphSlice> batch);

// Collective. L rounds of neighbour aggregation, each with one sum-all-reduce
// of the B x N x K partial neighbour sums. Every slice must cover the same
// row block.
template <typename Real>
EmbeddingSlice<Real> embed_forward(std::span<const GraphSlice> batch, const PolicyParams<Real>& params,
                                   Communicator& comm, EmbedTape<Real>* tape = nullptr);

// Collective. Scores every local node (one sum-all-reduce of the B x K
// pooled embedding); non-candidates are zeroed by the candidate mask before
// theta6 and are expected to be masked again at selection time.
template <typename Real>
ScoreSlice<Real> q_forward(const EmbeddingSlice<Real>& embed, const CandidateMasks& candidates,
                           const PolicyParams<Real>& params, Communicator& comm,
                           ScoreTape<Real>* tape = nullptr);

template <typename Real>
struct LossAndGradients {
    double loss = 0.0;
    PolicyParams<Real> grads;
};

// Collective. Mean squared error between Q(s_b, a_b) and target_b over the
// batch, and its exact gradient with respect to every parameter. The
// candidate mask used by the scorer is the one-hot of each action. After the
// final gradient all-reduce every rank holds identical gradients.
template <typename Real>
LossAndGradients<Real> loss_and_gradients(std::span<const GraphSlice> batch,
                                          std::span<const NodeId> actions,
                                          std::span<const Real> targets,
                                          const PolicyParams<Real>& params, Communicator& comm);

}  // namespace graphrl
