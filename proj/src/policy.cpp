#include "graphrl/policy.hpp"

#include <cmath>
#include <string>

#include "graphrl/rng.hpp"

namespace graphrl {

namespace {

using Acc = double;

template <typename Real>
Real relu(Real x) {
    return x > Real(0) ? x : Real(0);
}

template <typename Real>
Matrix<Real> transpose(const Matrix<Real>& m) {
    Matrix<Real> t(m.cols, m.rows);
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) t(c, r) = m(r, c);
    }
    return t;
}

// out[j] = sum_k m(j, k) x[k], with mt the transpose of m. Terms are added in
// increasing k, skipping zero inputs, so results depend only on x.
template <typename Real, typename In>
void gemv(const Matrix<Real>& mt, const In* x, Real* out) {
    const std::size_t n_in = mt.rows;
    const std::size_t n_out = mt.cols;
    for (std::size_t j = 0; j < n_out; ++j) out[j] = Real(0);
    for (std::size_t k = 0; k < n_in; ++k) {
        const Real xk = static_cast<Real>(x[k]);
        if (xk == Real(0)) continue;
        const Real* col = mt.data.data() + k * n_out;
        for (std::size_t j = 0; j < n_out; ++j) out[j] += col[j] * xk;
    }
}

// out[k] += sum_j m(j, k) d[j].
template <typename Real>
void gemv_t_acc(const Matrix<Real>& m, const Acc* d, Acc* out) {
    for (std::size_t j = 0; j < m.rows; ++j) {
        const Acc dj = d[j];
        if (dj == 0.0) continue;
        const Real* row = m.data.data() + j * m.cols;
        for (std::size_t k = 0; k < m.cols; ++k) out[k] += static_cast<Acc>(row[k]) * dj;
    }
}

// g(j, k) += d[j] x[k].
template <typename In>
void outer_acc(std::vector<Acc>& g, std::size_t cols, const Acc* d, std::size_t rows, const In* x) {
    for (std::size_t j = 0; j < rows; ++j) {
        const Acc dj = d[j];
        if (dj == 0.0) continue;
        Acc* row = g.data() + j * cols;
        for (std::size_t k = 0; k < cols; ++k) row[k] += dj * static_cast<Acc>(x[k]);
    }
}

struct BatchShape {
    std::size_t batch;
    NodeRange rows;
    NodeId num_nodes;
};

BatchShape check_batch(std::span<const GraphSlice> batch) {
    if (batch.empty()) throw DataError("empty batch");
    BatchShape shape{batch.size(), batch[0].adjacency.rows(), batch[0].adjacency.num_columns()};
    for (const auto& s : batch) {
        if (!(s.adjacency.rows() == shape.rows) || s.adjacency.num_columns() != shape.num_nodes) {
            throw DataError("batched slices must share a row block and node count");
        }
        if (s.solution.size() != shape.rows.size() || s.candidate.size() != shape.rows.size()) {
            throw DataError("slice solution/candidate length does not match its row block");
        }
    }
    return shape;
}

}  // namespace

template <typename Real>
PolicyParams<Real> PolicyParams<Real>::zeros(int embed_dim, int layers) {
    if (embed_dim < 1) throw ConfigError("embedding dimension must be >= 1");
    if (layers < 1) throw ConfigError("number of layers must be >= 1");
    const auto k = static_cast<std::size_t>(embed_dim);
    PolicyParams p;
    p.embed_dim = embed_dim;
    p.layers = layers;
    p.theta1 = Matrix<Real>(k, 1);
    p.theta2 = Matrix<Real>(k, 1);
    p.theta3 = Matrix<Real>(k, k);
    p.theta4 = Matrix<Real>(k, k);
    p.theta5 = Matrix<Real>(k, k);
    p.theta6 = Matrix<Real>(k, k);
    p.theta7 = Matrix<Real>(2 * k, 1);
    return p;
}

template <typename Real>
PolicyParams<Real> PolicyParams<Real>::random(int embed_dim, int layers, std::uint64_t seed, double scale) {
    auto p = zeros(embed_dim, layers);
    Rng rng(seed);
    for (auto* t : p.tensors()) {
        for (auto& x : t->data) x = static_cast<Real>(rng.uniform(-scale, scale));
    }
    return p;
}

template <typename Real>
std::size_t PolicyParams<Real>::num_values() const {
    std::size_t n = 0;
    for (const auto* t : tensors()) n += t->size();
    return n;
}

template <typename Real>
void PolicyParams<Real>::validate() const {
    if (embed_dim < 1 || layers < 1) throw DataError("parameters have no shape");
    const auto k = static_cast<std::size_t>(embed_dim);
    const std::array<std::pair<std::size_t, std::size_t>, 7> shapes{
        {{k, 1}, {k, 1}, {k, k}, {k, k}, {k, k}, {k, k}, {2 * k, 1}}};
    const auto ts = tensors();
    for (std::size_t t = 0; t < ts.size(); ++t) {
        const auto& m = *ts[t];
        if (m.rows != shapes[t].first || m.cols != shapes[t].second ||
            m.data.size() != m.rows * m.cols) {
            throw DataError("theta" + std::to_string(t + 1) + " has shape " + std::to_string(m.rows) +
                            "x" + std::to_string(m.cols) + ", expected " +
                            std::to_string(shapes[t].first) + "x" + std::to_string(shapes[t].second));
        }
        for (Real x : m.data) {
            if (!std::isfinite(x)) throw DataError("theta" + std::to_string(t + 1) + " has a non-finite entry");
        }
    }
}

CandidateMasks candidate_masks(std::span<const GraphSlice> batch) {
    CandidateMasks out;
    out.reserve(batch.size());
    for (const auto& s : batch) out.emplace_back(s.candidate);
    return out;
}

template <typename Real>
EmbeddingSlice<Real> embed_forward(std::span<const GraphSlice> batch, const PolicyParams<Real>& params,
                                   Communicator& comm, EmbedTape<Real>* tape) {
    params.validate();
    const auto shape = check_batch(batch);
    const auto K = static_cast<std::size_t>(params.embed_dim);
    const std::size_t n_loc = shape.rows.size();
    const std::size_t N = shape.num_nodes;
    const std::size_t B = shape.batch;

    const auto theta3t = transpose(params.theta3);
    const auto theta4t = transpose(params.theta4);

    std::vector<Real> edge(B * n_loc * K);
    std::vector<Real> base(B * n_loc * K);
    for (std::size_t b = 0; b < B; ++b) {
        const auto& slice = batch[b];
        for (std::size_t i = 0; i < n_loc; ++i) {
            const auto v = static_cast<NodeId>(shape.rows.begin + i);
            const Real deg = static_cast<Real>(slice.adjacency.degree(v));
            const Real s = slice.solution[i] ? Real(1) : Real(0);
            Real* w = edge.data() + (b * n_loc + i) * K;
            Real* out = base.data() + (b * n_loc + i) * K;
            for (std::size_t k = 0; k < K; ++k) w[k] = relu(params.theta2.data[k] * deg);
            gemv(theta3t, w, out);
            for (std::size_t k = 0; k < K; ++k) out[k] = params.theta1.data[k] * s + out[k];
        }
    }

    EmbeddingSlice<Real> h{B, params.embed_dim, shape.rows, std::vector<Real>(B * n_loc * K, Real(0))};
    std::vector<Acc> partial(B * N * K);
    std::vector<Real> nbr(K);
    std::vector<Real> e3(K);
    if (tape) {
        tape->edge_features = edge;
        tape->neighbor_sum.assign(static_cast<std::size_t>(params.layers), {});
        tape->preactivation.assign(static_cast<std::size_t>(params.layers), {});
    }
    for (int l = 0; l < params.layers; ++l) {
        std::fill(partial.begin(), partial.end(), 0.0);
        if (l > 0) {
            for (std::size_t b = 0; b < B; ++b) {
                for (std::size_t i = 0; i < n_loc; ++i) {
                    const auto v = static_cast<NodeId>(shape.rows.begin + i);
                    const Real* hv = h.values.data() + (b * n_loc + i) * K;
                    for (NodeId u : batch[b].adjacency.row(v)) {
                        Acc* dst = partial.data() + (b * N + u) * K;
                        for (std::size_t k = 0; k < K; ++k) dst[k] += static_cast<Acc>(hv[k]);
                    }
                }
            }
        }
        const auto total = comm.all_reduce_sum(partial);
        std::vector<Real> pre(B * n_loc * K);
        std::vector<Real> nsum(tape ? B * n_loc * K : 0);
        for (std::size_t b = 0; b < B; ++b) {
            for (std::size_t i = 0; i < n_loc; ++i) {
                const std::size_t row = b * n_loc + i;
                const Acc* src = total.data() + (b * N + shape.rows.begin + i) * K;
                for (std::size_t k = 0; k < K; ++k) nbr[k] = static_cast<Real>(src[k]);
                gemv(theta4t, nbr.data(), e3.data());
                Real* p = pre.data() + row * K;
                Real* out = h.values.data() + row * K;
                const Real* bs = base.data() + row * K;
                for (std::size_t k = 0; k < K; ++k) {
                    p[k] = bs[k] + e3[k];
                    out[k] = relu(p[k]);
                }
                if (tape) std::copy(nbr.begin(), nbr.end(), nsum.begin() + static_cast<std::ptrdiff_t>(row * K));
            }
        }
        if (tape) {
            tape->neighbor_sum[static_cast<std::size_t>(l)] = std::move(nsum);
            tape->preactivation[static_cast<std::size_t>(l)] = std::move(pre);
        }
    }
    return h;
}

template <typename Real>
ScoreSlice<Real> q_forward(const EmbeddingSlice<Real>& embed, const CandidateMasks& candidates,
                           const PolicyParams<Real>& params, Communicator& comm, ScoreTape<Real>* tape) {
    const auto K = static_cast<std::size_t>(params.embed_dim);
    if (embed.embed_dim != params.embed_dim) throw DataError("embedding dimension does not match parameters");
    if (candidates.size() != embed.batch) throw DataError("candidate masks do not match the batch");
    const std::size_t B = embed.batch;
    const std::size_t n_loc = embed.rows.size();
    for (const auto& c : candidates) {
        if (c.size() != n_loc) throw DataError("candidate mask length does not match the row block");
    }

    std::vector<Acc> pooled_local(B * K, 0.0);
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t i = 0; i < n_loc; ++i) {
            const Real* hv = embed.values.data() + (b * n_loc + i) * K;
            for (std::size_t k = 0; k < K; ++k) pooled_local[b * K + k] += static_cast<Acc>(hv[k]);
        }
    }
    const auto pooled_acc = comm.all_reduce_sum(pooled_local);

    const auto theta5t = transpose(params.theta5);
    const auto theta6t = transpose(params.theta6);
    std::vector<Real> pooled(B * K);
    std::vector<Real> z1(B * K);
    for (std::size_t i = 0; i < pooled.size(); ++i) pooled[i] = static_cast<Real>(pooled_acc[i]);
    for (std::size_t b = 0; b < B; ++b) gemv(theta5t, pooled.data() + b * K, z1.data() + b * K);

    ScoreSlice<Real> scores{B, embed.rows, std::vector<Real>(B * n_loc)};
    std::vector<Real> z2_all(tape ? B * n_loc * K : 0);
    std::vector<Real> z2(K);
    const Real* w7 = params.theta7.data.data();
    for (std::size_t b = 0; b < B; ++b) {
        Real graph_part = Real(0);
        const Real* z1b = z1.data() + b * K;
        for (std::size_t k = 0; k < K; ++k) graph_part += w7[k] * relu(z1b[k]);
        for (std::size_t i = 0; i < n_loc; ++i) {
            const std::size_t row = b * n_loc + i;
            if (candidates[b][i]) {
                gemv(theta6t, embed.values.data() + row * K, z2.data());
            } else {
                std::fill(z2.begin(), z2.end(), Real(0));
            }
            Real score = graph_part;
            for (std::size_t k = 0; k < K; ++k) score += w7[K + k] * relu(z2[k]);
            scores.values[row] = score;
            if (tape) std::copy(z2.begin(), z2.end(), z2_all.begin() + static_cast<std::ptrdiff_t>(row * K));
        }
    }
    if (tape) {
        tape->pooled = std::move(pooled);
        tape->pooled_proj = std::move(z1);
        tape->node_proj = std::move(z2_all);
    }
    return scores;
}

template <typename Real>
LossAndGradients<Real> loss_and_gradients(std::span<const GraphSlice> batch, std::span<const NodeId> actions,
                                          std::span<const Real> targets, const PolicyParams<Real>& params,
                                          Communicator& comm) {
    const auto shape = check_batch(batch);
    const std::size_t B = shape.batch;
    if (actions.size() != B || targets.size() != B) {
        throw DataError("batch of " + std::to_string(B) + " graphs needs as many actions and targets");
    }
    for (std::size_t b = 0; b < B; ++b) {
        if (actions[b] >= shape.num_nodes) {
            throw DataError("action " + std::to_string(actions[b]) + " out of range for " +
                            std::to_string(shape.num_nodes) + " nodes");
        }
        if (!std::isfinite(targets[b])) throw DataError("non-finite target");
    }
    const auto K = static_cast<std::size_t>(params.embed_dim);
    const std::size_t n_loc = shape.rows.size();
    const std::size_t N = shape.num_nodes;
    const auto L = static_cast<std::size_t>(params.layers);

    std::vector<std::vector<std::uint8_t>> one_hot(B, std::vector<std::uint8_t>(n_loc, 0));
    CandidateMasks masks;
    for (std::size_t b = 0; b < B; ++b) {
        if (shape.rows.contains(actions[b])) one_hot[b][actions[b] - shape.rows.begin] = 1;
        masks.emplace_back(one_hot[b]);
    }

    EmbedTape<Real> etape;
    ScoreTape<Real> qtape;
    const auto h = embed_forward(batch, params, comm, &etape);
    const auto scores = q_forward(h, masks, params, comm, &qtape);

    // Gradient buffers in theta order, then the local squared-error sum.
    std::array<std::vector<Acc>, 7> grad;
    {
        const auto ts = params.tensors();
        for (std::size_t t = 0; t < 7; ++t) grad[t].assign(ts[t]->size(), 0.0);
    }
    Acc loss_local = 0.0;

    const Real* w7 = params.theta7.data.data();
    std::vector<Acc> dh(B * n_loc * K, 0.0);
    std::vector<Acc> dz1_local(B * K, 0.0);
    std::vector<Acc> dz2(K);
    for (std::size_t b = 0; b < B; ++b) {
        const NodeId a = actions[b];
        if (!shape.rows.contains(a)) continue;
        const std::size_t i = a - shape.rows.begin;
        const std::size_t row = b * n_loc + i;
        const Acc diff = static_cast<Acc>(scores.values[row]) - static_cast<Acc>(targets[b]);
        loss_local += diff * diff;
        const Acc ds = 2.0 * diff / static_cast<Acc>(B);

        const Real* z1 = qtape.pooled_proj.data() + b * K;
        const Real* z2 = qtape.node_proj.data() + row * K;
        for (std::size_t k = 0; k < K; ++k) {
            grad[6][k] += ds * static_cast<Acc>(relu(z1[k]));
            grad[6][K + k] += ds * static_cast<Acc>(relu(z2[k]));
            if (z1[k] > Real(0)) dz1_local[b * K + k] += ds * static_cast<Acc>(w7[k]);
            dz2[k] = z2[k] > Real(0) ? ds * static_cast<Acc>(w7[K + k]) : 0.0;
        }
        const Real* hv = h.values.data() + row * K;
        outer_acc(grad[5], K, dz2.data(), K, hv);
        gemv_t_acc(params.theta6, dz2.data(), dh.data() + row * K);
    }

    const auto dz1 = comm.all_reduce_sum(dz1_local);
    std::vector<Acc> dg(B * K, 0.0);
    for (std::size_t b = 0; b < B; ++b) {
        if (comm.rank() == 0) outer_acc(grad[4], K, dz1.data() + b * K, K, qtape.pooled.data() + b * K);
        gemv_t_acc(params.theta5, dz1.data() + b * K, dg.data() + b * K);
    }
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t i = 0; i < n_loc; ++i) {
            Acc* d = dh.data() + (b * n_loc + i) * K;
            for (std::size_t k = 0; k < K; ++k) d[k] += dg[b * K + k];
        }
    }

    std::vector<Acc> dbase(B * n_loc * K, 0.0);
    std::vector<Acc> dpre(K);
    for (std::size_t l = L; l-- > 0;) {
        const auto& pre = etape.preactivation[l];
        const auto& nsum = etape.neighbor_sum[l];
        std::vector<Acc> dn_local(l > 0 ? B * n_loc * K : 0, 0.0);
        for (std::size_t row = 0; row < B * n_loc; ++row) {
            const Acc* d = dh.data() + row * K;
            const Real* p = pre.data() + row * K;
            bool any = false;
            for (std::size_t k = 0; k < K; ++k) {
                dpre[k] = p[k] > Real(0) ? d[k] : 0.0;
                any = any || dpre[k] != 0.0;
            }
            if (!any) continue;
            outer_acc(grad[3], K, dpre.data(), K, nsum.data() + row * K);
            Acc* db = dbase.data() + row * K;
            for (std::size_t k = 0; k < K; ++k) db[k] += dpre[k];
            if (l > 0) gemv_t_acc(params.theta4, dpre.data(), dn_local.data() + row * K);
        }
        if (l == 0) break;
        const auto dn = comm.all_gather(dn_local, B);
        std::fill(dh.begin(), dh.end(), 0.0);
        for (std::size_t b = 0; b < B; ++b) {
            for (std::size_t i = 0; i < n_loc; ++i) {
                const auto v = static_cast<NodeId>(shape.rows.begin + i);
                Acc* d = dh.data() + (b * n_loc + i) * K;
                for (NodeId u : batch[b].adjacency.row(v)) {
                    const Acc* src = dn.data() + (b * N + u) * K;
                    for (std::size_t k = 0; k < K; ++k) d[k] += src[k];
                }
            }
        }
    }

    std::vector<Acc> dw(K);
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t i = 0; i < n_loc; ++i) {
            const std::size_t row = b * n_loc + i;
            const Acc* db = dbase.data() + row * K;
            const auto v = static_cast<NodeId>(shape.rows.begin + i);
            const Acc deg = static_cast<Acc>(batch[b].adjacency.degree(v));
            if (batch[b].solution[i]) {
                for (std::size_t k = 0; k < K; ++k) grad[0][k] += db[k];
            }
            outer_acc(grad[2], K, db, K, etape.edge_features.data() + row * K);
            std::fill(dw.begin(), dw.end(), 0.0);
            gemv_t_acc(params.theta3, db, dw.data());
            for (std::size_t k = 0; k < K; ++k) {
                if (static_cast<Acc>(params.theta2.data[k]) * deg > 0.0) grad[1][k] += dw[k] * deg;
            }
        }
    }

    std::vector<Acc> packed;
    packed.reserve(params.num_values() + 1);
    for (const auto& g : grad) packed.insert(packed.end(), g.begin(), g.end());
    packed.push_back(loss_local);
    const auto total = comm.all_reduce_sum(packed);

    LossAndGradients<Real> out;
    out.grads = PolicyParams<Real>::zeros(params.embed_dim, params.layers);
    std::size_t pos = 0;
    for (auto* t : out.grads.tensors()) {
        for (auto& x : t->data) x = static_cast<Real>(total[pos++]);
    }
    out.loss = total[pos] / static_cast<Acc>(B);
    return out;
}

template struct PolicyParams<float>;
template struct PolicyParams<double>;

template EmbeddingSlice<float> embed_forward(std::span<const GraphSlice>, const PolicyParams<float>&,
                                             Communicator&, EmbedTape<float>*);
template EmbeddingSlice<double> embed_forward(std::span<const GraphSlice>, const PolicyParams<double>&,
                                              Communicator&, EmbedTape<double>*);
template ScoreSlice<float> q_forward(const EmbeddingSlice<float>&, const CandidateMasks&,
                                     const PolicyParams<float>&, Communicator&, ScoreTape<float>*);
template ScoreSlice<double> q_forward(const EmbeddingSlice<double>&, const CandidateMasks&,
                                      const PolicyParams<double>&, Communicator&, ScoreTape<double>*);
template LossAndGradients<float> loss_and_gradients(std::span<const GraphSlice>, std::span<const NodeId>,
                                                    std::span<const float>, const PolicyParams<float>&,
                                                    Communicator&);
template LossAndGradients<double> loss_and_gradients(std::span<const GraphSlice>, std::span<const NodeId>,
                                                     std::span<const double>, const PolicyParams<double>&,
                                                     Communicator&);

}  // namespace graphrl
