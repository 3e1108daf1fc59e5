#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "graphrl/generators.hpp"
#include "graphrl/inference.hpp"
#include "graphrl/optimizer.hpp"
#include "graphrl/policy.hpp"
#include "graphrl/rng.hpp"

#include "../golden/path3.hpp"

using namespace graphrl;

namespace {

template <typename Real>
PolicyParams<Real> path3_params(int layers) {
    namespace g = golden::path3;
    auto p = PolicyParams<Real>::zeros(2, layers);
    auto fill = [](Matrix<Real>& m, const auto& src) {
        for (std::size_t i = 0; i < src.size(); ++i) m.data[i] = static_cast<Real>(src[i]);
    };
    fill(p.theta1, g::kTheta1);
    fill(p.theta2, g::kTheta2);
    fill(p.theta3, g::kTheta3);
    fill(p.theta4, g::kTheta4);
    fill(p.theta5, g::kTheta5);
    fill(p.theta6, g::kTheta6);
    fill(p.theta7, g::kTheta7);
    return p;
}

std::shared_ptr<const Graph> path3() { return std::make_shared<Graph>(Graph(3, {{0, 1}, {1, 2}})); }

template <typename Real>
std::pair<std::vector<Real>, std::vector<Real>> forward(const PartitionedState& st, const PolicyParams<Real>& p,
                                                        Communicator& comm) {
    const auto h = embed_forward(st.slices(), p, comm);
    const auto s = q_forward(h, candidate_masks(st.slices()), p, comm);
    return {h.values, s.values};
}

}  // namespace

TEST_CASE("path graph forward matches a scalar evaluation") {
    namespace g = golden::path3;
    WorkerGroup group(1);
    group.run([&](Communicator& comm) {
        for (int layers : {1, 2}) {
            const auto p = path3_params<double>(layers);
            PartitionedState st(partition_for(3, 1, 0), {path3()});
            auto [h, s] = forward(st, p, comm);
            const auto& eh = layers == 1 ? g::kEmbedEmptyL1 : g::kEmbedEmptyL2;
            const auto& es = layers == 1 ? g::kScoresEmptyL1 : g::kScoresEmptyL2;
            for (std::size_t i = 0; i < eh.size(); ++i) CHECK(h[i] == doctest::Approx(eh[i]).epsilon(1e-6));
            for (std::size_t i = 0; i < es.size(); ++i) CHECK(s[i] == doctest::Approx(es[i]).epsilon(1e-6));

            apply_action(st, 0, 0);
            std::tie(h, s) = forward(st, p, comm);
            const auto& ah = layers == 1 ? g::kEmbedAfterNode0L1 : g::kEmbedAfterNode0L2;
            const auto& as = layers == 1 ? g::kScoresAfterNode0L1 : g::kScoresAfterNode0L2;
            for (std::size_t i = 0; i < ah.size(); ++i) CHECK(h[i] == doctest::Approx(ah[i]).epsilon(1e-6));
            for (std::size_t i = 0; i < as.size(); ++i) CHECK(s[i] == doctest::Approx(as[i]).epsilon(1e-6));
        }
    });
}

TEST_CASE("float and double forwards agree") {
    const auto g = std::make_shared<Graph>(generate_er(30, 0.2, 3));
    const auto pd = PolicyParams<double>::random(8, 2, 5, 0.3);
    const auto pf = pd.cast<float>();
    WorkerGroup group(1);
    group.run([&](Communicator& comm) {
        PartitionedState st(partition_for(30, 1, 0), {g});
        const auto sd = forward(st, pd, comm).second;
        const auto sf = forward(st, pf, comm).second;
        for (std::size_t i = 0; i < sd.size(); ++i) CHECK(sf[i] == doctest::Approx(sd[i]).epsilon(1e-4));
    });
}

TEST_CASE("scores are identical for every worker count") {
    const auto g = std::make_shared<Graph>(generate_er(23, 0.25, 8));
    const auto params = PolicyParams<float>::random(6, 3, 2, 0.4);
    std::vector<float> base;
    for (int p = 1; p <= 4; ++p) {
        WorkerGroup group(p);
        std::vector<float> scores;
        group.run([&](Communicator& comm) {
            PartitionedState st(partition_for(23, p, comm.rank()), {g});
            apply_action(st, 0, 3);
            auto s = global_scores(st, params, comm);
            if (comm.rank() == 0) scores = s;
        });
        if (p == 1) base = scores;
        CHECK(scores == base);
    }
}

TEST_CASE("relabeling nodes permutes the scores") {
    const Graph g = generate_er(15, 0.3, 21);
    std::vector<NodeId> perm(15);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(4);
    for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.index(i + 1)]);
    std::vector<Edge> edges;
    for (const auto& e : g.edges()) edges.push_back({perm[e.u], perm[e.v]});
    const auto a = std::make_shared<Graph>(g);
    const auto b = std::make_shared<Graph>(Graph(15, edges));
    const auto params = PolicyParams<double>::random(4, 2, 9, 0.5);
    WorkerGroup group(1);
    group.run([&](Communicator& comm) {
        PartitionedState sa(partition_for(15, 1, 0), {a});
        PartitionedState sb(partition_for(15, 1, 0), {b});
        const auto qa = forward(sa, params, comm).second;
        const auto qb = forward(sb, params, comm).second;
        for (NodeId v = 0; v < 15; ++v) CHECK(qb[perm[v]] == doctest::Approx(qa[v]).epsilon(1e-9));
    });
}

TEST_CASE("analytic gradients match central differences") {
    // N=6, K=4, L=2, B=2
    std::vector<std::shared_ptr<const Graph>> graphs{std::make_shared<Graph>(generate_er(6, 0.6, 1)),
                                                     std::make_shared<Graph>(generate_er(6, 0.6, 2))};
    const auto params = PolicyParams<double>::random(4, 2, 3, 0.5);
    PartitionedState st(partition_for(6, 1, 0), graphs);
    apply_action(st, 1, st.is_candidate(1, 2) ? 2 : 0);
    const std::vector<NodeId> actions{1, 4};
    const std::vector<double> targets{-0.7, 0.4};
    WorkerGroup group(1);
    group.run([&](Communicator& comm) {
        const auto an = loss_and_gradients<double>(st.slices(), actions, targets, params, comm);
        const auto grads = an.grads.tensors();
        double worst = 0;
        for (std::size_t t = 0; t < 7; ++t) {
            for (std::size_t i = 0; i < grads[t]->size(); ++i) {
                auto q = params;
                q.tensors()[t]->data[i] += 1e-3;
                const double up = loss_and_gradients<double>(st.slices(), actions, targets, q, comm).loss;
                q.tensors()[t]->data[i] -= 2e-3;
                const double down = loss_and_gradients<double>(st.slices(), actions, targets, q, comm).loss;
                const double fd = (up - down) / 2e-3;
                const double g = grads[t]->data[i];
                worst = std::max(worst, std::abs(fd - g) / std::max({std::abs(fd), std::abs(g), 1e-8}));
            }
        }
        CHECK(worst <= 1e-4);

        // First-order prediction along theta7.
        for (double delta : {1e-2, 1e-3}) {
            auto q = params;
            q.theta7.data[1] += delta;
            const double actual = loss_and_gradients<double>(st.slices(), actions, targets, q, comm).loss - an.loss;
            const double predicted = delta * an.grads.theta7.data[1];
            CHECK(std::abs(actual - predicted) <= 10 * delta * delta);
        }
    });
}

TEST_CASE("gradients are identical for every worker count") {
    std::vector<std::shared_ptr<const Graph>> graphs{std::make_shared<Graph>(generate_er(11, 0.4, 5)),
                                                     std::make_shared<Graph>(generate_er(11, 0.4, 6))};
    const auto params = PolicyParams<float>::random(4, 2, 7, 0.5);
    const std::vector<NodeId> actions{3, 9};
    const std::vector<float> targets{-1.0F, -0.5F};
    PolicyParams<float> base;
    for (int p = 1; p <= 4; ++p) {
        WorkerGroup group(p);
        std::vector<PolicyParams<float>> grads(static_cast<std::size_t>(p));
        group.run([&](Communicator& comm) {
            PartitionedState st(partition_for(11, p, comm.rank()), graphs);
            grads[static_cast<std::size_t>(comm.rank())] =
                loss_and_gradients<float>(st.slices(), actions, targets, params, comm).grads;
        });
        for (const auto& g : grads) CHECK(g == grads.front());
        if (p == 1) base = grads.front();
        const auto a = grads.front().tensors();
        const auto b = base.tensors();
        for (std::size_t t = 0; t < 7; ++t) {
            for (std::size_t i = 0; i < a[t]->size(); ++i) {
                CHECK(a[t]->data[i] == doctest::Approx(b[t]->data[i]).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("parameter validation") {
    auto p = PolicyParams<float>::random(4, 2, 1);
    CHECK(p.num_values() == 4 + 4 + 4 * 16 + 8);
    CHECK_NOTHROW(p.validate());
    p.theta3.data[2] = std::nanf("");
    CHECK_THROWS_AS(p.validate(), DataError);
    auto q = PolicyParams<float>::random(4, 2, 1);
    q.theta7 = Matrix<float>(4, 1);
    CHECK_THROWS_AS(q.validate(), DataError);
    CHECK(PolicyParams<float>::random(4, 2, 1) == PolicyParams<float>::random(4, 2, 1));
}

TEST_CASE("Adam first step matches a scalar reference") {
    auto p = PolicyParams<double>::zeros(1, 1);
    auto g = PolicyParams<double>::zeros(1, 1);
    g.theta1.data[0] = 0.25;
    g.theta2.data[0] = -4.0;
    const AdamConfig cfg{0.01, 0.9, 0.999, 1e-8};
    auto state = AdamState<double>::init(p, cfg);
    adam_step(p, g, state);
    auto scalar = [&](double grad) {
        const double m = (1 - cfg.beta1) * grad / (1 - cfg.beta1);
        const double v = (1 - cfg.beta2) * grad * grad / (1 - cfg.beta2);
        return -cfg.learning_rate * m / (std::sqrt(v) + cfg.epsilon);
    };
    CHECK(p.theta1.data[0] == doctest::Approx(scalar(0.25)).epsilon(1e-12));
    CHECK(p.theta2.data[0] == doctest::Approx(scalar(-4.0)).epsilon(1e-12));
    CHECK(p.theta3.data[0] == 0.0);
    CHECK(state.step == 1);

    // A constant gradient moves each entry by about lr * sign(g) per step.
    for (int i = 0; i < 200; ++i) adam_step(p, g, state);
    CHECK(p.theta1.data[0] == doctest::Approx(-0.01 * 201).epsilon(1e-6));
    CHECK(p.theta2.data[0] == doctest::Approx(0.01 * 201).epsilon(1e-6));

    g.theta4.data[0] = std::numeric_limits<double>::infinity();
    const auto before = p;
    CHECK_THROWS_AS(adam_step(p, g, state), DataError);
    CHECK(p == before);
}
