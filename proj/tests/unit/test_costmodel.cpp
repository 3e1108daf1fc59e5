#include <doctest.h>

#include "graphrl/costmodel.hpp"
#include "graphrl/types.hpp"

#include "../golden/cost_grid.hpp"

using namespace graphrl;

TEST_CASE("cost formulas on hand-checked points") {
    CHECK(t_embed({1, 100, 0.15, 32, 2, 2, 0, 0, 50000}).compute == doctest::Approx(411200));
    CHECK(t_action_seq({1, 10, 0.15, 4, 1, 1, 0, 0, 1}) == doctest::Approx(416));
    const CostConfig big{1, 21000, 0.15, 32, 2, 1, 1e-5, 1e-9, 50000};
    CHECK(memory_bytes(big).adjacency / 1e9 == doctest::Approx(1.323).epsilon(1e-3));
    CHECK(implied_edges(big) / 1e6 == doctest::Approx(33.1).epsilon(1e-3));
    CHECK(adjacency_bytes_from_entries(12, 1, 2) == 120);
    const CostConfig wide{1, 10000, 0.15, 32, 2, 6, 1e-5, 1e-9, 50000};
    CHECK(efficiency_embed(wide) > 0.99);
    CHECK(efficiency_action(wide) > 0.99);
}

TEST_CASE("cost formulas match the independent calculator") {
    for (const auto& g : golden::kCostGrid) {
        const CostConfig c{g.B, g.N, g.rho, g.K, g.L, g.P, g.alpha, g.beta, g.R};
        const auto te = t_embed(c);
        const auto ta = t_action(c);
        const auto m = memory_bytes(c);
        const std::array<double, 15> got{te.compute, te.latency, te.bandwidth, t_embed_seq(c), ta.compute,
                                         ta.latency, ta.bandwidth, t_action_seq(c), efficiency_embed(c),
                                         efficiency_action(c), m.adjacency, m.solutions, m.candidates, m.replay,
                                         implied_edges(c)};
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(g.expected[i]).epsilon(1e-12));
    }
}

TEST_CASE("structural identities") {
    CostConfig c{4, 500, 0.1, 16, 3, 1, 1e-5, 1e-9, 1000};
    CHECK(t_embed(c).latency == 0.0);
    CHECK(t_action(c).compute + t_action(c).latency == doctest::Approx(t_action_seq(c)));
    CHECK(t_embed_seq(c) == doctest::Approx(t_embed(c).compute));
    double prev_e = 2;
    double prev_a = 2;
    for (double p : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        c.P = p;
        CHECK(t_embed(c).compute == doctest::Approx(t_embed_seq(c) / p));
        CHECK(efficiency_embed(c) <= prev_e);
        CHECK(efficiency_action(c) < prev_a);
        CHECK(efficiency_action(c) > 0);
        prev_e = efficiency_embed(c);
        prev_a = efficiency_action(c);
    }
    c.P = 1;
    const auto one = memory_bytes(c);
    c.P = 2;
    const auto two = memory_bytes(c);
    CHECK(two.adjacency == one.adjacency / 2);
    CHECK(two.solutions == one.solutions / 2);
    CHECK(two.replay - 8 * c.R == doctest::Approx((one.replay - 8 * c.R) / 2));
    CHECK(t_embed(c).bandwidth == doctest::Approx(c.beta * c.L * c.B * c.K * c.N));
    CHECK_THROWS_AS(t_embed({1, 10, 0.1, 4, 1, 11, 0, 0, 1}), ConfigError);
    CHECK_THROWS_AS(t_embed({1, 10, 0.0, 4, 1, 1, 0, 0, 1}), ConfigError);
}

TEST_CASE("instrumented run matches the collective model") {
    const CostConfig c{2, 30, 0.2, 8, 2, 3, 1e-5, 1e-9, 1000};
    const auto m = measure_instrumented(c, 3);
    CHECK(m.embed_all_reduces_per_forward == 2);
    CHECK(m.embed_elements_per_all_reduce == 2 * 8 * 30);
    CHECK(m.q_all_reduces_per_forward == 1);
    CHECK(m.q_elements_per_all_reduce == 2 * 8);
    CHECK(m.replay_tuples == 1000);
    const auto report = compare_instrumented(c, m);
    REQUIRE(report.size() == 7);
    for (std::size_t i = 0; i < 4; ++i) CHECK_FALSE(report[i].diverges);
    CHECK(report[6].measured <= report[6].model);
}
