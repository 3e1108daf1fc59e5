#include <doctest.h>

#include <cmath>
#include <limits>

#include "graphrl/generators.hpp"
#include "graphrl/inference.hpp"

using namespace graphrl;

TEST_CASE("schedule parsing and tiers") {
    const auto a = SelectionSchedule::adaptive();
    CHECK(a.d_for(60, 100) == 8);
    CHECK(a.d_for(50, 100) == 4);
    CHECK(a.d_for(26, 100) == 4);
    CHECK(a.d_for(25, 100) == 2);
    CHECK(a.d_for(12, 100) == 1);
    CHECK(SelectionSchedule::parse("adaptive") == a);
    CHECK(SelectionSchedule::parse("fixed:3") == SelectionSchedule::fixed(3));
    CHECK(SelectionSchedule::parse("0.5:8,0.25:4,0.125:2,0:1") == a);
    CHECK(SelectionSchedule::parse(a.to_string()) == a);
    CHECK_THROWS_AS(SelectionSchedule::parse("fixed:0"), ConfigError);
    CHECK_THROWS_AS(SelectionSchedule::parse("0.5:8"), ConfigError);
    CHECK_THROWS_AS(SelectionSchedule::parse("sometimes"), ConfigError);
}

TEST_CASE("top-d selection") {
    const std::vector<float> s{5, 1, 9, 9};
    const std::vector<std::uint8_t> all{1, 1, 1, 1};
    CHECK(select_top_d(s, all, 2) == std::vector<NodeId>{2, 3});
    CHECK(select_top_d(s, all, 3) == std::vector<NodeId>{2, 3, 0});
    CHECK(select_top_d(s, std::vector<std::uint8_t>{1, 1, 0, 1}, 2) == std::vector<NodeId>{3, 0});
    CHECK(select_top_d(s, all, 10).size() == 4);
    CHECK_THROWS_AS(select_top_d(s, std::vector<std::uint8_t>{0, 0, 0, 0}, 2), DataError);
}

TEST_CASE("global scores are gathered in node order and masked") {
    const auto g = std::make_shared<Graph>(Graph(8, {{0, 1}, {1, 2}, {2, 3}, {4, 5}, {5, 6}, {3, 4}}));
    const auto params = PolicyParams<float>::random(4, 2, 1, 0.3);
    std::vector<float> one;
    std::vector<float> two;
    for (int p : {1, 2}) {
        WorkerGroup group(p);
        group.run([&](Communicator& comm) {
            PartitionedState st(partition_for(8, p, comm.rank()), {g});
            auto s = global_scores(st, params, comm);
            if (comm.rank() == 0) (p == 1 ? one : two) = s;
        });
    }
    REQUIRE(one.size() == 8);
    CHECK(one == two);
    CHECK(std::isinf(one[7]));
    CHECK(one[7] < 0);
}

TEST_CASE("solve returns valid covers for every schedule and worker count") {
    std::vector<std::shared_ptr<const Graph>> graphs;
    for (std::uint64_t i = 0; i < 3; ++i) graphs.push_back(std::make_shared<Graph>(generate_er(40, 0.1, i)));
    graphs.push_back(std::make_shared<Graph>(generate_ba(25, 2, 5)));
    graphs.push_back(std::make_shared<Graph>(Graph(6, {})));
    const auto params = PolicyParams<float>::random(8, 2, 2, 0.3);
    for (const auto& schedule : {SelectionSchedule::fixed(1), SelectionSchedule::fixed(4), SelectionSchedule::adaptive()}) {
        std::vector<GraphSolution> base;
        for (int p = 1; p <= 3; ++p) {
            WorkerGroup group(p);
            std::vector<GraphSolution> out;
            group.run([&](Communicator& comm) {
                auto r = solve_all(graphs, params, schedule, comm);
                if (comm.rank() == 0) out = std::move(r);
            });
            REQUIRE(out.size() == graphs.size());
            for (std::size_t i = 0; i < graphs.size(); ++i) {
                CHECK(out[i].graph_id == i);
                CHECK(is_vertex_cover(*graphs[i], std::span<const NodeId>(out[i].cover)));
                CHECK(out[i].cover.size() == out[i].order.size());
            }
            CHECK(out[4].cover.empty());
            if (p == 1) base = out;
            for (std::size_t i = 0; i < graphs.size(); ++i) CHECK(out[i].order == base[i].order);
        }
    }
}

TEST_CASE("larger d needs fewer policy evaluations") {
    const std::vector<std::shared_ptr<const Graph>> graphs{std::make_shared<Graph>(generate_er(120, 0.1, 3))};
    const auto params = PolicyParams<float>::random(8, 2, 2, 0.3);
    WorkerGroup group(1);
    group.run([&](Communicator& comm) {
        const auto d1 = solve(graphs, params, SelectionSchedule::fixed(1), comm);
        const auto ad = solve(graphs, params, SelectionSchedule::adaptive(), comm);
        CHECK(d1.graphs[0].policy_evals == d1.graphs[0].cover.size());
        CHECK(ad.graphs[0].policy_evals < d1.graphs[0].policy_evals);
    });
}
