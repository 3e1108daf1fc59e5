#include <doctest.h>

#include <bit>

#include "graphrl/generators.hpp"
#include "graphrl/oracle.hpp"
#include "graphrl/rng.hpp"

using namespace graphrl;

namespace {

std::size_t brute_force(const Graph& g) {
    std::size_t best = g.num_nodes();
    for (std::uint32_t mask = 0; mask < (1U << g.num_nodes()); ++mask) {
        const auto size = static_cast<std::size_t>(std::popcount(mask));
        if (size >= best) continue;
        bool ok = true;
        for (const auto& e : g.edges()) ok = ok && (((mask >> e.u) | (mask >> e.v)) & 1U);
        if (ok) best = size;
    }
    return best;
}

Graph petersen() {
    std::vector<Edge> e;
    for (NodeId i = 0; i < 5; ++i) {
        e.push_back({i, (i + 1) % 5});
        e.push_back({i, i + 5});
        e.push_back({i + 5, (i + 2) % 5 + 5});
    }
    return Graph(10, e);
}

}  // namespace

TEST_CASE("exact cover on known graphs") {
    CHECK(exact_mvc(Graph(3, {{0, 1}, {1, 2}, {0, 2}})).size == 2);
    std::vector<Edge> star;
    for (NodeId v = 1; v < 10; ++v) star.push_back({0, v});
    const auto s = exact_mvc(Graph(10, star));
    CHECK(s.size == 1);
    CHECK(s.cover == std::vector<NodeId>{0});
    CHECK(exact_mvc(petersen()).size == 6);
    CHECK(exact_mvc(Graph(0, {})).size == 0);
    CHECK(exact_mvc(petersen()).exact);
}

TEST_CASE("exact cover equals brute force on small random graphs") {
    Rng rng(99);
    for (int i = 0; i < 200; ++i) {
        const auto n = static_cast<NodeId>(1 + rng.index(12));
        const Graph g = generate_er(n, rng.uniform(0.05, 0.9), 1000 + static_cast<std::uint64_t>(i));
        const auto r = exact_mvc(g);
        CHECK(r.size == brute_force(g));
        CHECK(r.cover.size() == r.size);
        CHECK(is_vertex_cover(g, std::span<const NodeId>(r.cover)));
    }
}

TEST_CASE("bounds bracket the optimum") {
    Rng rng(7);
    for (int i = 0; i < 60; ++i) {
        const auto n = static_cast<NodeId>(5 + rng.index(36));
        const Graph g = generate_er(n, rng.uniform(0.05, 0.6), 2000 + static_cast<std::uint64_t>(i));
        const auto opt = exact_mvc(g).size;
        const auto approx = two_approx_mvc(g);
        CHECK(is_vertex_cover(g, std::span<const NodeId>(approx.cover)));
        CHECK_FALSE(approx.exact);
        CHECK(approx.size <= 2 * opt);
        CHECK(matching_lower_bound(g) <= opt);
        CHECK(clique_partition_lower_bound(g) <= opt);
    }
    std::vector<Edge> star{{0, 1}, {0, 2}, {0, 3}};
    CHECK(two_approx_mvc(Graph(4, star)).size == 2);
    std::vector<Edge> matching{{0, 1}, {2, 3}, {4, 5}};
    CHECK(two_approx_mvc(Graph(6, matching)).size == 6);
    CHECK(two_approx_mvc(Graph(4, {})).size == 0);
}

TEST_CASE("limits and references") {
    const Graph big = generate_er(70, 0.1, 1);
    CHECK_THROWS_AS(exact_mvc(big), OracleLimitError);
    CHECK_THROWS_AS(exact_mvc(big, 70), OracleLimitError);
    const auto ref = reference_size(big);
    CHECK(ref.kind != "exact");
    CHECK(ref.size >= static_cast<double>(matching_lower_bound(big)));
    const Graph small = generate_er(20, 0.2, 1);
    CHECK(reference_size(small).kind == "exact");
    CHECK(reference_size(small).size == static_cast<double>(exact_mvc(small).size));
}

TEST_CASE("approximation ratio") {
    const Graph g(3, {{0, 1}, {1, 2}});
    const auto opt = exact_mvc(g);
    CHECK(approx_ratio(g, opt, opt) == 1.0);
    CHECK(approx_ratio(12, 10.0) == doctest::Approx(1.2));
    const CoverResult bad{{0}, 1, "test", false};
    CHECK_THROWS_AS(approx_ratio(g, bad, opt), DataError);
}
