#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "graphrl/config.hpp"
#include "graphrl/corpus.hpp"

using namespace graphrl;

TEST_CASE("config parsing") {
    std::istringstream in(
        "schema_version = 1\n# comment\nK = 16\ntau=2\nlearning_rate = 1e-4\nepisodes = unlimited\n"
        "train_data = er:20:0.15:10, ba:20:2:5\nworkers = 2\nd_schedule = fixed:2\n");
    const auto cfg = parse_config(in, "mem");
    CHECK(cfg.train.embed_dim == 16);
    CHECK(cfg.train.tau == 2);
    CHECK(cfg.train.learning_rate == doctest::Approx(1e-4));
    CHECK_FALSE(cfg.train.episodes.has_value());
    CHECK(cfg.train_data == std::vector<std::string>{"er:20:0.15:10", "ba:20:2:5"});
    CHECK(cfg.workers == 2);

    std::istringstream echo(cfg.to_text());
    const auto again = parse_config(echo, "echo");
    CHECK(again.to_text() == cfg.to_text());
}

TEST_CASE("config errors") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return parse_config(in, "mem");
    };
    CHECK_THROWS_AS(parse("K = 4\n"), ConfigError);
    CHECK_THROWS_AS(parse("schema_version = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse("schema_version = 1\nK = 4\nK = 5\n"), ConfigError);
    CHECK_THROWS_AS(parse("schema_version = 1\ncolour = red\n"), ConfigError);
    CHECK_THROWS_AS(parse("schema_version = 1\nK = four\n"), ConfigError);
    CHECK_THROWS_AS(parse("schema_version = 1\ngamma = 1.5\n"), ConfigError);
    CHECK_THROWS_AS(parse("schema_version = 1\nproblem = tsp\n"), ConfigError);
    CHECK_THROWS_AS(parse("schema_version = 1\nd_schedule = fixed:0\n"), ConfigError);
    CHECK_THROWS_AS(parse("schema_version = 1\njust text\n"), ConfigError);
}

TEST_CASE("generated corpus round trips through files") {
    const auto graphs = generate_corpus("er:15:0.3:3:40");
    REQUIRE(graphs.size() == 3);
    CHECK(graphs[0].id == "er15_0000");
    CHECK(graphs[2].seed == 42);
    CHECK(generate_corpus("ba:30:2:2").size() == 2);
    CHECK_THROWS_AS(generate_corpus("er:15:2.0:3"), ConfigError);
    CHECK_THROWS_AS(generate_corpus("ws:15:2:3"), ConfigError);

    const auto dir = std::filesystem::temp_directory_path() / "graphrl_corpus_test";
    std::filesystem::remove_all(dir);
    write_corpus(dir, graphs);
    CHECK(std::filesystem::exists(dir / "manifest.csv"));
    const auto loaded = load_graphs(dir);
    REQUIRE(loaded.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(loaded[i].id == graphs[i].id);
        CHECK(*loaded[i].graph == *graphs[i].graph);
    }
    const auto single = load_graphs(dir / "er15_0001.txt");
    CHECK(single.size() == 1);
    CHECK(resolve_graphs({(dir / "er15_0000.txt").string(), "er:10:0.5:2"}).size() == 3);
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(load_graphs(dir), DataError);
}

TEST_CASE("result lines") {
    const ResultLine r{"g7", 3, 2, {1, 4, 9}};
    const auto text = format_result(r);
    const auto back = parse_result(text, "mem");
    CHECK(back.graph_id == "g7");
    CHECK(back.cover_size == 3);
    CHECK(back.policy_evals == 2);
    CHECK(back.nodes == r.nodes);
    CHECK_THROWS_AS(parse_result("g7 nonsense", "mem"), DataError);
}
