#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "graphrl/checkpoint.hpp"

using namespace graphrl;

TEST_CASE("checkpoint round trip") {
    Checkpoint ck{PolicyParams<float>::random(8, 3, 11), std::nullopt, 42};
    std::stringstream s;
    write_checkpoint(s, ck);
    CHECK(read_checkpoint(s) == ck);

    auto adam = AdamState<float>::init(ck.params, {1e-3, 0.8, 0.99, 1e-7});
    auto grads = PolicyParams<float>::random(8, 3, 12);
    adam_step(ck.params, grads, adam);
    ck.optimizer = adam;
    const auto path = std::filesystem::temp_directory_path() / "graphrl_ckpt_test.bin";
    save_checkpoint(path, ck);
    CHECK(load_checkpoint(path) == ck);
    std::filesystem::remove(path);
}

TEST_CASE("corrupt checkpoints are rejected") {
    std::stringstream s;
    write_checkpoint(s, {PolicyParams<float>::random(4, 2, 1), std::nullopt, 1});
    const std::string bytes = s.str();

    std::istringstream truncated(bytes.substr(0, bytes.size() - 5));
    CHECK_THROWS_AS(read_checkpoint(truncated), DataError);
    std::string magic = bytes;
    magic[0] = 'X';
    std::istringstream bad_magic(magic);
    CHECK_THROWS_AS(read_checkpoint(bad_magic), DataError);
    std::string version = bytes;
    version[4] = 9;
    std::istringstream bad_version(version);
    CHECK_THROWS_AS(read_checkpoint(bad_version), DataError);
    CHECK_THROWS_AS(load_checkpoint("/nonexistent/ckpt.bin"), DataError);
}
