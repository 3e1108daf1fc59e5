#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "graphrl/agent.hpp"

namespace graphrl {

inline constexpr int kConfigSchemaVersion = 1;

// Everything a train/solve run needs. Defaults follow the reference
// hyper-parameters (K=32, L=2, gamma=0.9, lr=1e-5, R=50000, eps 0.9 -> 0.1).
struct RunConfig {
    std::string problem = "mvc";
    TrainConfig train;
    int workers = 1;
    std::vector<std::string> train_data;  // edge-list files/directories or generator specs
    std::vector<std::string> eval_data;
    std::string d_schedule = "adaptive";
    std::uint32_t exact_limit = 40;
    std::string output_dir;

    // Throws ConfigError for an unknown key or a bad value.
    void set(const std::string& key, const std::string& value);
    void validate() const;
    // Flat key = value text that load_config() reads back.
    [[nodiscard]] std::string to_text() const;
};

// Parses "key = value" lines; '#' starts a comment. The file must declare
// schema_version = 1. Throws ConfigError with the line number on errors.
std::map<std::string, std::string> parse_key_values(std::istream& in, const std::string& source_name);

RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(std::istream& in, const std::string& source_name);

}  // namespace graphrl
