#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace graphrl {

using NodeId = std::uint32_t;

// Half-open interval of node indices.
struct NodeRange {
    NodeId begin = 0;
    NodeId end = 0;

    [[nodiscard]] NodeId size() const { return end - begin; }
    [[nodiscard]] bool contains(NodeId v) const { return v >= begin && v < end; }
    bool operator==(const NodeRange&) const = default;
};

// Malformed input data: unparsable files, invalid graphs, bad node indices.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid configuration values or command-line arguments.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace graphrl
