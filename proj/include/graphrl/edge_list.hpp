#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "graphrl/graph.hpp"

namespace graphrl {

struct LoadedGraph {
    Graph graph;
    std::size_t dropped_self_loops = 0;
    std::size_t dropped_duplicates = 0;
    std::optional<std::uint64_t> seed;  // from the "# nodes=.. edges=.. seed=.." header
};

// Parses "u v" lines; '#' lines are comments. A header comment of the form
// "# nodes=N ..." fixes the node count, otherwise it is max index + 1.
// Self-loops and repeated edges are dropped and counted. Throws DataError
// naming the offending line when a line does not parse.
LoadedGraph parse_edge_list(std::istream& in, const std::string& source_name = "<stream>");
LoadedGraph load_edge_list(const std::filesystem::path& path);

// Writes the header line followed by one "u v" line per edge (u < v).
void write_edge_list(std::ostream& out, const Graph& graph, std::optional<std::uint64_t> seed = {});
void save_edge_list(const std::filesystem::path& path, const Graph& graph,
                    std::optional<std::uint64_t> seed = {});

}  // namespace graphrl
