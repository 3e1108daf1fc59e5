#include "graphrl/edge_list.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace graphrl {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc{} && ptr == token.data() + token.size();
}

// Reads "key=value" pairs out of a header comment.
void parse_header(std::string_view body, std::optional<NodeId>& nodes,
                  std::optional<std::uint64_t>& seed) {
    std::istringstream tokens{std::string(body)};
    std::string token;
    while (tokens >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string_view key(token.data(), eq);
        const std::string_view value(token.data() + eq + 1, token.size() - eq - 1);
        if (key == "nodes") {
            NodeId n = 0;
            if (parse_number(value, n)) nodes = n;
        } else if (key == "seed") {
            std::uint64_t s = 0;
            if (parse_number(value, s)) seed = s;
        }
    }
}

}  // namespace

LoadedGraph parse_edge_list(std::istream& in, const std::string& source_name) {
    LoadedGraph result;
    std::optional<NodeId> header_nodes;
    std::vector<Edge> edges;
    NodeId max_index = 0;
    bool any_index = false;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty()) continue;
        if (body.front() == '#') {
            parse_header(body.substr(1), header_nodes, result.seed);
            continue;
        }
        const auto split = body.find_first_of(" \t");
        NodeId u = 0;
        NodeId v = 0;
        if (split == std::string_view::npos || !parse_number(body.substr(0, split), u) ||
            !parse_number(trim(body.substr(split)), v)) {
            throw DataError(source_name + ":" + std::to_string(line_no) +
                            ": expected \"u v\", got \"" + std::string(body) + "\"");
        }
        max_index = std::max({max_index, u, v});
        any_index = true;
        if (u == v) {
            ++result.dropped_self_loops;
            continue;
        }
        edges.push_back({std::min(u, v), std::max(u, v)});
    }

    std::sort(edges.begin(), edges.end());
    const auto unique_end = std::unique(edges.begin(), edges.end());
    result.dropped_duplicates = static_cast<std::size_t>(edges.end() - unique_end);
    edges.erase(unique_end, edges.end());

    NodeId n = any_index ? max_index + 1 : 0;
    if (header_nodes) {
        if (any_index && *header_nodes <= max_index) {
            throw DataError(source_name + ": header declares " + std::to_string(*header_nodes) +
                            " nodes but index " + std::to_string(max_index) + " appears");
        }
        n = *header_nodes;
    }
    result.graph = Graph(n, std::move(edges));
    return result;
}

LoadedGraph load_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open edge list " + path.string());
    return parse_edge_list(in, path.string());
}

void write_edge_list(std::ostream& out, const Graph& graph, std::optional<std::uint64_t> seed) {
    out << "# nodes=" << graph.num_nodes() << " edges=" << graph.num_edges();
    if (seed) out << " seed=" << *seed;
    out << '\n';
    for (const auto& e : graph.edges()) out << e.u << ' ' << e.v << '\n';
}

void save_edge_list(const std::filesystem::path& path, const Graph& graph,
                    std::optional<std::uint64_t> seed) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    write_edge_list(out, graph, seed);
    if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace graphrl
