#include "graphrl/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "graphrl/edge_list.hpp"
#include "graphrl/generators.hpp"

namespace graphrl {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

template <typename T>
T number(const std::string& text, const std::string& spec) {
    std::istringstream in(text);
    T value{};
    if (!(in >> value) || !in.eof()) throw ConfigError("bad number '" + text + "' in generator spec '" + spec + "'");
    return value;
}

}  // namespace

bool is_generator_spec(const std::string& text) { return text.rfind("er:", 0) == 0 || text.rfind("ba:", 0) == 0; }

std::vector<NamedGraph> generate_corpus(const std::string& spec) {
    const auto parts = split(spec, ':');
    if ((parts.size() != 4 && parts.size() != 5) || (parts[0] != "er" && parts[0] != "ba")) {
        throw ConfigError("generator spec '" + spec + "' must be er:<n>:<rho>:<count>[:<seed>] or "
                          "ba:<n>:<d>:<count>[:<seed>]");
    }
    const auto n = number<NodeId>(parts[1], spec);
    const auto count = number<std::size_t>(parts[3], spec);
    const auto seed = parts.size() == 5 ? number<std::uint64_t>(parts[4], spec) : std::uint64_t{1};
    std::vector<NamedGraph> out;
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t s = seed + i;
        Graph g = parts[0] == "er" ? generate_er(n, number<double>(parts[2], spec), s)
                                   : generate_ba(n, number<NodeId>(parts[2], spec), s);
        out.push_back({fmt::format("{}{}_{:04d}", parts[0], n, i), std::make_shared<Graph>(std::move(g)), s});
    }
    return out;
}

std::vector<NamedGraph> load_graphs(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    if (fs::is_directory(path)) {
        for (const auto& entry : fs::directory_iterator(path)) {
            const auto ext = entry.path().extension();
            if (entry.is_regular_file() && (ext == ".txt" || ext == ".edges")) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) throw DataError("no edge-list files in " + path.string());
    } else if (fs::exists(path)) {
        files.push_back(path);
    } else {
        throw DataError("no such graph file or directory: " + path.string());
    }
    std::vector<NamedGraph> out;
    for (const auto& f : files) {
        auto loaded = load_edge_list(f);
        out.push_back({f.stem().string(), std::make_shared<Graph>(std::move(loaded.graph)), loaded.seed.value_or(0)});
    }
    return out;
}

std::vector<NamedGraph> resolve_graphs(const std::vector<std::string>& sources) {
    std::vector<NamedGraph> out;
    for (const auto& s : sources) {
        auto part = is_generator_spec(s) ? generate_corpus(s) : load_graphs(s);
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return out;
}

Dataset to_dataset(const std::vector<NamedGraph>& graphs) {
    Dataset out;
    out.reserve(graphs.size());
    for (const auto& g : graphs) out.push_back(g.graph);
    return out;
}

void write_corpus(const std::filesystem::path& dir, const std::vector<NamedGraph>& graphs) {
    std::filesystem::create_directories(dir);
    std::ofstream manifest(dir / "manifest.csv");
    if (!manifest) throw DataError("cannot write manifest in " + dir.string());
    manifest << "id,nodes,edges,seed\n";
    for (const auto& g : graphs) {
        save_edge_list(dir / (g.id + ".txt"), *g.graph, g.seed);
        manifest << g.id << ',' << g.graph->num_nodes() << ',' << g.graph->num_edges() << ',' << g.seed << '\n';
    }
}

std::string format_result(const ResultLine& r) {
    std::string out = fmt::format("{},{},{},nodes:", r.graph_id, r.cover_size, r.policy_evals);
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(r.nodes[i]);
    }
    return out;
}

ResultLine parse_result(const std::string& line, const std::string& where) {
    const auto fields = split(line, ',');
    if (fields.size() != 4 || fields[3].rfind("nodes:", 0) != 0) {
        throw DataError(where + ": expected graph_id,cover_size,policy_evals,nodes:<list>");
    }
    ResultLine r;
    r.graph_id = fields[0];
    try {
        r.cover_size = std::stoull(fields[1]);
        r.policy_evals = std::stoull(fields[2]);
    } catch (const std::exception&) {
        throw DataError(where + ": bad count field");
    }
    std::istringstream nodes(fields[3].substr(6));
    long long v = 0;
    while (nodes >> v) {
        if (v < 0) throw DataError(where + ": negative node index");
        r.nodes.push_back(static_cast<NodeId>(v));
    }
    if (!nodes.eof()) throw DataError(where + ": bad node list");
    if (r.nodes.size() != r.cover_size) throw DataError(where + ": cover_size does not match the node list");
    return r;
}

std::vector<ResultLine> read_results(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open results file " + path.string());
    std::vector<ResultLine> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        out.push_back(parse_result(line, path.string() + ":" + std::to_string(line_no)));
    }
    return out;
}

void write_metrics_header(std::ostream& out) { out << "step,epsilon,loss,mean_approx_ratio,cover_size_mean\n"; }

void write_metrics_row(std::ostream& out, const MetricsRow& row) {
    out << fmt::format("{},{:.6f},{},{:.6f},{:.4f}\n", row.step, row.epsilon,
                       std::isnan(row.loss) ? std::string() : fmt::format("{:.6g}", row.loss),
                       row.mean_approx_ratio, row.cover_size_mean);
}

}  // namespace graphrl
