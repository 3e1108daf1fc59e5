#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "graphrl/agent.hpp"
#include "graphrl/graph.hpp"

namespace graphrl {

struct NamedGraph {
    std::string id;  // file stem, or <type>_<index> for generated graphs
    std::shared_ptr<const Graph> graph;
    std::uint64_t seed = 0;
};

// Generator spec: "er:<n>:<rho>:<count>[:<seed>]" or
// "ba:<n>:<d>:<count>[:<seed>]". Graph i uses seed + i.
bool is_generator_spec(const std::string& text);
std::vector<NamedGraph> generate_corpus(const std::string& spec);

// Edge-list files, or every *.txt / *.edges file of a directory in name order.
std::vector<NamedGraph> load_graphs(const std::filesystem::path& path);

// Resolves a list of generator specs and paths.
std::vector<NamedGraph> resolve_graphs(const std::vector<std::string>& sources);

Dataset to_dataset(const std::vector<NamedGraph>& graphs);

// Writes g.txt per graph plus manifest.csv (id,nodes,edges,seed).
void write_corpus(const std::filesystem::path& dir, const std::vector<NamedGraph>& graphs);

struct ResultLine {
    std::string graph_id;
    std::size_t cover_size = 0;
    std::size_t policy_evals = 0;
    std::vector<NodeId> nodes;
};

// graph_id,cover_size,policy_evals,nodes:<space-separated sorted list>
std::string format_result(const ResultLine& r);
ResultLine parse_result(const std::string& line, const std::string& where);
std::vector<ResultLine> read_results(const std::filesystem::path& path);

void write_metrics_header(std::ostream& out);
void write_metrics_row(std::ostream& out, const MetricsRow& row);

}  // namespace graphrl
