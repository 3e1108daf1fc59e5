#include "graphrl/generators.hpp"

#include <algorithm>
#include <string>

#include "graphrl/rng.hpp"

namespace graphrl {

Graph generate_er(NodeId n, double rho, std::uint64_t seed) {
    if (n < 1) throw ConfigError("generate_er: need at least one node");
    if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("generate_er: rho must lie in [0, 1]");
    Rng rng(seed);
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            if (rng.bernoulli(rho)) edges.push_back({u, v});
        }
    }
    return Graph(n, std::move(edges));
}

Graph generate_ba(NodeId n, NodeId d, std::uint64_t seed) {
    if (d < 1 || n <= d) {
        throw ConfigError("generate_ba: need n > d >= 1 (got n=" + std::to_string(n) +
                          ", d=" + std::to_string(d) + ")");
    }
    Rng rng(seed);
    std::vector<Edge> edges;
    // Every endpoint of every edge, so a uniform draw is degree-proportional.
    std::vector<NodeId> endpoints;

    for (NodeId u = 0; u < d; ++u) {
        for (NodeId v = u + 1; v < d; ++v) {
            edges.push_back({u, v});
            endpoints.push_back(u);
            endpoints.push_back(v);
        }
    }

    std::vector<NodeId> targets;
    for (NodeId source = d; source < n; ++source) {
        targets.clear();
        if (source == d) {
            for (NodeId v = 0; v < d; ++v) targets.push_back(v);
        } else {
            while (targets.size() < d) {
                NodeId t = endpoints[rng.index(endpoints.size())];
                if (std::find(targets.begin(), targets.end(), t) == targets.end()) {
                    targets.push_back(t);
                }
            }
        }
        for (NodeId t : targets) {
            edges.push_back({t, source});
            endpoints.push_back(t);
            endpoints.push_back(source);
        }
    }
    return Graph(n, std::move(edges));
}

}  // namespace graphrl
