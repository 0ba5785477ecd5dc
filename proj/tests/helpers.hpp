#pragma once

#include <cstdint>
#include <vector>

#include "gdas/graph.hpp"
#include "gdas/rng.hpp"

namespace gdas_test {

inline gdas::Graph path_graph(gdas::NodeId n, double w = 1.0) {
    std::vector<gdas::Edge> edges;
    for (gdas::NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, w});
    return gdas::Graph(n, edges);
}

inline gdas::Graph cycle_graph(gdas::NodeId n, double w = 1.0) {
    std::vector<gdas::Edge> edges;
    for (gdas::NodeId i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, w});
    return gdas::Graph(n, edges);
}

inline gdas::Graph star_graph(gdas::NodeId leaves, double w = 1.0) {
    std::vector<gdas::Edge> edges;
    for (gdas::NodeId i = 1; i <= leaves; ++i) edges.push_back({0, i, w});
    return gdas::Graph(leaves + 1, edges);
}

// Connected random graph: random spanning tree plus `extra` random edges,
// weights uniform in (0, 1].
inline gdas::Graph random_connected_graph(gdas::NodeId n, std::size_t extra,
                                          std::uint64_t seed) {
    gdas::Rng rng(seed);
    std::vector<gdas::Edge> edges;
    for (gdas::NodeId i = 1; i < n; ++i) {
        const gdas::NodeId j =
            static_cast<gdas::NodeId>(rng.below(static_cast<std::uint64_t>(i)));
        edges.push_back({j, i, rng.uniform_pos01()});
    }
    std::size_t added = 0;
    while (added < extra) {
        const auto a = static_cast<gdas::NodeId>(rng.below(static_cast<std::uint64_t>(n)));
        const auto b = static_cast<gdas::NodeId>(rng.below(static_cast<std::uint64_t>(n)));
        if (a == b) continue;
        bool dup = false;
        for (const gdas::Edge& e : edges) {
            if ((e.src == std::min(a, b) && e.dst == std::max(a, b))) {
                dup = true;
                break;
            }
        }
        if (dup) continue;
        edges.push_back({std::min(a, b), std::max(a, b), rng.uniform_pos01()});
        ++added;
    }
    return gdas::Graph(n, edges);
}

} // namespace gdas_test
