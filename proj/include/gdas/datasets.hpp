#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gdas/delaunay.hpp"
#include "gdas/graph.hpp"
#include "gdas/reconstruct.hpp"
#include "gdas/rng.hpp"

namespace gdas {

// One station: external id, planar location, scalar signal value.
struct NodeRecord {
    std::string id;
    double loc_x = 0.0;
    double loc_y = 0.0;
    double value = 0.0;
};

struct WeightParams {
    double sigma_l = 5.0;
    double sigma_x = 3.0;
};

// Bilateral edge weights: a location kernel times a value kernel,
//   w_ij = exp(-||l_i - l_j||^2 / sigma_l^2) * exp(-(x_i - x_j)^2 / sigma_x^2).
// Both kernels map into (0, 1], so every weight is positive.
inline Graph bilateral_weights(std::span<const NodeRecord> nodes,
                               std::span<const std::pair<NodeId, NodeId>> edges,
                               const WeightParams& params = {}) {
    if (!(params.sigma_l > 0.0) || !(params.sigma_x > 0.0))
        throw argument_error("bilateral_weights: sigmas must be positive");
    std::vector<Edge> weighted;
    weighted.reserve(edges.size());
    for (const auto& [i, j] : edges) {
        const NodeRecord& a = nodes[static_cast<std::size_t>(i)];
        const NodeRecord& b = nodes[static_cast<std::size_t>(j)];
        const double dx = a.loc_x - b.loc_x;
        const double dy = a.loc_y - b.loc_y;
        const double dv = a.value - b.value;
        const double w = std::exp(-(dx * dx + dy * dy) / (params.sigma_l * params.sigma_l)) *
                         std::exp(-(dv * dv) / (params.sigma_x * params.sigma_x));
        weighted.push_back({i, j, w});
    }
    return Graph(static_cast<NodeId>(nodes.size()), weighted);
}

// Unweighted path graph of n nodes.
inline Graph gen_line_graph(NodeId n) {
    if (n < 2) throw argument_error("gen_line_graph: need at least 2 nodes");
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n) - 1);
    for (NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
    return Graph(n, edges);
}

// Node records for the path graph: evenly spaced stations carrying one
// period of a sine as the signal.
inline std::vector<NodeRecord> line_graph_nodes(NodeId n) {
    if (n < 2) throw argument_error("line_graph_nodes: need at least 2 nodes");
    std::vector<NodeRecord> nodes;
    nodes.reserve(static_cast<std::size_t>(n));
    for (NodeId i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        nodes.push_back({std::to_string(i), static_cast<double>(i), 0.0,
                         std::sin(2.0 * std::numbers::pi * t)});
    }
    return nodes;
}

struct ClimateLikeDataset {
    std::vector<NodeRecord> nodes;
    Graph graph;
    GraphSignal signal;
    std::size_t delaunay_ties = 0;
};

// Synthetic stand-in for a station network: n random locations in a
// 60 x 30 box, a smooth temperature-like field sampled at the stations,
// Delaunay edges, bilateral weights with the default sigmas. Deterministic
// given the seed; a Delaunay triangulation is connected by construction.
inline ClimateLikeDataset gen_climate_like(NodeId n, std::uint64_t seed,
                                           const WeightParams& params = {}) {
    if (n < 3) throw argument_error("gen_climate_like: need at least 3 nodes");
    // Box area grows with n so the station spacing (about 4.2 length units)
    // is density-invariant; n = 100 gives the reference 60 x 30 box.
    const double box_x = 6.0 * std::sqrt(static_cast<double>(n));
    const double box_y = 3.0 * std::sqrt(static_cast<double>(n));
    Rng rng(derive_seed(seed, 0xc11aa7e));

    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(n));
    while (pts.size() < static_cast<std::size_t>(n)) {
        const Point2 cand{box_x * rng.uniform01(), box_y * rng.uniform01()};
        bool ok = true;
        for (const Point2& p : pts) {
            const double dx = p.x - cand.x, dy = p.y - cand.y;
            if (dx * dx + dy * dy < 1e-6) {
                ok = false;
                break;
            }
        }
        if (ok) pts.push_back(cand);
    }

    // One field period across the box. Gentle gradients keep neighbor value
    // differences of order sigma_x, matching station data; steep fields
    // would drive bilateral weights (and with them node degrees) toward zero.
    auto field = [box_x, box_y](const Point2& p) {
        return 20.0 + 8.0 * std::sin(std::numbers::pi * p.x / box_x) *
                          std::cos(std::numbers::pi * p.y / box_y);
    };

    ClimateLikeDataset out;
    out.nodes.reserve(static_cast<std::size_t>(n));
    out.signal.reserve(static_cast<std::size_t>(n));
    for (NodeId i = 0; i < n; ++i) {
        const Point2& p = pts[static_cast<std::size_t>(i)];
        const double v = field(p);
        out.nodes.push_back({"s" + std::to_string(i), p.x, p.y, v});
        out.signal.push_back(v);
    }

    DelaunayResult tri = delaunay_edges(pts);
    out.delaunay_ties = tri.cocircular_ties;
    out.graph = bilateral_weights(out.nodes, tri.edges, params);
    return out;
}

} // namespace gdas
