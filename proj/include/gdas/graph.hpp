#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "gdas/errors.hpp"

namespace gdas {

using NodeId = std::int32_t;

struct Edge {
    NodeId src = 0;
    NodeId dst = 0;
    double weight = 0.0;
};

// Undirected weighted graph in a compressed neighbor-list layout.
// Neighbors are stored sorted by index, so traversals that enqueue in
// storage order are deterministic. The structure is immutable after
// construction; semantic checks (self-loops, positivity, connectivity)
// live in validate() so that broken inputs can still be inspected.
class Graph {
public:
    Graph() = default;

    Graph(NodeId node_count, std::span<const Edge> edges) : node_count_(node_count) {
        if (node_count < 0) throw argument_error("Graph: negative node count");
        edges_.reserve(edges.size());
        for (const Edge& e : edges) {
            if (e.src < 0 || e.src >= node_count || e.dst < 0 || e.dst >= node_count) {
                std::ostringstream msg;
                msg << "Graph: edge (" << e.src << ", " << e.dst
                    << ") references a node outside [0, " << node_count << ")";
                throw argument_error(msg.str());
            }
            Edge canon = e;
            if (canon.src > canon.dst) std::swap(canon.src, canon.dst);
            edges_.push_back(canon);
        }
        std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
            if (a.src != b.src) return a.src < b.src;
            if (a.dst != b.dst) return a.dst < b.dst;
            return a.weight < b.weight;
        });

        const std::size_t n = static_cast<std::size_t>(node_count);
        std::vector<std::size_t> arc_count(n, 0);
        for (const Edge& e : edges_) {
            ++arc_count[static_cast<std::size_t>(e.src)];
            if (e.dst != e.src) ++arc_count[static_cast<std::size_t>(e.dst)];
        }
        offset_.assign(n + 1, 0);
        for (std::size_t i = 0; i < n; ++i) offset_[i + 1] = offset_[i] + arc_count[i];
        adj_.resize(offset_[n]);
        adj_weight_.resize(offset_[n]);
        std::vector<std::size_t> fill(offset_.begin(), offset_.end() - 1);
        for (const Edge& e : edges_) {
            adj_[fill[static_cast<std::size_t>(e.src)]] = e.dst;
            adj_weight_[fill[static_cast<std::size_t>(e.src)]++] = e.weight;
            if (e.dst != e.src) {
                adj_[fill[static_cast<std::size_t>(e.dst)]] = e.src;
                adj_weight_[fill[static_cast<std::size_t>(e.dst)]++] = e.weight;
            }
        }
        // Canonical edge order already gives sorted rows for src; dst rows
        // need a per-row sort since arcs arrive out of order.
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t lo = offset_[i], hi = offset_[i + 1];
            std::vector<std::pair<NodeId, double>> row;
            row.reserve(hi - lo);
            for (std::size_t k = lo; k < hi; ++k) row.emplace_back(adj_[k], adj_weight_[k]);
            std::sort(row.begin(), row.end());
            for (std::size_t k = lo; k < hi; ++k) {
                adj_[k] = row[k - lo].first;
                adj_weight_[k] = row[k - lo].second;
            }
        }

        degree_.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = offset_[i]; k < offset_[i + 1]; ++k)
                degree_[i] += adj_weight_[k];
        max_degree_ = degree_.empty() ? 0.0 : *std::max_element(degree_.begin(), degree_.end());
    }

    NodeId node_count() const noexcept { return node_count_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    std::span<const NodeId> neighbors(NodeId i) const {
        const std::size_t u = static_cast<std::size_t>(i);
        return {adj_.data() + offset_[u], offset_[u + 1] - offset_[u]};
    }
    std::span<const double> neighbor_weights(NodeId i) const {
        const std::size_t u = static_cast<std::size_t>(i);
        return {adj_weight_.data() + offset_[u], offset_[u + 1] - offset_[u]};
    }

    // Canonical undirected edge list: src <= dst, lexicographic order.
    std::span<const Edge> edges() const noexcept { return edges_; }

    const std::vector<double>& degrees() const noexcept { return degree_; }
    double degree(NodeId i) const { return degree_[static_cast<std::size_t>(i)]; }
    double max_degree() const noexcept { return max_degree_; }

private:
    NodeId node_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offset_;
    std::vector<NodeId> adj_;
    std::vector<double> adj_weight_;
    std::vector<double> degree_;
    double max_degree_ = 0.0;
};

enum class ValidationIssueKind {
    TooSmall,
    SelfLoop,
    NonPositiveWeight,
    DuplicateEdge,
    Asymmetry,
    Disconnected,
};

struct ValidationIssue {
    ValidationIssueKind kind;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool valid() const noexcept { return issues.empty(); }

    std::string to_string() const {
        if (issues.empty()) return "graph is valid";
        std::string out;
        for (const auto& issue : issues) {
            if (!out.empty()) out += "; ";
            out += issue.message;
        }
        return out;
    }
};

// Structural checks: at least two nodes, no self-loops, strictly positive
// weights, no duplicate node pairs, symmetric adjacency, connected (one BFS).
inline ValidationReport validate(const Graph& g) {
    ValidationReport report;
    auto add = [&](ValidationIssueKind kind, std::string msg) {
        report.issues.push_back({kind, std::move(msg)});
    };

    const NodeId n = g.node_count();
    if (n < 2) {
        add(ValidationIssueKind::TooSmall,
            "graph has " + std::to_string(n) + " node(s); at least 2 required");
        return report;
    }

    const auto edges = g.edges();
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const Edge& e = edges[k];
        if (e.src == e.dst)
            add(ValidationIssueKind::SelfLoop,
                "self-loop on node " + std::to_string(e.src));
        if (!(e.weight > 0.0)) {
            std::ostringstream msg;
            msg << "non-positive weight " << e.weight << " on edge (" << e.src << ", "
                << e.dst << ")";
            add(ValidationIssueKind::NonPositiveWeight, msg.str());
        }
        if (k > 0 && edges[k - 1].src == e.src && edges[k - 1].dst == e.dst)
            add(ValidationIssueKind::DuplicateEdge,
                "duplicate edge (" + std::to_string(e.src) + ", " + std::to_string(e.dst) + ")");
    }

    // Symmetric storage is structural for this representation; verify the
    // reverse arc anyway so a future raw constructor cannot sneak past.
    for (NodeId i = 0; i < n; ++i) {
        const auto nbrs = g.neighbors(i);
        const auto wts = g.neighbor_weights(i);
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            const auto rev = g.neighbors(nbrs[k]);
            const auto rev_w = g.neighbor_weights(nbrs[k]);
            const auto it = std::lower_bound(rev.begin(), rev.end(), i);
            const bool found = it != rev.end() && *it == i &&
                               rev_w[static_cast<std::size_t>(it - rev.begin())] == wts[k];
            if (!found) {
                add(ValidationIssueKind::Asymmetry,
                    "arc (" + std::to_string(i) + " -> " + std::to_string(nbrs[k]) +
                        ") has no matching reverse arc");
            }
        }
    }

    // Connectivity from node 0.
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::queue<NodeId> queue;
    queue.push(0);
    seen[0] = true;
    NodeId reached = 1;
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop();
        for (NodeId v : g.neighbors(u)) {
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = true;
                ++reached;
                queue.push(v);
            }
        }
    }
    if (reached < n) {
        NodeId first_unreached = -1;
        for (NodeId i = 0; i < n; ++i)
            if (!seen[static_cast<std::size_t>(i)]) {
                first_unreached = i;
                break;
            }
        std::ostringstream msg;
        msg << "graph is disconnected: " << (n - reached) << " of " << n
            << " nodes unreachable from node 0 (first unreachable: node " << first_unreached
            << ")";
        add(ValidationIssueKind::Disconnected, msg.str());
    }

    return report;
}

inline void require_valid(const Graph& g) {
    const ValidationReport report = validate(g);
    if (!report.valid()) throw validation_error(report.to_string());
}

// Matrix-free combinatorial Laplacian L = D - W over a validated graph.
class LaplacianOperator {
public:
    explicit LaplacianOperator(const Graph& g) : graph_(&g) {}

    NodeId size() const noexcept { return graph_->node_count(); }
    const Graph& graph() const noexcept { return *graph_; }

    // y = (D - W) x
    void apply(std::span<const double> x, std::span<double> y) const {
        const NodeId n = graph_->node_count();
        const auto& deg = graph_->degrees();
        for (NodeId i = 0; i < n; ++i) {
            const auto nbrs = graph_->neighbors(i);
            const auto wts = graph_->neighbor_weights(i);
            double acc = deg[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
            for (std::size_t k = 0; k < nbrs.size(); ++k)
                acc -= wts[k] * x[static_cast<std::size_t>(nbrs[k])];
            y[static_cast<std::size_t>(i)] = acc;
        }
    }

    std::vector<double> apply(std::span<const double> x) const {
        std::vector<double> y(x.size());
        apply(x, y);
        return y;
    }

private:
    const Graph* graph_;
};

inline LaplacianOperator build_laplacian(const Graph& g) {
    require_valid(g);
    return LaplacianOperator(g);
}

} // namespace gdas
