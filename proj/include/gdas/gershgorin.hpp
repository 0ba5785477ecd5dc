#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "gdas/graph.hpp"

namespace gdas {

// Diagonal state of the sampling problem: the 0/1 sample indicator
// (diagonal of A = H'H), the per-node disc scale factors (diagonal of S),
// and the set of nodes already enqueued by the traversal.
struct SamplingState {
    std::vector<bool> sampled;
    std::vector<double> scale;
    std::vector<bool> visited;
    double threshold = 0.0;

    static SamplingState unsampled(NodeId n) {
        SamplingState s;
        const std::size_t m = static_cast<std::size_t>(n);
        s.sampled.assign(m, false);
        s.scale.assign(m, 1.0);
        s.visited.assign(m, false);
        return s;
    }

    std::size_t sample_count() const {
        return static_cast<std::size_t>(std::count(sampled.begin(), sampled.end(), true));
    }

    std::vector<NodeId> sampled_nodes() const {
        std::vector<NodeId> out;
        for (std::size_t i = 0; i < sampled.size(); ++i)
            if (sampled[i]) out.push_back(static_cast<NodeId>(i));
        return out;
    }
};

// Per-row Gershgorin discs of C = S B S^{-1} with B = A + mu L.
// center_i = a_ii + mu d_i (scaling never moves centers),
// radius_i = s_i * mu * sum_j w_ij / s_j.
struct DiscView {
    std::vector<double> center;
    std::vector<double> radius;
    std::vector<double> left_end;

    double min_left_end() const {
        return *std::min_element(left_end.begin(), left_end.end());
    }
    double max_right_end() const {
        double best = center[0] + radius[0];
        for (std::size_t i = 1; i < center.size(); ++i)
            best = std::max(best, center[i] + radius[i]);
        return best;
    }
};

namespace detail {

// Shared with the dense oracle, which also needs the mu = 0 corner.
inline DiscView disc_view_unchecked(const Graph& g, const SamplingState& state, double mu) {
    const NodeId n = g.node_count();
    DiscView view;
    view.center.resize(static_cast<std::size_t>(n));
    view.radius.resize(static_cast<std::size_t>(n));
    view.left_end.resize(static_cast<std::size_t>(n));
    const auto& deg = g.degrees();
    for (NodeId i = 0; i < n; ++i) {
        const std::size_t u = static_cast<std::size_t>(i);
        const double a = state.sampled[u] ? 1.0 : 0.0;
        const auto nbrs = g.neighbors(i);
        const auto wts = g.neighbor_weights(i);
        double off = 0.0;
        for (std::size_t k = 0; k < nbrs.size(); ++k)
            off += wts[k] / state.scale[static_cast<std::size_t>(nbrs[k])];
        view.center[u] = a + mu * deg[u];
        view.radius[u] = state.scale[u] * mu * off;
        view.left_end[u] = view.center[u] - view.radius[u];
    }
    return view;
}

} // namespace detail

inline DiscView disc_view(const Graph& g, const SamplingState& state, double mu) {
    if (!(mu > 0.0)) throw argument_error("disc_view: mu must be positive");
    if (state.scale.size() != static_cast<std::size_t>(g.node_count()))
        throw argument_error("disc_view: state size does not match graph");
    for (std::size_t i = 0; i < state.scale.size(); ++i)
        if (!(state.scale[i] > 0.0))
            throw argument_error("disc_view: non-positive scale factor at node " +
                                 std::to_string(i));
    return detail::disc_view_unchecked(g, state, mu);
}

// 1 + 2 mu d_max bounds every eigenvalue of A + mu L from above,
// for every sampling pattern.
inline double eigen_upper_bound(const Graph& g, double mu) {
    if (!(mu > 0.0)) throw argument_error("eigen_upper_bound: mu must be positive");
    return 1.0 + 2.0 * mu * g.max_degree();
}

} // namespace gdas
