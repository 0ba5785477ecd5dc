#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <queue>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "gdas/gershgorin.hpp"
#include "gdas/graph.hpp"
#include "gdas/rng.hpp"

namespace gdas {

// Scale factor that aligns node i's disc left-end at exactly `threshold`,
// given the current scale factors of its neighbors:
//
//   s_i = (a_ii + mu d_i - T) / (mu sum_j w_ij / s_j)
//
// A result < 1 (including <= 0 when the numerator is negative) means the
// left-end cannot reach T by expansion alone and the node must be sampled.
inline double scale_factor(const Graph& g, NodeId node, bool sampled,
                           std::span<const double> scale, double threshold, double mu) {
    const auto nbrs = g.neighbors(node);
    const auto wts = g.neighbor_weights(node);
    double off = 0.0;
    for (std::size_t k = 0; k < nbrs.size(); ++k)
        off += wts[k] / scale[static_cast<std::size_t>(nbrs[k])];
    const double denom = mu * off;
    if (!(denom > 0.0))
        throw argument_error("scale_factor: node " + std::to_string(node) +
                             " has no positive-weight neighbors");
    const double a = sampled ? 1.0 : 0.0;
    return (a + mu * g.degree(node) - threshold) / denom;
}

struct BfisResult {
    SamplingState state;
    std::size_t sample_count = 0;
    std::vector<NodeId> traversal_order;
    // Nodes whose recomputed post-sampling scale still fell below 1.
    // The alignment guarantee is stated only for all-scales >= 1, so the
    // verifier treats a nonzero count as a hypothesis violation.
    int sub_unit_scale_count = 0;
};

// Breadth First Iterative Sampling. One BFS pass from `start`; each
// dequeued node is aligned at T by scaling, and sampled first whenever
// scaling alone cannot reach T. Neighbors enqueue in ascending index
// order, so the traversal (and therefore the output) is deterministic.
// Assumes a validated (connected, positive-weight) graph.
inline BfisResult bfis(const Graph& g, double threshold, NodeId start, double mu) {
    const NodeId n = g.node_count();
    if (!(threshold >= 0.0 && threshold < 1.0))
        throw argument_error("bfis: threshold must lie in [0, 1)");
    if (start < 0 || start >= n) throw argument_error("bfis: start node out of range");
    if (!(mu > 0.0)) throw argument_error("bfis: mu must be positive");

    BfisResult result;
    result.state = SamplingState::unsampled(n);
    result.state.threshold = threshold;
    result.traversal_order.reserve(static_cast<std::size_t>(n));

    auto& sampled = result.state.sampled;
    auto& scale = result.state.scale;
    auto& enqueued = result.state.visited;

    std::queue<NodeId> queue;
    queue.push(start);
    enqueued[static_cast<std::size_t>(start)] = true;

    while (!queue.empty()) {
        const NodeId k = queue.front();
        queue.pop();
        result.traversal_order.push_back(k);

        double s = scale_factor(g, k, false, scale, threshold, mu);
        if (s < 1.0) {
            sampled[static_cast<std::size_t>(k)] = true;
            ++result.sample_count;
            s = scale_factor(g, k, true, scale, threshold, mu);
            if (s < 1.0) ++result.sub_unit_scale_count;
        }
        scale[static_cast<std::size_t>(k)] = s;

        for (NodeId t : g.neighbors(k)) {
            if (!enqueued[static_cast<std::size_t>(t)]) {
                enqueued[static_cast<std::size_t>(t)] = true;
                queue.push(t);
            }
        }
    }
    return result;
}

struct BsBfisResult {
    SamplingState state;
    double threshold_hat = 0.0;
    int iterations = 0; // binary-search loop iterations
    int bfis_calls = 0; // iterations + 1 (final run at threshold_hat)
    std::vector<std::pair<double, std::size_t>> trace; // (T, m) per iteration
    std::size_t sample_count = 0;
    int sub_unit_scale_count = 0;
    NodeId start = 0;
};

// Binary search over the lower-bound threshold: largest T whose BFIS run
// stays within the sample budget, to precision epsilon. The returned state
// comes from a fresh BFIS run at T-hat, not from a cached loop iterate.
inline BsBfisResult bs_bfis(const Graph& g, std::size_t budget, double epsilon, NodeId start,
                            double mu) {
    const NodeId n = g.node_count();
    if (budget < 1 || budget > static_cast<std::size_t>(n))
        throw argument_error("bs_bfis: budget must lie in [1, N]");
    if (!(epsilon > 0.0)) throw argument_error("bs_bfis: epsilon must be positive");

    BsBfisResult out;
    out.start = start;
    double left = 0.0, right = 1.0;
    while (right - left > epsilon) {
        const double mid = 0.5 * (left + right);
        const BfisResult probe = bfis(g, mid, start, mu);
        out.trace.emplace_back(mid, probe.sample_count);
        if (probe.sample_count > budget)
            right = mid;
        else
            left = mid;
        ++out.iterations;
    }
    out.threshold_hat = left;

    BfisResult fin = bfis(g, left, start, mu);
    out.bfis_calls = out.iterations + 1;
    out.sample_count = fin.sample_count;
    out.sub_unit_scale_count = fin.sub_unit_scale_count;
    out.state = std::move(fin.state);
    return out;
}

namespace detail {

inline unsigned resolve_thread_count(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("GDAS_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

} // namespace detail

// Brute-force start-node search: run bs_bfis from every start, keep the
// largest T-hat, break ties toward the lowest index. The per-start runs are
// independent reads of the immutable graph and execute in parallel; the
// winning start is re-run once so the merge stays deterministic.
// Thread count: `threads` if nonzero, else $GDAS_THREADS, else hardware.
inline BsBfisResult best_start_bs_bfis(const Graph& g, std::size_t budget, double epsilon,
                                       double mu, unsigned threads = 0) {
    const NodeId n = g.node_count();
    if (n < 1) throw argument_error("best_start_bs_bfis: empty graph");
    std::vector<double> t_hat(static_cast<std::size_t>(n));

    const unsigned worker_count =
        std::min<unsigned>(detail::resolve_thread_count(threads), static_cast<unsigned>(n));
    if (worker_count <= 1) {
        for (NodeId i = 0; i < n; ++i)
            t_hat[static_cast<std::size_t>(i)] = bs_bfis(g, budget, epsilon, i, mu).threshold_hat;
    } else {
        std::vector<std::thread> workers;
        workers.reserve(worker_count);
        for (unsigned w = 0; w < worker_count; ++w) {
            workers.emplace_back([&, w]() {
                for (NodeId i = static_cast<NodeId>(w); i < n;
                     i += static_cast<NodeId>(worker_count))
                    t_hat[static_cast<std::size_t>(i)] =
                        bs_bfis(g, budget, epsilon, i, mu).threshold_hat;
            });
        }
        for (auto& t : workers) t.join();
    }

    NodeId best = 0;
    for (NodeId i = 1; i < n; ++i)
        if (t_hat[static_cast<std::size_t>(i)] > t_hat[static_cast<std::size_t>(best)]) best = i;
    return bs_bfis(g, budget, epsilon, best, mu);
}

// Uniformly random K-subset baseline, seed-deterministic, all scales 1.
inline SamplingState random_sample(const Graph& g, std::size_t budget, std::uint64_t seed) {
    const NodeId n = g.node_count();
    if (budget < 1 || budget > static_cast<std::size_t>(n))
        throw argument_error("random_sample: budget must lie in [1, N]");
    Rng rng(seed);
    SamplingState state = SamplingState::unsampled(n);
    for (NodeId i : sample_without_replacement(n, budget, rng)) {
        state.sampled[static_cast<std::size_t>(i)] = true;
        state.visited[static_cast<std::size_t>(i)] = true;
    }
    return state;
}

// Optional budget top-up (off by default in the CLI): marks the
// unsampled nodes with the smallest disc left-ends until `budget` is
// reached. Scale factors are left untouched.
inline SamplingState top_up_samples(const Graph& g, const BfisResult& result,
                                    std::size_t budget, double mu) {
    SamplingState state = result.state;
    std::size_t have = result.sample_count;
    if (have >= budget) return state;
    const DiscView view = disc_view(g, state, mu);
    std::vector<NodeId> candidates;
    for (NodeId i = 0; i < g.node_count(); ++i)
        if (!state.sampled[static_cast<std::size_t>(i)]) candidates.push_back(i);
    std::stable_sort(candidates.begin(), candidates.end(), [&](NodeId a, NodeId b) {
        return view.left_end[static_cast<std::size_t>(a)] <
               view.left_end[static_cast<std::size_t>(b)];
    });
    for (NodeId i : candidates) {
        if (have >= budget) break;
        state.sampled[static_cast<std::size_t>(i)] = true;
        state.visited[static_cast<std::size_t>(i)] = true;
        ++have;
    }
    return state;
}

} // namespace gdas
