#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gdas/graph.hpp"
#include "gdas/rng.hpp"

namespace gdas {

using GraphSignal = std::vector<double>;

// Sparse observation y = H x + n: the signal restricted to the sample set,
// plus i.i.d. Gaussian noise with the given standard deviation.
struct Observation {
    std::vector<NodeId> sample_set; // distinct, ascending
    std::vector<double> values;     // one per sampled node
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
};

inline Observation observe(std::span<const double> x, std::span<const NodeId> sample_set,
                           double noise_sigma, std::uint64_t seed) {
    if (noise_sigma < 0.0) throw argument_error("observe: noise sigma must be >= 0");
    std::vector<bool> taken(x.size(), false);
    Observation obs;
    obs.sample_set.assign(sample_set.begin(), sample_set.end());
    obs.noise_sigma = noise_sigma;
    obs.seed = seed;
    obs.values.reserve(sample_set.size());
    Rng rng(seed);
    for (NodeId i : sample_set) {
        if (i < 0 || static_cast<std::size_t>(i) >= x.size())
            throw argument_error("observe: sample index " + std::to_string(i) +
                                 " out of range");
        if (taken[static_cast<std::size_t>(i)])
            throw argument_error("observe: duplicate sample index " + std::to_string(i));
        taken[static_cast<std::size_t>(i)] = true;
        const double noise = noise_sigma > 0.0 ? noise_sigma * rng.gaussian() : 0.0;
        obs.values.push_back(x[static_cast<std::size_t>(i)] + noise);
    }
    return obs;
}

struct SolveOptions {
    double mu = 0.01;
    double tol = 1e-8; // relative residual against ||H'y||
    int max_iter = 0;  // 0 -> 10 N
    bool jacobi = false;
};

struct GlrSolution {
    GraphSignal values;
    int iterations = 0;
    double residual = 0.0; // recomputed from scratch after the last iterate
};

// Solve (H'H + mu L) x = H'y by conjugate gradients using only
// matrix-free products: H'H is the diagonal indicator of the sample set
// and L is applied through the neighbor lists. The reported residual is
// recomputed from the final iterate, never taken from the CG recurrence.
inline GlrSolution glr_solve(const Graph& g, const Observation& obs,
                             const SolveOptions& opts = {}) {
    const std::size_t n = static_cast<std::size_t>(g.node_count());
    if (obs.sample_set.empty())
        throw singular_system_error(
            "glr_solve: empty sample set; H'H + mu L is singular (both terms "
            "annihilate the constant vector)");
    if (!(opts.mu > 0.0)) throw argument_error("glr_solve: mu must be positive");
    if (!(opts.tol > 0.0)) throw argument_error("glr_solve: tol must be positive");
    const int max_iter = opts.max_iter > 0 ? opts.max_iter : 10 * static_cast<int>(n);

    std::vector<bool> indicator(n, false);
    std::vector<double> rhs(n, 0.0); // H'y, zero off the sample set
    for (std::size_t k = 0; k < obs.sample_set.size(); ++k) {
        const std::size_t i = static_cast<std::size_t>(obs.sample_set[k]);
        if (i >= n) throw argument_error("glr_solve: sample index out of range");
        if (indicator[i]) throw argument_error("glr_solve: duplicate sample index");
        indicator[i] = true;
        rhs[i] = obs.values[k];
    }

    const auto& deg = g.degrees();
    auto apply_system = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto nbrs = g.neighbors(static_cast<NodeId>(i));
            const auto wts = g.neighbor_weights(static_cast<NodeId>(i));
            double acc = (indicator[i] ? x[i] : 0.0) + opts.mu * deg[i] * x[i];
            for (std::size_t k = 0; k < nbrs.size(); ++k)
                acc -= opts.mu * wts[k] * x[static_cast<std::size_t>(nbrs[k])];
            y[i] = acc;
        }
    };

    auto dot = [n](const std::vector<double>& a, const std::vector<double>& b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
        return acc;
    };

    const double rhs_norm = std::sqrt(dot(rhs, rhs));
    // Relative residual when the right-hand side is nonzero, absolute otherwise.
    const double target = opts.tol * (rhs_norm > 0.0 ? rhs_norm : 1.0);

    std::vector<double> x(n, 0.0), r = rhs, z(n), p(n), q(n);
    std::vector<double> inv_diag;
    if (opts.jacobi) {
        inv_diag.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            inv_diag[i] = 1.0 / ((indicator[i] ? 1.0 : 0.0) + opts.mu * deg[i]);
    }

    auto precondition = [&](const std::vector<double>& in, std::vector<double>& out) {
        if (opts.jacobi)
            for (std::size_t i = 0; i < n; ++i) out[i] = inv_diag[i] * in[i];
        else
            out = in;
    };

    int iterations = 0;
    double true_residual = std::sqrt(dot(r, r));
    while (true_residual > target) {
        // (P)CG inner loop on the recurrence residual.
        precondition(r, z);
        p = z;
        double rho = dot(r, z);
        while (iterations < max_iter) {
            apply_system(p, q);
            const double alpha = rho / dot(p, q);
            for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
            for (std::size_t i = 0; i < n; ++i) r[i] -= alpha * q[i];
            ++iterations;
            if (std::sqrt(dot(r, r)) <= target) break;
            precondition(r, z);
            const double rho_next = dot(r, z);
            const double beta = rho_next / rho;
            rho = rho_next;
            for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        }
        // Recompute the residual from scratch; resume if rounding drifted.
        apply_system(x, q);
        for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - q[i];
        true_residual = std::sqrt(dot(r, r));
        if (true_residual > target && iterations >= max_iter) {
            const double rel = rhs_norm > 0.0 ? true_residual / rhs_norm : true_residual;
            throw convergence_error("glr_solve: no convergence within " +
                                        std::to_string(max_iter) +
                                        " iterations (residual " + std::to_string(rel) + ")",
                                    rel, iterations);
        }
    }

    GlrSolution sol;
    sol.values = std::move(x);
    sol.iterations = iterations;
    sol.residual = rhs_norm > 0.0 ? true_residual / rhs_norm : true_residual;
    return sol;
}

inline double mse(std::span<const double> estimate, std::span<const double> truth) {
    if (estimate.size() != truth.size())
        throw argument_error("mse: length mismatch (" + std::to_string(estimate.size()) +
                             " vs " + std::to_string(truth.size()) + ")");
    double acc = 0.0;
    for (std::size_t i = 0; i < estimate.size(); ++i) {
        const double d = estimate[i] - truth[i];
        acc += d * d;
    }
    return acc / static_cast<double>(estimate.size());
}

} // namespace gdas
