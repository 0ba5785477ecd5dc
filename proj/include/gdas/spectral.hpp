#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gdas/gershgorin.hpp"
#include "gdas/graph.hpp"
#include "gdas/reconstruct.hpp"
#include "gdas/sampling.hpp"

namespace gdas {

// Eigenvalues below this are reported as numerically singular; the
// unsampled case has an exact zero eigenvalue.
inline constexpr double kSingularEigenvalue = 1e-10;

struct SpectralReport {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double condition_number = 0.0; // +inf when numerically singular
    double gershgorin_min_left = 0.0;
    double gershgorin_max_right = 0.0;
    bool numerically_singular = false;
};

// B = A + mu L, materialized densely. Validation-scale only.
inline Eigen::MatrixXd dense_system_matrix(const Graph& g, const SamplingState& state,
                                           double mu) {
    const NodeId n = g.node_count();
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    const auto& deg = g.degrees();
    for (NodeId i = 0; i < n; ++i) {
        const std::size_t u = static_cast<std::size_t>(i);
        b(i, i) = (state.sampled[u] ? 1.0 : 0.0) + mu * deg[u];
        const auto nbrs = g.neighbors(i);
        const auto wts = g.neighbor_weights(i);
        for (std::size_t k = 0; k < nbrs.size(); ++k) b(i, nbrs[k]) = -mu * wts[k];
    }
    return b;
}

// Ground-truth extremes of B = A + mu L via dense symmetric
// eigendecomposition, plus the Gershgorin envelope of C = S B S^{-1}
// for the state's scale factors.
inline SpectralReport dense_extreme_eigs(const Graph& g, const SamplingState& state, double mu,
                                         NodeId cap = 2000) {
    const NodeId n = g.node_count();
    if (n > cap)
        throw argument_error("dense_extreme_eigs: N=" + std::to_string(n) + " exceeds cap " +
                             std::to_string(cap) +
                             "; use the bound-only mode (disc_view / eigen_upper_bound)");
    if (mu < 0.0) throw argument_error("dense_extreme_eigs: mu must be >= 0");
    for (double s : state.scale)
        if (!(s > 0.0)) throw argument_error("dense_extreme_eigs: non-positive scale factor");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_system_matrix(g, state, mu),
                                                          Eigen::EigenvaluesOnly);
    SpectralReport report;
    report.lambda_min = solver.eigenvalues().minCoeff();
    report.lambda_max = solver.eigenvalues().maxCoeff();
    report.numerically_singular = report.lambda_min <= kSingularEigenvalue;
    report.condition_number = report.numerically_singular
                                  ? std::numeric_limits<double>::infinity()
                                  : report.lambda_max / report.lambda_min;
    const DiscView view = detail::disc_view_unchecked(g, state, mu);
    report.gershgorin_min_left = view.min_left_end();
    report.gershgorin_max_right = view.max_right_end();
    return report;
}

struct SimilarityReport {
    double max_abs_discrepancy = 0.0; // between sorted spectra of B and S B S^{-1}
    double max_imag_part = 0.0;       // sanity: C is similar to symmetric B
};

// Spectra of B and of C = S B S^{-1}, both through the general (real
// Schur) eigensolver so identical matrices yield identical spectra; reports
// the largest discrepancy between the sorted spectra. C is not symmetric
// for non-unit S, which rules out the symmetric solver here.
inline SimilarityReport verify_similarity_invariance(const Graph& g, const SamplingState& state,
                                                     double mu, NodeId cap = 2000) {
    const NodeId n = g.node_count();
    if (n > cap)
        throw argument_error("verify_similarity_invariance: N exceeds dense cap");
    for (double s : state.scale)
        if (!(s > 0.0))
            throw argument_error("verify_similarity_invariance: non-positive scale factor");

    const Eigen::MatrixXd b = dense_system_matrix(g, state, mu);
    Eigen::VectorXd scale(n);
    for (NodeId i = 0; i < n; ++i) scale(i) = state.scale[static_cast<std::size_t>(i)];
    const Eigen::MatrixXd c =
        scale.asDiagonal() * b * scale.cwiseInverse().asDiagonal();

    Eigen::EigenSolver<Eigen::MatrixXd> b_solver(b, false);
    Eigen::EigenSolver<Eigen::MatrixXd> c_solver(c, false);

    std::vector<double> b_eigs(static_cast<std::size_t>(n));
    std::vector<double> c_eigs(static_cast<std::size_t>(n));
    SimilarityReport report;
    for (NodeId i = 0; i < n; ++i) {
        b_eigs[static_cast<std::size_t>(i)] = b_solver.eigenvalues()(i).real();
        c_eigs[static_cast<std::size_t>(i)] = c_solver.eigenvalues()(i).real();
        report.max_imag_part = std::max({report.max_imag_part,
                                         std::abs(b_solver.eigenvalues()(i).imag()),
                                         std::abs(c_solver.eigenvalues()(i).imag())});
    }
    std::sort(b_eigs.begin(), b_eigs.end());
    std::sort(c_eigs.begin(), c_eigs.end());
    for (NodeId i = 0; i < n; ++i)
        report.max_abs_discrepancy =
            std::max(report.max_abs_discrepancy,
                     std::abs(b_eigs[static_cast<std::size_t>(i)] -
                              c_eigs[static_cast<std::size_t>(i)]));
    return report;
}

struct AlignmentReport {
    double threshold = 0.0;
    double min_left_end = 0.0;
    std::size_t below_threshold_count = 0; // left-ends below threshold - 1e-10
    bool sub_unit_scale_occurred = false;  // hypothesis of the guarantee
};

inline AlignmentReport verify_disc_alignment(const Graph& g, const BfisResult& result,
                                             double threshold, double mu) {
    const DiscView view = disc_view(g, result.state, mu);
    AlignmentReport report;
    report.threshold = threshold;
    report.min_left_end = view.min_left_end();
    for (double le : view.left_end)
        if (le < threshold - 1e-10) ++report.below_threshold_count;
    report.sub_unit_scale_occurred = result.sub_unit_scale_count > 0;
    return report;
}

enum class StartPolicy { BruteForce, Fixed, Random };

struct StartRule {
    StartPolicy policy = StartPolicy::BruteForce;
    NodeId fixed_index = 0;

    std::string describe() const {
        switch (policy) {
            case StartPolicy::BruteForce: return "brute-force";
            case StartPolicy::Fixed: return "index:" + std::to_string(fixed_index);
            case StartPolicy::Random: return "random";
        }
        return "?";
    }
};

struct SweepConfig {
    std::vector<std::size_t> budgets;
    int trials = 100; // random-sampling baseline repetitions
    double sigma = 1.0;
    double epsilon = 1e-4;
    double mu = 0.01;
    std::uint64_t seed = 0;
    StartRule start;
    NodeId dense_cap = 2000;
    unsigned threads = 0;
};

struct SweepRow {
    std::size_t budget = 0;
    double threshold_hat = 0.0;
    double lambda_min_bfis = 0.0;
    double lambda_min_random_mean = 0.0;
    double mse_bfis = 0.0;
    double mse_random_mean = 0.0;
    int trial_count = 0;
};

namespace detail {

inline BsBfisResult run_with_start(const Graph& g, std::size_t budget, const SweepConfig& cfg) {
    switch (cfg.start.policy) {
        case StartPolicy::BruteForce:
            return best_start_bs_bfis(g, budget, cfg.epsilon, cfg.mu, cfg.threads);
        case StartPolicy::Fixed:
            return bs_bfis(g, budget, cfg.epsilon, cfg.start.fixed_index, cfg.mu);
        case StartPolicy::Random: {
            Rng rng(derive_seed(cfg.seed, 0x5742, budget));
            const NodeId start = static_cast<NodeId>(
                rng.below(static_cast<std::uint64_t>(g.node_count())));
            return bs_bfis(g, budget, cfg.epsilon, start, cfg.mu);
        }
    }
    throw argument_error("run_with_start: unknown start policy");
}

} // namespace detail

// Budget sweep behind the lower-bound / MSE benchmark: for each budget,
// the BS-BFIS set (T-hat, dense lambda_min, reconstruction MSE averaged
// over the noise draws) against `trials` random sample sets (mean dense
// lambda_min, mean reconstruction MSE). Every trial seed derives from
// (seed, budget, trial), so the whole table is reproducible.
inline std::vector<SweepRow> budget_sweep(const Graph& g, std::span<const double> x_true,
                                          const SweepConfig& cfg) {
    if (x_true.size() != static_cast<std::size_t>(g.node_count()))
        throw argument_error("budget_sweep: signal length does not match graph");
    if (cfg.trials < 1) throw argument_error("budget_sweep: trials must be >= 1");

    std::vector<SweepRow> rows;
    rows.reserve(cfg.budgets.size());
    for (std::size_t bi = 0; bi < cfg.budgets.size(); ++bi) {
        const std::size_t budget = cfg.budgets[bi];
        SweepRow row;
        row.budget = budget;
        row.trial_count = cfg.trials;

        const BsBfisResult bfis_run = detail::run_with_start(g, budget, cfg);
        row.threshold_hat = bfis_run.threshold_hat;
        row.lambda_min_bfis =
            dense_extreme_eigs(g, bfis_run.state, cfg.mu, cfg.dense_cap).lambda_min;

        const std::vector<NodeId> bfis_set = bfis_run.state.sampled_nodes();
        SolveOptions solve_opts;
        solve_opts.mu = cfg.mu;

        double bfis_mse_acc = 0.0;
        double rand_mse_acc = 0.0;
        double rand_lambda_acc = 0.0;
        for (int trial = 0; trial < cfg.trials; ++trial) {
            const std::uint64_t noise_seed =
                derive_seed(cfg.seed, budget, static_cast<std::uint64_t>(trial), 1);
            const std::uint64_t set_seed =
                derive_seed(cfg.seed, budget, static_cast<std::uint64_t>(trial), 2);

            if (!bfis_set.empty()) {
                const Observation obs = observe(x_true, bfis_set, cfg.sigma, noise_seed);
                bfis_mse_acc += mse(glr_solve(g, obs, solve_opts).values, x_true);
            }

            const SamplingState random_state = random_sample(g, budget, set_seed);
            rand_lambda_acc +=
                dense_extreme_eigs(g, random_state, cfg.mu, cfg.dense_cap).lambda_min;
            const Observation obs =
                observe(x_true, random_state.sampled_nodes(), cfg.sigma, noise_seed);
            rand_mse_acc += mse(glr_solve(g, obs, solve_opts).values, x_true);
        }
        row.mse_bfis = bfis_set.empty() ? std::numeric_limits<double>::quiet_NaN()
                                        : bfis_mse_acc / cfg.trials;
        row.mse_random_mean = rand_mse_acc / cfg.trials;
        row.lambda_min_random_mean = rand_lambda_acc / cfg.trials;
        rows.push_back(row);
    }
    return rows;
}

} // namespace gdas
