// Command-line front end: graph ingestion/generation, disc-alignment
// sampling, GLR reconstruction, budget sweeps, and an invariant verifier.
//
// Exit codes: 0 success, 1 validation failure, 2 convergence failure, 3 I/O.

#include <CLI11.hpp>
#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gdas/datasets.hpp"
#include "gdas/io.hpp"
#include "gdas/reconstruct.hpp"
#include "gdas/sampling.hpp"
#include "gdas/spectral.hpp"

namespace {

using namespace gdas;

StartRule parse_start(const std::string& text) {
    StartRule rule;
    if (text == "brute-force") {
        rule.policy = StartPolicy::BruteForce;
    } else if (text == "random") {
        rule.policy = StartPolicy::Random;
    } else if (text.rfind("index:", 0) == 0) {
        rule.policy = StartPolicy::Fixed;
        try {
            rule.fixed_index = static_cast<NodeId>(std::stol(text.substr(6)));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--start", "bad index in '" + text + "'");
        }
    } else {
        throw CLI::ValidationError("--start",
                                   "expected brute-force, index:<n> or random, got '" + text +
                                       "'");
    }
    return rule;
}

std::vector<std::size_t> parse_budget_list(const std::string& text) {
    std::vector<std::size_t> budgets;
    std::string cur;
    for (char c : text + ",") {
        if (c == ',') {
            if (cur.empty()) continue;
            budgets.push_back(static_cast<std::size_t>(std::stoul(cur)));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (budgets.empty()) throw CLI::ValidationError("--k", "empty budget list");
    return budgets;
}

GraphBundle load_validated_bundle(const std::string& dir) {
    GraphBundle bundle = load_bundle(dir);
    require_valid(bundle.graph);
    return bundle;
}

BsBfisResult run_sampler(const Graph& g, std::size_t budget, double epsilon, double mu,
                         const StartRule& rule, std::uint64_t seed) {
    switch (rule.policy) {
        case StartPolicy::BruteForce:
            return best_start_bs_bfis(g, budget, epsilon, mu);
        case StartPolicy::Fixed:
            return bs_bfis(g, budget, epsilon, rule.fixed_index, mu);
        case StartPolicy::Random: {
            Rng rng(derive_seed(seed, 0x5742));
            const NodeId start =
                static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(g.node_count())));
            return bs_bfis(g, budget, epsilon, start, mu);
        }
    }
    throw argument_error("unknown start policy");
}

int cmd_build(const std::string& gen, NodeId n, std::uint64_t seed,
              const std::string& in_nodes, const std::string& in_edges, double sigma_l,
              double sigma_x, const std::string& out_dir) {
    GraphBundle bundle;
    bundle.meta["format"] = "gdas-bundle-v1";
    if (!gen.empty()) {
        if (gen == "line") {
            bundle.nodes = line_graph_nodes(n);
            bundle.graph = gen_line_graph(n);
            bundle.meta["generator"] = {{"kind", "line"}, {"n", n}};
        } else if (gen == "climate") {
            ClimateLikeDataset ds = gen_climate_like(n, seed, {sigma_l, sigma_x});
            bundle.nodes = std::move(ds.nodes);
            bundle.graph = std::move(ds.graph);
            bundle.meta["generator"] = {{"kind", "climate"},
                                        {"n", n},
                                        {"seed", seed},
                                        {"sigma_l", sigma_l},
                                        {"sigma_x", sigma_x},
                                        {"delaunay_ties", ds.delaunay_ties}};
        } else {
            throw argument_error("--gen must be 'line' or 'climate', got '" + gen + "'");
        }
    } else if (!in_nodes.empty()) {
        bundle.nodes = load_nodes_csv(in_nodes);
        if (!in_edges.empty()) {
            bundle.graph = load_edges_csv(in_edges, bundle.nodes);
            bundle.meta["generator"] = {{"kind", "csv"}};
        } else {
            // Nodes only: Delaunay edges + bilateral weights.
            std::vector<Point2> pts;
            pts.reserve(bundle.nodes.size());
            for (const NodeRecord& r : bundle.nodes) pts.push_back({r.loc_x, r.loc_y});
            const DelaunayResult tri = delaunay_edges(pts);
            bundle.graph = bilateral_weights(bundle.nodes, tri.edges, {sigma_l, sigma_x});
            bundle.meta["generator"] = {{"kind", "csv+delaunay"},
                                        {"sigma_l", sigma_l},
                                        {"sigma_x", sigma_x},
                                        {"delaunay_ties", tri.cocircular_ties}};
        }
    } else {
        throw argument_error("build: pass --gen or --in-nodes");
    }

    const ValidationReport report = validate(bundle.graph);
    if (!report.valid()) throw validation_error(report.to_string());
    bundle.meta["nodes"] = bundle.graph.node_count();
    bundle.meta["edges"] = bundle.graph.edge_count();
    save_bundle(out_dir, bundle);
    std::cout << "wrote bundle to " << out_dir << " (" << bundle.graph.node_count()
              << " nodes, " << bundle.graph.edge_count() << " edges)\n";
    return 0;
}

int cmd_sample(const std::string& in_dir, std::size_t budget, double mu, double epsilon,
               const StartRule& rule, const std::string& method, std::uint64_t seed,
               bool top_up, const std::string& out_dir) {
    const GraphBundle bundle = load_validated_bundle(in_dir);
    nlohmann::json meta{{"method", method}, {"k", budget},     {"mu", mu},
                        {"epsilon", epsilon}, {"seed", seed},  {"start", rule.describe()},
                        {"top_up", top_up}};

    SamplingState state;
    if (method == "random") {
        state = random_sample(bundle.graph, budget, seed);
        meta["m"] = state.sample_count();
        std::cout << "random sample: m=" << state.sample_count() << "\n";
    } else if (method == "gda") {
        BsBfisResult result = run_sampler(bundle.graph, budget, epsilon, mu, rule, seed);
        meta["T_hat"] = result.threshold_hat;
        meta["m"] = result.sample_count;
        meta["iterations"] = result.iterations;
        meta["bfis_calls"] = result.bfis_calls;
        meta["start_node"] = result.start;
        meta["sub_unit_scale_count"] = result.sub_unit_scale_count;
        state = std::move(result.state);
        if (top_up && state.sample_count() < budget) {
            BfisResult as_bfis;
            as_bfis.state = std::move(state);
            as_bfis.sample_count = as_bfis.state.sample_count();
            state = top_up_samples(bundle.graph, as_bfis, budget, mu);
            meta["m_after_top_up"] = state.sample_count();
        }
        std::cout << "T_hat=" << meta["T_hat"].get<double>() << " m=" << state.sample_count()
                  << " start=" << meta["start_node"].get<NodeId>() << "\n";
    } else {
        throw argument_error("--method must be 'gda' or 'random', got '" + method + "'");
    }

    std::filesystem::create_directories(out_dir);
    write_samples_csv(std::filesystem::path(out_dir) / "samples.csv", bundle.nodes, state);
    write_file_atomic(std::filesystem::path(out_dir) / "sample_meta.json",
                      meta.dump(2) + "\n");
    return 0;
}

int cmd_reconstruct(const std::string& in_dir, const std::string& samples_path, double mu,
                    double sigma, std::uint64_t seed, double tol, int max_iter, bool jacobi,
                    const std::string& out_dir) {
    const GraphBundle bundle = load_validated_bundle(in_dir);
    const SamplingState state = load_samples_csv(samples_path, bundle.nodes);
    const GraphSignal truth = bundle.signal();

    const Observation obs = observe(truth, state.sampled_nodes(), sigma, seed);
    SolveOptions opts;
    opts.mu = mu;
    opts.tol = tol;
    opts.max_iter = max_iter;
    opts.jacobi = jacobi;
    const GlrSolution sol = glr_solve(bundle.graph, obs, opts);
    const double err = mse(sol.values, truth);

    std::filesystem::create_directories(out_dir);
    write_signal_csv(std::filesystem::path(out_dir) / "xhat.csv", bundle.nodes, sol.values);
    nlohmann::json meta{{"mse", err},
                        {"residual", sol.residual},
                        {"iterations", sol.iterations},
                        {"k", obs.sample_set.size()},
                        {"mu", mu},
                        {"tol", tol},
                        {"sigma", sigma},
                        {"seed", seed},
                        {"jacobi", jacobi}};
    write_file_atomic(std::filesystem::path(out_dir) / "reconstruct_meta.json",
                      meta.dump(2) + "\n");
    std::cout << "mse=" << err << " iterations=" << sol.iterations
              << " residual=" << sol.residual << "\n";
    return 0;
}

int cmd_sweep(const std::string& in_dir, const std::string& budgets, int trials, double sigma,
              double epsilon, double mu, std::uint64_t seed, const StartRule& rule,
              const std::string& out_path) {
    const GraphBundle bundle = load_validated_bundle(in_dir);
    SweepConfig cfg;
    cfg.budgets = parse_budget_list(budgets);
    cfg.trials = trials;
    cfg.sigma = sigma;
    cfg.epsilon = epsilon;
    cfg.mu = mu;
    cfg.seed = seed;
    cfg.start = rule;
    const std::vector<SweepRow> rows = budget_sweep(bundle.graph, bundle.signal(), cfg);
    write_sweep_csv(out_path, rows, cfg);
    std::cout << "wrote " << rows.size() << " sweep rows to " << out_path << "\n";
    return 0;
}

struct CheckPrinter {
    bool all_ok = true;

    void operator()(const std::string& name, bool ok, const std::string& detail = "") {
        std::cout << (ok ? "ok   " : "FAIL ") << name;
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << "\n";
        if (!ok) all_ok = false;
    }
};

int cmd_verify(const std::string& in_dir, const std::string& budgets_text, double mu,
               double epsilon, std::uint64_t seed, const StartRule& rule) {
    const GraphBundle bundle = load_bundle(in_dir);
    CheckPrinter check;

    const ValidationReport report = validate(bundle.graph);
    check("graph validation", report.valid(), report.valid() ? "" : report.to_string());
    if (!report.valid()) return 1;

    const Graph& g = bundle.graph;
    const NodeId n = g.node_count();
    std::vector<std::size_t> budgets;
    if (!budgets_text.empty()) {
        budgets = parse_budget_list(budgets_text);
    } else {
        for (std::size_t k : {static_cast<std::size_t>(n) / 10, static_cast<std::size_t>(n) / 4,
                              static_cast<std::size_t>(n) / 2})
            if (k >= 1) budgets.push_back(k);
        if (budgets.empty()) budgets.push_back(1);
    }

    const bool dense_ok = n <= 2000;
    if (!dense_ok)
        std::cout << "note: N=" << n << " exceeds the dense-oracle cap; spectral checks "
                  << "run in bound-only mode\n";

    for (std::size_t budget : budgets) {
        const std::string tag = " [K=" + std::to_string(budget) + "]";
        const BsBfisResult run = run_sampler(g, budget, epsilon, mu, rule, seed);
        BfisResult final_run;
        final_run.state = run.state;
        final_run.sample_count = run.sample_count;
        final_run.sub_unit_scale_count = run.sub_unit_scale_count;

        check("budget respected" + tag, run.sample_count <= budget,
              "m=" + std::to_string(run.sample_count));

        const AlignmentReport align =
            verify_disc_alignment(g, final_run, run.threshold_hat, mu);
        if (align.sub_unit_scale_occurred)
            std::cout << "note: sub-unit post-sampling scale occurred" << tag
                      << "; the alignment guarantee does not apply\n";
        else
            check("disc alignment" + tag, align.below_threshold_count == 0,
                  "min left-end " + std::to_string(align.min_left_end) + " vs T_hat " +
                      std::to_string(run.threshold_hat));

        if (!dense_ok) continue;
        const SpectralReport spectral = dense_extreme_eigs(g, run.state, mu);
        check("gershgorin sandwich" + tag,
              spectral.gershgorin_min_left <= spectral.lambda_min + 1e-8 &&
                  spectral.lambda_max <= spectral.gershgorin_max_right + 1e-8);
        check("upper bound 1+2*mu*d_max" + tag,
              spectral.lambda_max <= eigen_upper_bound(g, mu) + 1e-8);
        if (!align.sub_unit_scale_occurred)
            check("lambda_min >= T_hat - 1e-6" + tag,
                  spectral.lambda_min >= run.threshold_hat - 1e-6,
                  "lambda_min=" + std::to_string(spectral.lambda_min));
        const SimilarityReport sim = verify_similarity_invariance(g, run.state, mu);
        check("similarity invariance" + tag, sim.max_abs_discrepancy <= 1e-8,
              "max discrepancy " + std::to_string(sim.max_abs_discrepancy));
    }

    if (dense_ok) {
        // Solver cross-check: CG against a dense direct solve on one
        // seeded random sample set.
        const std::size_t budget = std::max<std::size_t>(1, static_cast<std::size_t>(n) / 5);
        const SamplingState state = random_sample(g, budget, derive_seed(seed, 0x90ac1e));
        const GraphSignal truth = bundle.signal();
        const Observation obs =
            observe(truth, state.sampled_nodes(), 1.0, derive_seed(seed, 0x01b5));
        SolveOptions opts;
        opts.mu = mu;
        const GlrSolution sol = glr_solve(g, obs, opts);

        Eigen::MatrixXd system = dense_system_matrix(g, state, mu);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
        for (std::size_t k = 0; k < obs.sample_set.size(); ++k)
            rhs(obs.sample_set[k]) = obs.values[k];
        const Eigen::VectorXd direct = system.ldlt().solve(rhs);
        double max_err = 0.0;
        for (NodeId i = 0; i < n; ++i)
            max_err = std::max(max_err, std::abs(direct(i) - sol.values[static_cast<std::size_t>(i)]));
        check("glr solver vs dense direct solve", max_err <= 1e-6,
              "max-norm error " + std::to_string(max_err));
    }

    std::cout << (check.all_ok ? "verify: all checks passed\n" : "verify: FAILURES above\n");
    return check.all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gershgorin disc alignment sampling and GLR reconstruction"};
    app.require_subcommand(1);

    std::string gen, in_nodes, in_edges, in_dir, out_path, samples_path;
    std::string start_text = "brute-force";
    std::string method = "gda";
    std::string budget_list;
    NodeId n = 0;
    std::size_t budget = 1;
    double mu = 0.01, epsilon = 1e-4, sigma = 0.0, tol = 1e-8;
    double sigma_l = 5.0, sigma_x = 3.0;
    std::uint64_t seed = 0;
    int trials = 100, max_iter = 0;
    bool top_up = false, jacobi = false;

    CLI::App* build = app.add_subcommand("build", "ingest or generate a graph bundle");
    build->add_option("--gen", gen, "generator: line or climate");
    build->add_option("--n", n, "node count for --gen");
    build->add_option("--seed", seed, "generator seed");
    build->add_option("--in-nodes", in_nodes, "node CSV (id,loc_x,loc_y,value)");
    build->add_option("--in-edges", in_edges, "edge CSV (src,dst,weight); omit for Delaunay");
    build->add_option("--sigma-l", sigma_l, "bilateral location kernel width");
    build->add_option("--sigma-x", sigma_x, "bilateral value kernel width");
    build->add_option("--out", out_path, "output bundle directory")->required();

    CLI::App* sample = app.add_subcommand("sample", "select a sample set");
    sample->add_option("--in", in_dir, "input bundle directory")->required();
    sample->add_option("--k", budget, "sample budget")->required();
    sample->add_option("--mu", mu, "tradeoff parameter");
    sample->add_option("--epsilon", epsilon, "binary-search precision");
    sample->add_option("--start", start_text, "brute-force | index:<n> | random");
    sample->add_option("--method", method, "gda | random");
    sample->add_option("--seed", seed, "seed for random start/method");
    sample->add_flag("--top-up", top_up, "pad to K samples by smallest left-ends");
    sample->add_option("--out", out_path, "output directory")->required();

    CLI::App* reconstruct =
        app.add_subcommand("reconstruct", "simulate observation and solve the GLR system");
    reconstruct->add_option("--in", in_dir, "input bundle directory")->required();
    reconstruct->add_option("--samples", samples_path, "samples.csv from `sample`")->required();
    reconstruct->add_option("--mu", mu, "tradeoff parameter");
    reconstruct->add_option("--sigma", sigma, "observation noise stddev");
    reconstruct->add_option("--seed", seed, "noise seed");
    reconstruct->add_option("--tol", tol, "CG relative residual tolerance");
    reconstruct->add_option("--max-iter", max_iter, "CG iteration cap (0 = 10N)");
    reconstruct->add_flag("--jacobi", jacobi, "diagonal preconditioner");
    reconstruct->add_option("--out", out_path, "output directory")->required();

    CLI::App* sweep = app.add_subcommand("sweep", "budget sweep table (lower bounds + MSE)");
    sweep->add_option("--in", in_dir, "input bundle directory")->required();
    sweep->add_option("--k", budget_list, "comma-separated budgets")->required();
    sweep->add_option("--trials", trials, "random-baseline trials per budget");
    sweep->add_option("--sigma", sigma, "observation noise stddev");
    sweep->add_option("--epsilon", epsilon, "binary-search precision");
    sweep->add_option("--mu", mu, "tradeoff parameter");
    sweep->add_option("--seed", seed, "sweep seed");
    sweep->add_option("--start", start_text, "brute-force | index:<n> | random");
    sweep->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* verify = app.add_subcommand("verify", "run the invariant suite on a bundle");
    verify->add_option("--in", in_dir, "input bundle directory")->required();
    verify->add_option("--k", budget_list, "comma-separated budgets (default: N/10,N/4,N/2)");
    verify->add_option("--mu", mu, "tradeoff parameter");
    verify->add_option("--epsilon", epsilon, "binary-search precision");
    verify->add_option("--seed", seed, "seed for seeded checks");
    verify->add_option("--start", start_text, "brute-force | index:<n> | random");

    CLI11_PARSE(app, argc, argv);

    try {
        const StartRule rule = parse_start(start_text);
        if (build->parsed())
            return cmd_build(gen, n, seed, in_nodes, in_edges, sigma_l, sigma_x, out_path);
        if (sample->parsed())
            return cmd_sample(in_dir, budget, mu, epsilon, rule, method, seed, top_up, out_path);
        if (reconstruct->parsed())
            return cmd_reconstruct(in_dir, samples_path, mu, sigma, seed, tol, max_iter, jacobi,
                                   out_path);
        if (sweep->parsed())
            return cmd_sweep(in_dir, budget_list, trials, sigma, epsilon, mu, seed, rule,
                             out_path);
        if (verify->parsed())
            return cmd_verify(in_dir, budget_list, mu, epsilon, seed, rule);
    } catch (const convergence_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const gdas::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
