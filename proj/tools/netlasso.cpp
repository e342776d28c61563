#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "netlasso/bench.hpp"
#include "netlasso/certify.hpp"
#include "netlasso/io.hpp"
#include "netlasso/solve.hpp"
#include "netlasso/spectral.hpp"

namespace {

using nlohmann::json;

int run_spectral(const std::string& graph_file, const std::string& signal_file,
                 const std::string& out_file) {
    const auto g = netlasso::io::load_graph(graph_file);
    const auto x = netlasso::io::load_signal(signal_file);
    const auto basis = netlasso::gft_basis(g);
    const auto coeffs = netlasso::gft(basis, x);

    std::ostringstream csv;
    csv.precision(12);
    csv << "l,eigenvalue,coefficient\n";
    for (int l = 0; l < basis.size(); ++l) {
        csv << (l + 1) << "," << basis.eigenvalues[l] << ","
            << coeffs[static_cast<std::size_t>(l)] << "\n";
    }
    netlasso::io::atomic_write(out_file, csv.str());
    std::cout << "wrote " << out_file << " (" << basis.size() << " coefficients)\n";
    return 0;
}

json flow_to_json(const netlasso::DataGraph& g, const netlasso::FlowAssignment& flow) {
    json h = json::array();
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto& edge = g.edge(e);
        const double f = flow.forward[static_cast<std::size_t>(e)];
        const double b = flow.backward[static_cast<std::size_t>(e)];
        if (f != 0.0 || b != 0.0) h.push_back({edge.i + 1, edge.j + 1, f, b});
    }
    json d = json::array();
    for (std::size_t v = 0; v < flow.demand.size(); ++v) {
        if (flow.demand[v] != 0.0) d.push_back({static_cast<int>(v) + 1, flow.demand[v]});
    }
    return {{"h", h}, {"demand", d}};
}

int run_certify(const std::string& graph_file, const std::string& partition_file,
                const std::string& samples_file, std::optional<double> K, double L,
                bool find_k, bool witnesses, const std::string& out_file) {
    const auto g = netlasso::io::load_graph(graph_file);
    const auto p = netlasso::io::load_partition(partition_file);
    const auto samples = netlasso::io::load_sampling_set(samples_file);

    json out;
    out["L"] = L;
    out["boundary_size"] = static_cast<int>(netlasso::boundary_edges(g, p).size());

    double k_value = 0.0;
    if (find_k) {
        k_value = netlasso::min_feasible_K(g, p, samples, L);
        out["K"] = k_value;
        if (!std::isfinite(k_value)) {
            out["verdict"] = "not_resolved";
            out["K"] = nullptr;
        }
    } else {
        if (!K) throw CLI::ValidationError("--K is required unless --find-k is given");
        k_value = *K;
        out["K"] = k_value;
    }

    if (std::isfinite(k_value) && k_value > 0.0) {
        const auto cert = netlasso::resolves(g, p, samples, k_value, L, witnesses);
        out["verdict"] = cert.resolved ? "resolved" : "not_resolved";
        if (cert.failing_pattern) {
            out["failing_pattern"] = *cert.failing_pattern;
        }
        if (witnesses && cert.resolved) {
            json flows = json::array();
            for (const auto& flow : cert.witnesses) flows.push_back(flow_to_json(g, flow));
            out["witness_flows"] = flows;
        }
    }

    const std::string text = out.dump(2) + "\n";
    if (out_file.empty()) {
        std::cout << text;
    } else {
        netlasso::io::atomic_write(out_file, text);
        std::cout << "wrote " << out_file << "\n";
    }
    return 0;
}

int run_solve(const std::string& graph_file, const std::string& observation_file,
              double lambda, double rho, int iters, double tol, bool oracle,
              const std::string& estimate_file, const std::string& trace_file) {
    const auto g = netlasso::io::load_graph(graph_file);
    const auto obs = netlasso::io::load_observation(observation_file);

    if (oracle) {
        const auto solution = netlasso::lp_oracle(g, obs, lambda);
        std::ostringstream estimate;
        netlasso::io::save_signal(solution.estimate, estimate);
        netlasso::io::atomic_write(estimate_file, estimate.str());
        std::ostringstream csv;
        csv.precision(12);
        csv << "iteration,objective\n1," << solution.value << "\n";
        netlasso::io::atomic_write(trace_file, csv.str());
        std::cout << "optimum " << solution.value << "\n";
        return 0;
    }

    netlasso::SolverConfig cfg;
    cfg.lambda = lambda;
    cfg.rho = rho;
    cfg.max_iterations = iters;
    cfg.primal_tol = tol;
    cfg.dual_tol = tol;
    const auto report = netlasso::nlasso_admm(g, obs, cfg);

    std::ostringstream estimate;
    netlasso::io::save_signal(report.estimate, estimate);
    netlasso::io::atomic_write(estimate_file, estimate.str());

    std::ostringstream csv;
    csv.precision(12);
    csv << "iteration,objective\n";
    for (std::size_t k = 0; k < report.objective_trace.size(); ++k) {
        csv << (k + 1) << "," << report.objective_trace[k] << "\n";
    }
    netlasso::io::atomic_write(trace_file, csv.str());

    std::cout << "iterations " << report.iterations_run << ", objective "
              << report.objective_trace.back()
              << (report.converged ? " (converged)" : "") << "\n";
    return 0;
}

int run_experiment_cmd(const std::string& spec_file, const std::string& preset,
                       const std::string& out_dir, std::optional<std::uint64_t> seed,
                       bool full_scale) {
    netlasso::ExperimentSpec spec;
    if (!spec_file.empty()) {
        std::ifstream in(spec_file);
        if (!in) throw CLI::ValidationError("cannot open " + spec_file);
        spec = netlasso::load_experiment_spec(in);
    } else if (preset == "chain-noiseless") {
        spec = netlasso::chain_noiseless_preset(full_scale);
    } else if (preset == "chain-noisy") {
        spec = netlasso::chain_noisy_preset(full_scale);
    } else if (preset == "lfr-like") {
        spec = netlasso::lfr_like_preset(full_scale);
    } else {
        throw CLI::ValidationError("unknown preset: " + preset);
    }
    if (seed) spec.seed = *seed;

    const auto result = netlasso::run_experiment(spec);
    netlasso::write_result(result, out_dir);

    std::cout << "experiment " << spec.name << " (seed " << spec.seed << ")\n";
    std::cout << "  certificate K=" << result.certificate_K << " L=" << result.certificate_L
              << " via " << result.certificate_method << ", lambda=" << result.lambda_used
              << "\n";
    for (const auto& run : result.runs) {
        std::cout << "  " << run.method << "/" << run.sampler << ": final NMSE "
                  << run.final_nmse << "\n";
    }
    std::cout << "wrote " << out_dir << "/result.json\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recovery of clustered graph signals from few noisy samples"};
    app.require_subcommand(1);

    // spectral
    std::string graph_file, signal_file, out_file;
    auto* spectral = app.add_subcommand(
        "spectral", "Graph Fourier coefficients of a signal (CSV l,eigenvalue,coefficient)");
    spectral->add_option("--graph", graph_file, "graph JSON")->required();
    spectral->add_option("--signal", signal_file, "signal JSON")->required();
    spectral->add_option("--out", out_file, "output CSV")->required();

    // certify
    std::string cert_graph, cert_partition, cert_samples, cert_out;
    double cert_L = 2.0;
    std::optional<double> cert_K;
    bool find_k = false, witnesses = false;
    auto* certify = app.add_subcommand(
        "certify", "Check whether a sampling set resolves a partition");
    certify->add_option("--graph", cert_graph, "graph JSON")->required();
    certify->add_option("--partition", cert_partition, "partition JSON")->required();
    certify->add_option("--samples", cert_samples, "sampling set JSON")->required();
    certify->add_option("--K", cert_K, "demand bound K");
    certify->add_option("--L", cert_L, "boundary multiplier L")->required();
    certify->add_flag("--find-k", find_k, "binary-search the smallest feasible K");
    certify->add_flag("--witnesses", witnesses, "include witness flows in the output");
    certify->add_option("--out", cert_out, "output JSON (stdout when omitted)");

    // solve
    std::string solve_graph, solve_obs, estimate_file = "estimate.json",
                               trace_file = "trace.csv";
    double lambda = 0.1, rho = 0.01, tol = 0.0;
    int iters = 300;
    bool oracle = false;
    auto* solve = app.add_subcommand("solve", "Recover a signal from noisy samples");
    solve->add_option("--graph", solve_graph, "graph JSON")->required();
    solve->add_option("--observation", solve_obs, "observation JSON")->required();
    solve->add_option("--lambda", lambda, "regularization weight");
    solve->add_option("--rho", rho, "ADMM penalty");
    solve->add_option("--iters", iters, "iteration count");
    solve->add_option("--tol", tol, "residual tolerance (0 disables early stopping)");
    solve->add_flag("--oracle", oracle, "use the exact LP path (small graphs only)");
    solve->add_option("--estimate", estimate_file, "output estimate JSON");
    solve->add_option("--trace", trace_file, "output objective CSV");

    // experiment
    std::string spec_file, preset, exp_out = "experiment_out";
    std::optional<std::uint64_t> seed;
    bool full_scale = false;
    auto* experiment = app.add_subcommand("experiment", "Run a synthetic recovery experiment");
    experiment->add_option("--spec", spec_file, "experiment spec JSON");
    experiment->add_option("--preset", preset,
                           "one of: chain-noiseless, chain-noisy, lfr-like");
    experiment->add_option("--out", exp_out, "output directory");
    experiment->add_option("--seed", seed, "seed override");
    experiment->add_flag("--full-scale", full_scale, "use the large preset configuration");

    CLI11_PARSE(app, argc, argv);

    try {
        if (spectral->parsed()) return run_spectral(graph_file, signal_file, out_file);
        if (certify->parsed()) {
            return run_certify(cert_graph, cert_partition, cert_samples, cert_K, cert_L,
                               find_k, witnesses, cert_out);
        }
        if (solve->parsed()) {
            return run_solve(solve_graph, solve_obs, lambda, rho, iters, tol, oracle,
                             estimate_file, trace_file);
        }
        if (experiment->parsed()) {
            if (spec_file.empty() && preset.empty()) {
                throw CLI::ValidationError("experiment needs --spec or --preset");
            }
            return run_experiment_cmd(spec_file, preset, exp_out, seed, full_scale);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
