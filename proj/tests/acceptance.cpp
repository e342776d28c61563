// Acceptance suite: one self-contained check per shipped guarantee, each
// printing a single PASS/FAIL line. Returns nonzero when any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "flow_oracle.hpp"
#include "instances.hpp"
#include "netlasso/bench.hpp"
#include "netlasso/certify.hpp"
#include "netlasso/graph.hpp"
#include "netlasso/rng.hpp"
#include "netlasso/solve.hpp"
#include "netlasso/spectral.hpp"

using namespace netlasso;
using netlasso::testing::bridge_fixture;
using netlasso::testing::compatibility_probe;
using netlasso::testing::flanked_instance;
using netlasso::testing::flow_feasible_lp;
using netlasso::testing::random_connected_graph;
using netlasso::testing::single_server_instance;
using netlasso::testing::small_flow_instance;

namespace {

struct Check {
    std::string name;
    std::function<bool(std::string&)> run;
};

GraphSignal difference(const GraphSignal& a, const GraphSignal& b) {
    std::vector<double> d(static_cast<std::size_t>(a.size()));
    for (int i = 0; i < a.size(); ++i) d[static_cast<std::size_t>(i)] = a[i] - b[i];
    return GraphSignal(std::move(d));
}

std::vector<int> canonical_clusters(const std::vector<int>& cluster_of) {
    std::vector<int> remap(cluster_of.size(), -1);
    std::vector<int> out;
    out.reserve(cluster_of.size());
    int next = 0;
    for (int c : cluster_of) {
        if (remap[static_cast<std::size_t>(c)] < 0) remap[static_cast<std::size_t>(c)] = next++;
        out.push_back(remap[static_cast<std::size_t>(c)]);
    }
    return out;
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// 1. ADMM reaches the exact LP optimum on random instances.
bool oracle_equivalence(std::string& detail) {
    Rng rng(11001);
    const std::vector<double> rho_grid{0.01, 0.1, 1.0};
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = rng.uniform_int(3, 30);
        const int max_extra = std::min(60 - (n - 1), 2 * n);
        const DataGraph g =
            random_connected_graph(n, rng.uniform_int(0, max_extra), 0.3, 2.5, rng);
        const int samples = rng.uniform_int(1, n);
        std::vector<int> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);
        std::vector<int> nodes(perm.begin(), perm.begin() + samples);
        std::vector<double> y;
        for (int k = 0; k < samples; ++k) y.push_back(rng.uniform(-4.0, 4.0));
        const Observation obs(std::move(nodes), std::move(y));
        const double lambda = std::pow(10.0, rng.uniform(-2.0, 0.5));

        const auto oracle = lp_oracle(g, obs, lambda);
        double best_gap = std::numeric_limits<double>::infinity();
        for (const double rho : rho_grid) {
            SolverConfig cfg;
            cfg.lambda = lambda;
            cfg.rho = rho;
            cfg.max_iterations = 5000;
            const auto report = nlasso_admm(g, obs, cfg);
            best_gap = std::min(best_gap,
                                std::abs(report.objective_trace.back() - oracle.value) /
                                    (1.0 + oracle.value));
            if (best_gap <= 1e-4) break;
        }
        worst = std::max(worst, best_gap);
        if (best_gap > 1e-4) {
            detail = "trial " + std::to_string(trial) + " relative gap " +
                     std::to_string(best_gap);
            return false;
        }
    }
    detail = "200 instances, worst relative gap " + std::to_string(worst);
    return true;
}

// 2. Certified sampling sets obey the variation error bound.
bool error_bound(std::string& detail) {
    Rng rng(22002);
    double worst_margin = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 100; ++trial) {
        const double L = trial % 2 == 0 ? 2.0 : 4.0;
        const auto single = single_server_instance(rng, L);
        const auto& inst = single.instance;
        const double K = min_feasible_K(inst.graph, inst.partition, inst.sampled, L) + 1e-3;
        if (!std::isfinite(K) ||
            !resolves(inst.graph, inst.partition, inst.sampled, K, L, false).resolved) {
            detail = "trial " + std::to_string(trial) + ": certification failed";
            return false;
        }

        std::vector<double> coeffs(static_cast<std::size_t>(inst.partition.cluster_count()));
        for (double& c : coeffs) c = rng.uniform(-5.0, 5.0);
        const GraphSignal truth = clustered_signal(inst.partition, coeffs);
        std::vector<double> y, e;
        for (int v : inst.sampled) {
            e.push_back(rng.uniform(-0.4, 0.4));
            y.push_back(truth[v] + e.back());
        }
        const Observation obs(inst.sampled, y, e);

        const auto sol = lp_oracle(inst.graph, obs, 1.0 / K);
        const double tv_error = total_variation(inst.graph, difference(sol.estimate, truth));
        const double bound = recovery_error_bound(K, L, obs);
        worst_margin = std::min(worst_margin, bound + 1e-6 - tv_error);
        if (tv_error > bound + 1e-6) {
            detail = "trial " + std::to_string(trial) + ": error " + std::to_string(tv_error) +
                     " exceeds bound " + std::to_string(bound);
            return false;
        }
    }
    detail = "100 certified instances, smallest bound margin " + std::to_string(worst_margin);
    return true;
}

// 3. Noiseless chain recovery is exact at the certified regularization.
bool noiseless_chain(std::string& detail) {
    ExperimentSpec spec = chain_noiseless_preset();
    spec.seed = 1;
    const auto result = run_experiment(spec);
    const double nmse_m1 = result.runs[0].final_nmse;
    detail = "NMSE " + std::to_string(nmse_m1) + " with K " +
             std::to_string(result.certificate_K) + " (" + result.certificate_method + ")";
    return result.certificate_method == "min_feasible_k" && nmse_m1 <= 1e-4;
}

// 4. Boundary-guided sampling beats uniform sampling on noisy chains.
bool noisy_chain_ordering(std::string& detail) {
    std::vector<ExperimentSpec> specs;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        ExperimentSpec spec = chain_noisy_preset();
        spec.seed = seed;
        specs.push_back(spec);
    }
    const auto results = run_experiments(specs);
    int wins = 0;
    std::vector<double> guided;
    for (const auto& r : results) {
        if (r.runs[0].final_nmse < r.runs[1].final_nmse) ++wins;
        guided.push_back(r.runs[0].final_nmse);
    }
    const double median = median_of(guided);
    detail = std::to_string(wins) + "/10 orderings, median guided NMSE " +
             std::to_string(median);
    return wins >= 8 && median < 1e-1;
}

// 5. On planted partitions the solver beats label propagation and uniform
//    sampling.
bool planted_partition_comparison(std::string& detail) {
    std::vector<ExperimentSpec> specs;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        ExperimentSpec spec = lfr_like_preset();
        spec.seed = seed;
        specs.push_back(spec);
    }
    const auto results = run_experiments(specs);
    int wins = 0;
    for (const auto& r : results) {
        double nlasso_m1 = 0, nlasso_m2 = 0, lp_m1 = 0;
        for (const auto& run : r.runs) {
            if (run.method == "nlasso" && run.sampler == "m1") nlasso_m1 = run.final_nmse;
            if (run.method == "nlasso" && run.sampler == "m2") nlasso_m2 = run.final_nmse;
            if (run.method == "label_propagation" && run.sampler == "m1") lp_m1 = run.final_nmse;
        }
        if (nlasso_m1 < lp_m1 && nlasso_m1 < nlasso_m2) ++wins;
    }
    detail = std::to_string(wins) + "/5 seeds with nlasso(m1) < lp(m1) and < nlasso(m2)";
    return wins >= 4;
}

// 6. The bridged reference instance certifies exactly as expected.
bool certificate_correctness(std::string& detail) {
    const auto fx = bridge_fixture();
    const bool at_four = resolves(fx.graph, fx.partition, fx.sampled, 4.0, 4.0).resolved;
    const bool below = resolves(fx.graph, fx.partition, fx.sampled, 3.9, 4.0).resolved;
    const double k = min_feasible_K(fx.graph, fx.partition, fx.sampled, 4.0);
    detail = "resolved at K=4: " + std::string(at_four ? "yes" : "no") +
             ", at K=3.9: " + std::string(below ? "yes" : "no") +
             ", min K = " + std::to_string(k);
    return at_four && !below && std::abs(k - 4.0) <= 1e-3;
}

// 7. The max-flow reduction agrees with the direct linear oracle.
bool reduction_soundness(std::string& detail) {
    Rng rng(77007);
    int feasible = 0;
    for (int trial = 0; trial < 500; ++trial) {
        double K = rng.uniform(0.3, 5.0);
        const double L = rng.uniform(0.5, 4.0);
        netlasso::testing::ClusteredInstance inst = [&] {
            if (trial % 2 == 0) return small_flow_instance(rng);
            while (true) {
                auto single = single_server_instance(rng, L);
                if (single.instance.graph.node_count() <= 12) {
                    K = single.expected_min_k * rng.uniform(0.8, 1.5);
                    return std::move(single.instance);
                }
            }
        }();
        const auto boundary = boundary_edges(inst.graph, inst.partition);
        std::vector<std::uint8_t> pattern(boundary.size());
        for (auto& bit : pattern) bit = rng.uniform01() < 0.5 ? 1 : 0;

        const bool reduction =
            check_pattern(inst.graph, inst.partition, inst.sampled, K, L, pattern).has_value();
        const bool direct =
            flow_feasible_lp(inst.graph, inst.partition, inst.sampled, K, L, pattern);
        if (reduction != direct) {
            detail = "trial " + std::to_string(trial) + ": reduction says " +
                     (reduction ? "feasible" : "infeasible") + ", oracle disagrees";
            return false;
        }
        if (reduction) ++feasible;
    }
    detail = "500/500 agreements (" + std::to_string(feasible) + " feasible)";
    return true;
}

// 8. Flanking condition => resolving set => compatibility inequality.
bool implication_chain(std::string& detail) {
    Rng rng(88008);
    double worst_slack = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 100; ++trial) {
        const double L = trial % 2 == 0 ? 2.0 : 4.0;
        const auto inst = flanked_instance(rng, L);
        const auto flank = flanking_condition(inst.graph, inst.partition, inst.sampled, L);
        if (!flank.applicable) {
            detail = "trial " + std::to_string(trial) + ": flanking unexpectedly inapplicable";
            return false;
        }
        if (!resolves(inst.graph, inst.partition, inst.sampled, flank.K, L, false).resolved) {
            detail = "trial " + std::to_string(trial) + ": flanking K failed to resolve";
            return false;
        }
        for (int probe = 0; probe < 1000; ++probe) {
            const GraphSignal z = compatibility_probe(inst.partition, rng);
            const auto check =
                compatibility_holds(inst.graph, inst.partition, inst.sampled, flank.K, L, z);
            worst_slack = std::min(worst_slack, check.slack);
            if (check.slack < -1e-9) {
                detail = "trial " + std::to_string(trial) + ": compatibility slack " +
                         std::to_string(check.slack);
                return false;
            }
        }
    }
    detail = "100 instances x 1000 probes, smallest slack " + std::to_string(worst_slack);
    return true;
}

// 9. Post-processing recovers the exact partition under the separation
//    premises and meets the averaged-noise energy bound.
bool postprocess_recovery(std::string& detail) {
    Rng rng(99009);
    for (int trial = 0; trial < 100; ++trial) {
        const double L = trial % 2 == 0 ? 2.0 : 4.0;
        const auto single = single_server_instance(rng, L, 1.0, 2.0, 1.0, 1.5);
        const auto& inst = single.instance;
        const double K = min_feasible_K(inst.graph, inst.partition, inst.sampled, L) + 1e-3;
        if (!std::isfinite(K)) {
            detail = "trial " + std::to_string(trial) + ": certification failed";
            return false;
        }

        const double eta = 1.0;
        std::vector<double> coeffs(static_cast<std::size_t>(inst.partition.cluster_count()));
        for (std::size_t c = 0; c < coeffs.size(); ++c) {
            coeffs[c] = static_cast<double>(c) * 1.05 * eta + rng.uniform(0.0, 0.04);
        }
        const GraphSignal truth = clustered_signal(inst.partition, coeffs);

        const double per_sample =
            (eta / 2.0) /
            ((K + 4.0 / (L - 1.0)) * static_cast<double>(inst.sampled.size()) * 2.0);
        const double eps = std::min(0.2, per_sample);
        std::vector<double> y, e;
        for (int v : inst.sampled) {
            e.push_back(rng.uniform(-eps, eps));
            y.push_back(truth[v] + e.back());
        }
        const Observation obs(inst.sampled, y, e);
        if (recovery_error_bound(K, L, obs) >= eta / 2.0) {
            detail = "trial " + std::to_string(trial) + ": premises not established";
            return false;
        }

        const auto sol = lp_oracle(inst.graph, obs, 1.0 / K);
        const auto post = postprocess(inst.graph, obs, sol.estimate, eta);
        if (post.status != PostprocessResult::Status::ok) {
            detail = "trial " + std::to_string(trial) + ": post-processing returned an error";
            return false;
        }
        if (canonical_clusters(post.partition->assignments()) !=
            canonical_clusters(inst.partition.assignments())) {
            detail = "trial " + std::to_string(trial) + ": wrong partition recovered";
            return false;
        }
        double sq = 0.0;
        for (int i = 0; i < truth.size(); ++i) {
            const double d = post.signal[i] - truth[i];
            sq += d * d;
        }
        if (sq > static_cast<double>(truth.size()) * eps * eps + 1e-12) {
            detail = "trial " + std::to_string(trial) + ": energy bound violated";
            return false;
        }
    }
    detail = "100 instances, exact partitions and energy bounds throughout";
    return true;
}

// 10. Clustered signals spread over the spectrum while band-limited signals
//     have dense differences.
bool spectral_duality(std::string& detail) {
    std::vector<WeightedEdge> edges;
    for (int i = 0; i + 1 < 100; ++i) {
        edges.push_back(WeightedEdge{i, i + 1, i == 49 ? 0.5 : 1.0});
    }
    const DataGraph chain(100, std::move(edges));
    std::vector<int> cluster_of(100, 0);
    for (int i = 50; i < 100; ++i) cluster_of[static_cast<std::size_t>(i)] = 1;
    const Partition partition(cluster_of, 2);

    const auto basis = gft_basis(chain);
    const auto coeffs =
        gft(basis, clustered_signal(partition, std::vector<double>{1.0, 5.0}));
    double max_mag = 0.0;
    for (double c : coeffs) max_mag = std::max(max_mag, std::abs(c));
    int spread = 0;
    for (double c : coeffs) {
        if (std::abs(c) > 0.01 * max_mag) ++spread;
    }

    const GraphSignal band = band_limited_signal(basis, std::vector<int>{0, 1});
    int dense = 0;
    for (const auto& e : chain.edges()) {
        if (std::abs(band[e.j] - band[e.i]) > 1e-6) ++dense;
    }

    detail = std::to_string(spread) + "/100 coefficients spread, " + std::to_string(dense) +
             "/99 dense differences";
    return spread > 20 && dense > 0.9 * chain.edge_count();
}

}  // namespace

int main() {
    const std::vector<Check> checks = {
        {"oracle equivalence (ADMM vs LP, 200 instances, 1e-4 relative)", oracle_equivalence},
        {"variation error bound on certified sets (100 instances)", error_bound},
        {"noiseless chain recovery (N=10^4, 300 iterations, NMSE <= 1e-4)", noiseless_chain},
        {"noisy chain sampling-set ordering (10 seeds)", noisy_chain_ordering},
        {"planted-partition comparison (5 seeds)", planted_partition_comparison},
        {"certificate correctness on the bridged instance", certificate_correctness},
        {"flow reduction soundness (500 instances)", reduction_soundness},
        {"flanking => resolving => compatibility chain", implication_chain},
        {"post-processing partition recovery (100 instances)", postprocess_recovery},
        {"spectral duality of clustered and band-limited signals", spectral_duality},
    };

    int failures = 0;
    for (std::size_t k = 0; k < checks.size(); ++k) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = checks[k].run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %zu: %s (%.1fs) -- %s\n", ok ? "PASS" : "FAIL", k + 1,
                    checks[k].name.c_str(), seconds, detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures == 0) {
        std::printf("all %zu acceptance criteria passed\n", checks.size());
    } else {
        std::printf("%d acceptance criteria FAILED\n", failures);
    }
    return failures == 0 ? 0 : 1;
}
