#include "netlasso/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "netlasso/certify.hpp"
#include "netlasso/io.hpp"
#include "netlasso/solve.hpp"
#include "netlasso/spectral.hpp"

namespace netlasso {

using nlohmann::json;

double WeightDistribution::sample(Rng& rng) const {
    switch (kind) {
        case Kind::abs_normal: {
            double w = rng.abs_normal(a, b);
            // Weights must stay strictly positive; a zero draw has measure
            // zero but floating point can produce it.
            if (w <= 0.0) w = 1e-12;
            return w;
        }
        case Kind::uniform:
            if (a <= 0.0) throw std::invalid_argument("uniform weight range must be positive");
            return rng.uniform(a, b);
        case Kind::constant:
            if (a <= 0.0) throw std::invalid_argument("constant weight must be positive");
            return a;
    }
    throw std::logic_error("unknown weight distribution");
}

std::pair<DataGraph, Partition> generate_chain(int n, int cluster_size,
                                               const WeightDistribution& intra,
                                               const WeightDistribution& inter,
                                               std::uint64_t seed) {
    if (n < 1 || cluster_size < 1) throw std::invalid_argument("chain sizes must be positive");
    if (n % cluster_size != 0) {
        throw std::invalid_argument("cluster size must divide the node count");
    }
    Rng rng(Rng::derive(seed, 11));
    std::vector<WeightedEdge> edges;
    edges.reserve(static_cast<std::size_t>(n) - 1);
    for (int i = 0; i + 1 < n; ++i) {
        const bool crosses = ((i + 1) % cluster_size) == 0;
        const double w = crosses ? inter.sample(rng) : intra.sample(rng);
        edges.push_back(WeightedEdge{i, i + 1, w});
    }
    std::vector<int> cluster_of(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) cluster_of[static_cast<std::size_t>(i)] = i / cluster_size;
    return {DataGraph(n, std::move(edges)), Partition(std::move(cluster_of), n / cluster_size)};
}

namespace {

double power_law_draw(Rng& rng, double lo, double hi, double exponent) {
    // Inverse CDF of a density proportional to x^-exponent on [lo, hi].
    const double one_minus = 1.0 - exponent;
    const double u = rng.uniform01();
    const double a = std::pow(lo, one_minus);
    const double b = std::pow(hi, one_minus);
    return std::pow(a + u * (b - a), 1.0 / one_minus);
}

}  // namespace

std::pair<DataGraph, Partition> generate_planted_partition(int n,
                                                           const PlantedPartitionSpec& spec,
                                                           const WeightDistribution& intra,
                                                           const WeightDistribution& inter,
                                                           std::uint64_t seed) {
    if (spec.community_count < 2) throw std::invalid_argument("need at least two communities");
    if (!(spec.mixing > 0.0 && spec.mixing < 1.0)) {
        throw std::invalid_argument("mixing must lie strictly between 0 and 1");
    }
    if (spec.size_exponent <= 1.0) throw std::invalid_argument("size exponent must exceed 1");
    const int s_min = std::max(2, static_cast<int>(spec.min_community_size));
    if (n < spec.community_count * s_min) {
        throw std::invalid_argument("node count too small for the requested communities");
    }

    Rng rng(Rng::derive(seed, 13));
    const int count = spec.community_count;

    // Community sizes: truncated power-law draws rescaled to sum to n.
    const double s_max = std::max<double>(s_min + 1, n / 4.0);
    std::vector<double> raw(static_cast<std::size_t>(count));
    double total = 0.0;
    for (double& r : raw) {
        r = power_law_draw(rng, s_min, s_max, spec.size_exponent);
        total += r;
    }
    std::vector<int> sizes(static_cast<std::size_t>(count));
    long sum = 0;
    for (int c = 0; c < count; ++c) {
        sizes[static_cast<std::size_t>(c)] =
            std::max(s_min, static_cast<int>(std::floor(raw[static_cast<std::size_t>(c)] /
                                                        total * n)));
        sum += sizes[static_cast<std::size_t>(c)];
    }
    for (int c = 0; sum > n; c = (c + 1) % count) {
        if (sizes[static_cast<std::size_t>(c)] > s_min) {
            --sizes[static_cast<std::size_t>(c)];
            --sum;
        }
    }
    for (int c = 0; sum < n; c = (c + 1) % count) {
        ++sizes[static_cast<std::size_t>(c)];
        ++sum;
    }

    std::vector<int> cluster_of(static_cast<std::size_t>(n));
    std::vector<int> block_start(static_cast<std::size_t>(count));
    {
        int at = 0;
        for (int c = 0; c < count; ++c) {
            block_start[static_cast<std::size_t>(c)] = at;
            for (int k = 0; k < sizes[static_cast<std::size_t>(c)]; ++k) {
                cluster_of[static_cast<std::size_t>(at++)] = c;
            }
        }
    }

    std::unordered_set<std::uint64_t> used;
    std::vector<WeightedEdge> edges;
    const auto add_edge = [&](int u, int v, bool same_community) {
        if (u == v) return false;
        if (u > v) std::swap(u, v);
        const std::uint64_t key =
            static_cast<std::uint64_t>(u) * static_cast<std::uint64_t>(n) +
            static_cast<std::uint64_t>(v);
        if (!used.insert(key).second) return false;
        edges.push_back(
            WeightedEdge{u, v, same_community ? intra.sample(rng) : inter.sample(rng)});
        return true;
    };

    // Spanning tree per community keeps every cluster internally connected.
    for (int c = 0; c < count; ++c) {
        const int size = sizes[static_cast<std::size_t>(c)];
        std::vector<int> perm(static_cast<std::size_t>(size));
        std::iota(perm.begin(), perm.end(), block_start[static_cast<std::size_t>(c)]);
        rng.shuffle(perm);
        for (int k = 1; k < size; ++k) {
            add_edge(perm[static_cast<std::size_t>(k)],
                     perm[static_cast<std::size_t>(rng.uniform_int(0, k - 1))], true);
        }
    }

    // Extra intra-community edges toward the degree target.
    for (int c = 0; c < count; ++c) {
        const int size = sizes[static_cast<std::size_t>(c)];
        if (size < 3) continue;
        const long max_pairs = static_cast<long>(size) * (size - 1) / 2;
        long target = std::lround(size * spec.avg_degree * (1.0 - spec.mixing) / 2.0);
        target = std::min(target, max_pairs);
        long have = size - 1;
        long attempts = 0;
        const long limit = 30 * (target + 1);
        const int lo = block_start[static_cast<std::size_t>(c)];
        const int hi = lo + size - 1;
        while (have < target && attempts++ < limit) {
            if (add_edge(rng.uniform_int(lo, hi), rng.uniform_int(lo, hi), true)) ++have;
        }
    }

    // Cross-community edges controlled by the mixing fraction.
    {
        const long target = std::lround(n * spec.avg_degree * spec.mixing / 2.0);
        long have = 0;
        long attempts = 0;
        const long limit = 30 * (target + 1);
        while (have < target && attempts++ < limit) {
            const int u = rng.uniform_int(0, n - 1);
            const int v = rng.uniform_int(0, n - 1);
            if (cluster_of[static_cast<std::size_t>(u)] ==
                cluster_of[static_cast<std::size_t>(v)]) {
                continue;
            }
            if (add_edge(u, v, false)) ++have;
        }
        if (target > 0 && have == 0) {
            throw std::runtime_error("could not place any cross-community edge");
        }
    }

    // Stitch any leftover disconnected components together.
    {
        std::vector<int> parent(static_cast<std::size_t>(n));
        std::iota(parent.begin(), parent.end(), 0);
        const auto find = [&](int v) {
            while (parent[static_cast<std::size_t>(v)] != v) {
                parent[static_cast<std::size_t>(v)] =
                    parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
                v = parent[static_cast<std::size_t>(v)];
            }
            return v;
        };
        for (const auto& e : edges) parent[static_cast<std::size_t>(find(e.i))] = find(e.j);
        std::vector<int> reps;
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        for (int v = 0; v < n; ++v) {
            const int r = find(v);
            if (!seen[static_cast<std::size_t>(r)]) {
                seen[static_cast<std::size_t>(r)] = true;
                reps.push_back(v);
            }
        }
        for (std::size_t k = 1; k < reps.size(); ++k) {
            add_edge(reps[0], reps[k],
                     cluster_of[static_cast<std::size_t>(reps[0])] ==
                         cluster_of[static_cast<std::size_t>(reps[k])]);
            parent[static_cast<std::size_t>(find(reps[0]))] = find(reps[k]);
        }
    }

    return {DataGraph(n, std::move(edges)), Partition(std::move(cluster_of), count)};
}

SampleSet sample_boundary_guided(const DataGraph& g, const Partition& p, int budget,
                                 BoundaryMode mode, std::uint64_t seed, double flank_L) {
    if (budget < 0 || budget > g.node_count()) {
        throw std::invalid_argument("budget must lie in [0, N]");
    }

    std::vector<bool> chosen(static_cast<std::size_t>(g.node_count()), false);
    std::vector<int> picks;
    picks.reserve(static_cast<std::size_t>(budget));
    bool partial = false;

    const auto try_add = [&](int v) {
        if (chosen[static_cast<std::size_t>(v)]) return true;
        if (static_cast<int>(picks.size()) >= budget) return false;
        chosen[static_cast<std::size_t>(v)] = true;
        picks.push_back(v);
        return true;
    };

    const std::vector<int> boundary = boundary_edges(g, p);

    if (mode == BoundaryMode::flanking) {
        for (int e : boundary) {
            const auto& edge = g.edge(e);
            for (const int endpoint : {edge.i, edge.j}) {
                const int cluster = p.cluster_of(endpoint);
                int best = -1;
                double best_weight = 0.0;
                for (const auto& nb : g.neighbors(endpoint)) {
                    if (p.cluster_of(nb.node) != cluster) continue;
                    if (nb.weight < flank_L * edge.w - 1e-12) continue;
                    if (nb.weight > best_weight) {
                        best_weight = nb.weight;
                        best = nb.node;
                    }
                }
                // Without a strong enough in-cluster neighbor, sample the
                // endpoint itself: the prescribed boundary flow can then
                // terminate right at a sampled node.
                const int target = best >= 0 ? best : endpoint;
                if (!try_add(target)) partial = true;
            }
            if (partial) break;
        }
    } else {
        std::vector<int> order(static_cast<std::size_t>(g.edge_count()));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (g.edge(a).w != g.edge(b).w) return g.edge(a).w < g.edge(b).w;
            return a < b;
        });
        std::vector<bool> is_boundary(static_cast<std::size_t>(g.edge_count()), false);
        for (int e : boundary) is_boundary[static_cast<std::size_t>(e)] = true;

        std::size_t stop = order.size();
        for (std::size_t k = 0; k < order.size(); ++k) {
            const auto& edge = g.edge(order[k]);
            bool full = false;
            for (const int endpoint : {edge.i, edge.j}) {
                int best = -1;
                int best_degree = -1;
                for (const auto& nb : g.neighbors(endpoint)) {
                    const int d = g.degree(nb.node);
                    if (d > best_degree) {
                        best_degree = d;
                        best = nb.node;
                    }
                }
                if (best >= 0 && !try_add(best)) full = true;
            }
            if (full) {
                stop = k;
                break;
            }
        }
        for (std::size_t k = stop; k < order.size(); ++k) {
            if (is_boundary[static_cast<std::size_t>(order[k])]) {
                partial = true;
                break;
            }
        }
    }

    if (static_cast<int>(picks.size()) < budget) {
        std::vector<int> rest;
        for (int v = 0; v < g.node_count(); ++v) {
            if (!chosen[static_cast<std::size_t>(v)]) rest.push_back(v);
        }
        Rng pad_rng(Rng::derive(seed, 17));
        pad_rng.shuffle(rest);
        for (int v : rest) {
            if (static_cast<int>(picks.size()) >= budget) break;
            chosen[static_cast<std::size_t>(v)] = true;
            picks.push_back(v);
        }
    }

    std::sort(picks.begin(), picks.end());
    return SampleSet{std::move(picks), partial};
}

std::vector<int> sample_uniform(const DataGraph& g, int budget, std::uint64_t seed) {
    if (budget < 0 || budget > g.node_count()) {
        throw std::invalid_argument("budget must lie in [0, N]");
    }
    std::vector<int> all(static_cast<std::size_t>(g.node_count()));
    std::iota(all.begin(), all.end(), 0);
    Rng rng(Rng::derive(seed, 19));
    rng.shuffle(all);
    all.resize(static_cast<std::size_t>(budget));
    std::sort(all.begin(), all.end());
    return all;
}

namespace {

template <typename F>
auto stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("stage ") + name + ": " + e.what());
    }
}

Observation observe(const GraphSignal& truth, const std::vector<int>& nodes, double sigma,
                    std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> y(nodes.size());
    std::vector<double> e(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        e[k] = sigma > 0.0 ? rng.normal(0.0, sigma) : 0.0;
        y[k] = truth[nodes[k]] + e[k];
    }
    return Observation(nodes, std::move(y), std::move(e));
}

double boundary_degree_K(const DataGraph& g, const Partition& p, double L) {
    std::vector<int> incident(static_cast<std::size_t>(g.node_count()), 0);
    double max_weight = 0.0;
    for (int e : boundary_edges(g, p)) {
        const auto& edge = g.edge(e);
        ++incident[static_cast<std::size_t>(edge.i)];
        ++incident[static_cast<std::size_t>(edge.j)];
        max_weight = std::max(max_weight, edge.w);
    }
    const int max_count = incident.empty()
                              ? 0
                              : *std::max_element(incident.begin(), incident.end());
    return std::max(L * max_count, L * max_weight);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    if (spec.sample_budget < 1 || spec.sample_budget > spec.n_nodes) {
        throw std::invalid_argument("sample budget must lie in [1, N]");
    }

    auto generated = stage("generate", [&] {
        if (spec.family == ExperimentSpec::Family::chain) {
            return generate_chain(spec.n_nodes, spec.cluster_size, spec.intra_weight,
                                  spec.inter_weight, spec.seed);
        }
        return generate_planted_partition(spec.n_nodes, spec.planted, spec.intra_weight,
                                          spec.inter_weight, spec.seed);
    });
    const DataGraph& g = generated.first;
    const Partition& p = generated.second;

    const GraphSignal truth = stage("signal", [&] {
        std::vector<double> coeffs(static_cast<std::size_t>(p.cluster_count()));
        if (spec.family == ExperimentSpec::Family::chain) {
            // Alternating two-level coefficients; consecutive clusters differ.
            for (std::size_t l = 0; l < coeffs.size(); ++l) coeffs[l] = (l % 2 == 0) ? 1.0 : 5.0;
        } else {
            Rng rng(Rng::derive(spec.seed, 23));
            for (double& a : coeffs) a = rng.uniform(1.0, 50.0);
        }
        return clustered_signal(p, coeffs);
    });

    ExperimentResult result;
    result.spec = spec;

    const SampleSet m1 = stage("sample", [&] {
        if (spec.sampler == ExperimentSpec::Sampler::uniform_random) {
            return SampleSet{sample_uniform(g, spec.sample_budget, Rng::derive(spec.seed, 29)),
                             false};
        }
        const BoundaryMode mode = spec.family == ExperimentSpec::Family::chain
                                      ? BoundaryMode::flanking
                                      : BoundaryMode::edge_sorted;
        return sample_boundary_guided(g, p, spec.sample_budget, mode, spec.seed,
                                      spec.certificate_L);
    });
    const std::vector<int> m2 =
        stage("sample", [&] { return sample_uniform(g, spec.sample_budget, spec.seed); });
    result.m1_partial_coverage = m1.partial_coverage;

    stage("certify", [&] {
        const double L = spec.certificate_L;
        double K = 0.0;
        std::string method;
        if (spec.family == ExperimentSpec::Family::chain) {
            K = min_feasible_K(g, p, m1.nodes, L);
            method = "min_feasible_k";
        } else {
            const auto flank = flanking_condition(g, p, m1.nodes, L);
            if (flank.applicable) {
                K = flank.K;
                method = "flanking";
            }
        }
        if (!(K > 0.0) || !std::isfinite(K)) {
            K = boundary_degree_K(g, p, L);
            method = "boundary_degree";
        }
        result.certificate_K = K;
        result.certificate_L = L;
        result.certificate_method = method;
        return 0;
    });

    result.lambda_used = spec.solver.lambda.value_or(
        result.certificate_K > 0.0 ? 1.0 / result.certificate_K : 0.1);

    const Observation obs1 =
        stage("observe", [&] { return observe(truth, m1.nodes, spec.noise_sigma,
                                              Rng::derive(spec.seed, 31)); });
    const Observation obs2 =
        stage("observe", [&] { return observe(truth, m2, spec.noise_sigma,
                                              Rng::derive(spec.seed, 37)); });

    double truth_norm = 0.0;
    for (double v : truth.values()) truth_norm += v * v;
    if (truth_norm <= 0.0) throw std::runtime_error("degenerate zero truth signal");

    const auto nmse_of = [&](std::span<const double> x) {
        double num = 0.0;
        for (int i = 0; i < truth.size(); ++i) {
            const double d = x[static_cast<std::size_t>(i)] - truth[i];
            num += d * d;
        }
        return num / truth_norm;
    };

    SolverConfig cfg;
    cfg.lambda = result.lambda_used;
    cfg.rho = spec.solver.rho;
    cfg.max_iterations = spec.solver.iterations;
    cfg.seed = spec.seed;

    const auto solve_traced = [&](const Observation& obs, const char* sampler_tag) {
        MethodRun run;
        run.method = "nlasso";
        run.sampler = sampler_tag;
        const auto report = nlasso_admm(g, obs, cfg, [&](int, std::span<const double> x) {
            run.nmse_trace.push_back(nmse_of(x));
        });
        run.final_nmse = run.nmse_trace.back();
        return std::pair(std::move(run), report.estimate);
    };

    auto [run1, estimate1] = stage("solve", [&] { return solve_traced(obs1, "m1"); });
    auto [run2, estimate2] = stage("solve", [&] { return solve_traced(obs2, "m2"); });

    result.runs.push_back(std::move(run1));
    result.runs.push_back(std::move(run2));

    if (spec.with_label_propagation) {
        const auto propagate = [&](const Observation& obs, const char* sampler_tag) {
            MethodRun run;
            run.method = "label_propagation";
            run.sampler = sampler_tag;
            label_propagation(g, obs, spec.solver.iterations,
                              [&](int, std::span<const double> x) {
                                  run.nmse_trace.push_back(nmse_of(x));
                              });
            run.final_nmse = run.nmse_trace.back();
            return run;
        };
        result.runs.push_back(stage("label_propagation", [&] { return propagate(obs1, "m1"); }));
        result.runs.push_back(stage("label_propagation", [&] { return propagate(obs2, "m2"); }));
    }

    const int head = std::min(100, g.node_count());
    result.head_truth.assign(truth.values().begin(), truth.values().begin() + head);
    result.head_m1.assign(estimate1.values().begin(), estimate1.values().begin() + head);
    result.head_m2.assign(estimate2.values().begin(), estimate2.values().begin() + head);

    return result;
}

std::vector<ExperimentResult> run_experiments(const std::vector<ExperimentSpec>& specs) {
    int max_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (max_threads < 1) max_threads = 1;
    if (const char* env = std::getenv("NETLASSO_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed >= 1) max_threads = parsed;
    }
    const int workers = std::min<int>(max_threads, static_cast<int>(specs.size()));

    std::vector<ExperimentResult> results(specs.size());
    if (workers <= 1) {
        for (std::size_t k = 0; k < specs.size(); ++k) results[k] = run_experiment(specs[k]);
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t k = next.fetch_add(1);
                if (k >= specs.size()) break;
                try {
                    results[k] = run_experiment(specs[k]);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

namespace {

json distribution_to_json(const WeightDistribution& d) {
    switch (d.kind) {
        case WeightDistribution::Kind::abs_normal:
            return {{"dist", "abs_normal"}, {"mean", d.a}, {"variance", d.b}};
        case WeightDistribution::Kind::uniform:
            return {{"dist", "uniform"}, {"lo", d.a}, {"hi", d.b}};
        case WeightDistribution::Kind::constant:
            return {{"dist", "constant"}, {"value", d.a}};
    }
    throw std::logic_error("unknown weight distribution");
}

WeightDistribution distribution_from_json(const json& j) {
    const std::string kind = j.at("dist").get<std::string>();
    if (kind == "abs_normal") {
        return WeightDistribution::absolute_normal(j.at("mean").get<double>(),
                                                   j.at("variance").get<double>());
    }
    if (kind == "uniform") {
        return WeightDistribution::uniform(j.at("lo").get<double>(), j.at("hi").get<double>());
    }
    if (kind == "constant") {
        return WeightDistribution::constant(j.at("value").get<double>());
    }
    throw std::runtime_error("unknown weight distribution: " + kind);
}

json spec_to_json(const ExperimentSpec& spec) {
    json j;
    j["name"] = spec.name;
    j["family"] =
        spec.family == ExperimentSpec::Family::chain ? "chain" : "planted_partition";
    j["n_nodes"] = spec.n_nodes;
    j["cluster_size"] = spec.cluster_size;
    j["planted"] = {{"community_count", spec.planted.community_count},
                    {"size_exponent", spec.planted.size_exponent},
                    {"min_community_size", spec.planted.min_community_size},
                    {"avg_degree", spec.planted.avg_degree},
                    {"mixing", spec.planted.mixing}};
    j["intra_weight"] = distribution_to_json(spec.intra_weight);
    j["inter_weight"] = distribution_to_json(spec.inter_weight);
    j["noise_sigma"] = spec.noise_sigma;
    j["sample_budget"] = spec.sample_budget;
    j["sampler"] = spec.sampler == ExperimentSpec::Sampler::boundary_guided
                       ? "boundary_guided"
                       : "uniform_random";
    j["with_label_propagation"] = spec.with_label_propagation;
    j["solver"] = {{"rho", spec.solver.rho}, {"iterations", spec.solver.iterations}};
    if (spec.solver.lambda) j["solver"]["lambda"] = *spec.solver.lambda;
    j["certificate_L"] = spec.certificate_L;
    j["seed"] = spec.seed;
    return j;
}

ExperimentSpec spec_from_json(const json& j) {
    ExperimentSpec spec;
    if (j.contains("name")) spec.name = j.at("name").get<std::string>();
    const std::string family = j.at("family").get<std::string>();
    if (family == "chain") {
        spec.family = ExperimentSpec::Family::chain;
    } else if (family == "planted_partition") {
        spec.family = ExperimentSpec::Family::planted_partition;
    } else {
        throw std::runtime_error("unknown family: " + family);
    }
    spec.n_nodes = j.at("n_nodes").get<int>();
    if (j.contains("cluster_size")) spec.cluster_size = j.at("cluster_size").get<int>();
    if (j.contains("planted")) {
        const auto& pj = j.at("planted");
        spec.planted.community_count = pj.at("community_count").get<int>();
        if (pj.contains("size_exponent")) {
            spec.planted.size_exponent = pj.at("size_exponent").get<double>();
        }
        if (pj.contains("min_community_size")) {
            spec.planted.min_community_size = pj.at("min_community_size").get<double>();
        }
        if (pj.contains("avg_degree")) spec.planted.avg_degree = pj.at("avg_degree").get<double>();
        if (pj.contains("mixing")) spec.planted.mixing = pj.at("mixing").get<double>();
    }
    if (j.contains("intra_weight")) {
        spec.intra_weight = distribution_from_json(j.at("intra_weight"));
    }
    if (j.contains("inter_weight")) {
        spec.inter_weight = distribution_from_json(j.at("inter_weight"));
    }
    if (j.contains("noise_sigma")) spec.noise_sigma = j.at("noise_sigma").get<double>();
    spec.sample_budget = j.at("sample_budget").get<int>();
    if (j.contains("sampler")) {
        const std::string sampler = j.at("sampler").get<std::string>();
        if (sampler == "boundary_guided") {
            spec.sampler = ExperimentSpec::Sampler::boundary_guided;
        } else if (sampler == "uniform_random") {
            spec.sampler = ExperimentSpec::Sampler::uniform_random;
        } else {
            throw std::runtime_error("unknown sampler: " + sampler);
        }
    }
    if (j.contains("with_label_propagation")) {
        spec.with_label_propagation = j.at("with_label_propagation").get<bool>();
    }
    if (j.contains("solver")) {
        const auto& sj = j.at("solver");
        if (sj.contains("rho")) spec.solver.rho = sj.at("rho").get<double>();
        if (sj.contains("iterations")) spec.solver.iterations = sj.at("iterations").get<int>();
        if (sj.contains("lambda")) spec.solver.lambda = sj.at("lambda").get<double>();
    }
    if (j.contains("certificate_L")) spec.certificate_L = j.at("certificate_L").get<double>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    return spec;
}

}  // namespace

ExperimentSpec load_experiment_spec(std::istream& in) {
    json j;
    in >> j;
    return spec_from_json(j);
}

void save_experiment_spec(const ExperimentSpec& spec, std::ostream& out) {
    out << spec_to_json(spec).dump(2) << "\n";
}

void write_result(const ExperimentResult& result, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    json j;
    j["spec"] = spec_to_json(result.spec);
    j["certificate"] = {{"K", result.certificate_K},
                        {"L", result.certificate_L},
                        {"method", result.certificate_method}};
    j["lambda"] = result.lambda_used;
    j["m1_partial_coverage"] = result.m1_partial_coverage;
    json runs = json::array();
    for (const auto& run : result.runs) {
        runs.push_back({{"method", run.method},
                        {"sampler", run.sampler},
                        {"final_nmse", run.final_nmse},
                        {"nmse_trace", run.nmse_trace}});
    }
    j["runs"] = runs;
    io::atomic_write(out_dir / "result.json", j.dump(2) + "\n");

    std::ostringstream trace;
    trace.precision(10);
    trace << "iteration,method,sampler,nmse\n";
    for (const auto& run : result.runs) {
        for (std::size_t k = 0; k < run.nmse_trace.size(); ++k) {
            trace << (k + 1) << "," << run.method << "," << run.sampler << ","
                  << run.nmse_trace[k] << "\n";
        }
    }
    io::atomic_write(out_dir / "nmse_trace.csv", trace.str());

    std::ostringstream head;
    head.precision(10);
    head << "node,true,recovered_m1,recovered_m2\n";
    for (std::size_t k = 0; k < result.head_truth.size(); ++k) {
        head << (k + 1) << "," << result.head_truth[k] << "," << result.head_m1[k] << ","
             << result.head_m2[k] << "\n";
    }
    io::atomic_write(out_dir / "signal_head.csv", head.str());
}

ExperimentSpec chain_noiseless_preset(bool full_scale) {
    ExperimentSpec spec;
    spec.name = "chain-noiseless";
    spec.family = ExperimentSpec::Family::chain;
    spec.n_nodes = full_scale ? 100000 : 10000;
    spec.cluster_size = 10;
    spec.intra_weight = WeightDistribution::absolute_normal(2.0, 0.25);
    spec.inter_weight = WeightDistribution::absolute_normal(1.0, 0.25);
    spec.noise_sigma = 0.0;
    spec.sample_budget = spec.n_nodes / 5;
    spec.solver.rho = 0.01;
    spec.solver.iterations = 300;
    spec.certificate_L = 2.0;
    return spec;
}

ExperimentSpec chain_noisy_preset(bool full_scale) {
    ExperimentSpec spec = chain_noiseless_preset(full_scale);
    spec.name = "chain-noisy";
    spec.noise_sigma = 0.5;
    return spec;
}

ExperimentSpec lfr_like_preset(bool full_scale) {
    ExperimentSpec spec;
    spec.name = "lfr-like";
    spec.family = ExperimentSpec::Family::planted_partition;
    spec.n_nodes = full_scale ? 100000 : 20000;
    spec.planted.community_count = full_scale ? 1399 : 280;
    spec.planted.size_exponent = 2.0;
    spec.planted.min_community_size = 10;
    spec.planted.avg_degree = full_scale ? 18.9 : 10.0;
    spec.planted.mixing = 0.1;
    spec.intra_weight = WeightDistribution::absolute_normal(2.0, 0.25);
    spec.inter_weight = WeightDistribution::absolute_normal(1.0, 0.25);
    spec.noise_sigma = 0.5;
    spec.sample_budget = spec.n_nodes / 10;
    spec.with_label_propagation = true;
    spec.solver.rho = 0.01;
    spec.solver.iterations = 300;
    spec.certificate_L = 2.0;
    return spec;
}

}  // namespace netlasso
