#include "netlasso/solve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "netlasso/simplex.hpp"

namespace netlasso {

namespace {

double soft_threshold(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

}  // namespace

double objective(const DataGraph& g, const Observation& obs, const GraphSignal& x,
                 double lambda) {
    if (lambda <= 0.0) throw std::invalid_argument("lambda must be positive");
    return empirical_error(obs, x) + lambda * total_variation(g, x);
}

SolveReport nlasso_admm(const DataGraph& g, const Observation& obs, const SolverConfig& cfg,
                        const IterationCallback& on_iteration) {
    if (obs.sample_count() == 0) throw std::invalid_argument("empty sampling set");
    if (cfg.lambda <= 0.0) throw std::invalid_argument("lambda must be positive");
    if (cfg.rho <= 0.0) throw std::invalid_argument("rho must be positive");
    if (cfg.max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");

    const int n = g.node_count();
    const int m = g.edge_count();

    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    std::vector<bool> sampled(static_cast<std::size_t>(n), false);
    for (int k = 0; k < obs.sample_count(); ++k) {
        const int v = obs.nodes()[static_cast<std::size_t>(k)];
        if (v >= n) throw std::invalid_argument("sampled node out of range");
        y[static_cast<std::size_t>(v)] = obs.values()[static_cast<std::size_t>(k)];
        sampled[static_cast<std::size_t>(v)] = true;
    }

    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    std::vector<double> z_i(static_cast<std::size_t>(m), 0.0);  // copy of x[i] at edge {i,j}
    std::vector<double> z_j(static_cast<std::size_t>(m), 0.0);  // copy of x[j]
    std::vector<double> u_i(static_cast<std::size_t>(m), 0.0);  // scaled duals
    std::vector<double> u_j(static_cast<std::size_t>(m), 0.0);
    std::vector<double> accum(static_cast<std::size_t>(n), 0.0);

    SolveReport report;
    report.objective_trace.reserve(static_cast<std::size_t>(cfg.max_iterations));

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        // Node update: prox of the sample fidelity around the mean edge copy.
        std::fill(accum.begin(), accum.end(), 0.0);
        for (int e = 0; e < m; ++e) {
            const auto& edge = g.edge(e);
            accum[static_cast<std::size_t>(edge.i)] +=
                z_i[static_cast<std::size_t>(e)] - u_i[static_cast<std::size_t>(e)];
            accum[static_cast<std::size_t>(edge.j)] +=
                z_j[static_cast<std::size_t>(e)] - u_j[static_cast<std::size_t>(e)];
        }
        for (int v = 0; v < n; ++v) {
            const int deg = g.degree(v);
            if (deg == 0) {
                if (sampled[static_cast<std::size_t>(v)]) {
                    x[static_cast<std::size_t>(v)] = y[static_cast<std::size_t>(v)];
                }
                continue;
            }
            const double mean = accum[static_cast<std::size_t>(v)] / deg;
            if (sampled[static_cast<std::size_t>(v)]) {
                const double yv = y[static_cast<std::size_t>(v)];
                x[static_cast<std::size_t>(v)] =
                    yv + soft_threshold(mean - yv, 1.0 / (cfg.rho * deg));
            } else {
                x[static_cast<std::size_t>(v)] = mean;
            }
        }

        // Edge update: soft-threshold the copy difference, keep the mean.
        double dual_sq = 0.0;
        for (int e = 0; e < m; ++e) {
            const auto& edge = g.edge(e);
            const double a = x[static_cast<std::size_t>(edge.i)] + u_i[static_cast<std::size_t>(e)];
            const double b = x[static_cast<std::size_t>(edge.j)] + u_j[static_cast<std::size_t>(e)];
            const double mid = 0.5 * (a + b);
            const double diff =
                soft_threshold(a - b, 2.0 * cfg.lambda * edge.w / cfg.rho);
            const double new_i = mid + 0.5 * diff;
            const double new_j = mid - 0.5 * diff;
            const double dz_i = new_i - z_i[static_cast<std::size_t>(e)];
            const double dz_j = new_j - z_j[static_cast<std::size_t>(e)];
            dual_sq += dz_i * dz_i + dz_j * dz_j;
            z_i[static_cast<std::size_t>(e)] = new_i;
            z_j[static_cast<std::size_t>(e)] = new_j;
        }

        // Dual ascent and primal residual.
        double primal_sq = 0.0;
        for (int e = 0; e < m; ++e) {
            const auto& edge = g.edge(e);
            const double r_i =
                x[static_cast<std::size_t>(edge.i)] - z_i[static_cast<std::size_t>(e)];
            const double r_j =
                x[static_cast<std::size_t>(edge.j)] - z_j[static_cast<std::size_t>(e)];
            primal_sq += r_i * r_i + r_j * r_j;
            u_i[static_cast<std::size_t>(e)] += r_i;
            u_j[static_cast<std::size_t>(e)] += r_j;
        }

        double obj = 0.0;
        for (int v = 0; v < n; ++v) {
            if (sampled[static_cast<std::size_t>(v)]) {
                obj += std::abs(x[static_cast<std::size_t>(v)] - y[static_cast<std::size_t>(v)]);
            }
            if (!std::isfinite(x[static_cast<std::size_t>(v)])) {
                throw std::runtime_error("non-finite iterate at iteration " +
                                         std::to_string(iter + 1));
            }
        }
        for (int e = 0; e < m; ++e) {
            const auto& edge = g.edge(e);
            obj += cfg.lambda * edge.w *
                   std::abs(x[static_cast<std::size_t>(edge.j)] -
                            x[static_cast<std::size_t>(edge.i)]);
        }
        report.objective_trace.push_back(obj);
        report.iterations_run = iter + 1;
        report.primal_residual = std::sqrt(primal_sq);
        report.dual_residual = cfg.rho * std::sqrt(dual_sq);

        if (on_iteration) on_iteration(iter + 1, std::span<const double>(x));

        if (cfg.primal_tol > 0.0 && cfg.dual_tol > 0.0 &&
            report.primal_residual <= cfg.primal_tol &&
            report.dual_residual <= cfg.dual_tol) {
            report.converged = true;
            break;
        }
    }

    report.estimate = GraphSignal(std::move(x));
    return report;
}

LpSolution lp_oracle(const DataGraph& g, const Observation& obs, double lambda) {
    if (lambda <= 0.0) throw std::invalid_argument("lambda must be positive");
    if (g.node_count() > 200) {
        throw std::invalid_argument("lp_oracle is limited to 200 nodes");
    }

    const int n = g.node_count();
    LinearProgram lp;

    // x[i] = pos[i] - neg[i]; deviation bounds s per sample, difference
    // bounds t per edge.
    std::vector<int> pos(static_cast<std::size_t>(n));
    std::vector<int> neg(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        pos[static_cast<std::size_t>(v)] = lp.add_variable(0.0);
        neg[static_cast<std::size_t>(v)] = lp.add_variable(0.0);
    }
    for (int k = 0; k < obs.sample_count(); ++k) {
        const int v = obs.nodes()[static_cast<std::size_t>(k)];
        if (v >= n) throw std::invalid_argument("sampled node out of range");
        const double yv = obs.values()[static_cast<std::size_t>(k)];
        const int s = lp.add_variable(1.0);
        const int p = pos[static_cast<std::size_t>(v)];
        const int q = neg[static_cast<std::size_t>(v)];
        lp.add_row({{s, 1.0}, {p, -1.0}, {q, 1.0}}, '>', -yv);  // s >= x - y
        lp.add_row({{s, 1.0}, {p, 1.0}, {q, -1.0}}, '>', yv);   // s >= y - x
    }
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto& edge = g.edge(e);
        const int t = lp.add_variable(lambda * edge.w);
        const int pi = pos[static_cast<std::size_t>(edge.i)];
        const int ni = neg[static_cast<std::size_t>(edge.i)];
        const int pj = pos[static_cast<std::size_t>(edge.j)];
        const int nj = neg[static_cast<std::size_t>(edge.j)];
        lp.add_row({{t, 1.0}, {pi, -1.0}, {ni, 1.0}, {pj, 1.0}, {nj, -1.0}}, '>', 0.0);
        lp.add_row({{t, 1.0}, {pi, 1.0}, {ni, -1.0}, {pj, -1.0}, {nj, 1.0}}, '>', 0.0);
    }

    const LpResult solved = solve_lp(lp);
    if (solved.status == LpStatus::unbounded) {
        throw std::logic_error("the recovery objective is bounded below by zero");
    }
    if (solved.status != LpStatus::optimal) {
        throw std::runtime_error("lp_oracle failed to solve");
    }

    std::vector<double> x(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        x[static_cast<std::size_t>(v)] =
            solved.solution[static_cast<std::size_t>(pos[static_cast<std::size_t>(v)])] -
            solved.solution[static_cast<std::size_t>(neg[static_cast<std::size_t>(v)])];
    }
    return LpSolution{GraphSignal(std::move(x)), solved.value};
}

double recovery_error_bound(double K, double L, const Observation& obs) {
    if (K <= 0.0) throw std::invalid_argument("K must be positive");
    if (L <= 1.0) throw std::invalid_argument("the bound requires L > 1");
    if (!obs.has_noise()) {
        throw std::invalid_argument("the bound needs the observation's true noise");
    }
    double noise_mass = 0.0;
    for (double e : obs.noise()) noise_mass += std::abs(e);
    return (K + 4.0 / (L - 1.0)) * noise_mass;
}

PostprocessResult postprocess(const DataGraph& g, const Observation& obs,
                              const GraphSignal& estimate, double eta) {
    if (eta <= 0.0) throw std::invalid_argument("eta must be positive");
    if (estimate.size() != g.node_count()) {
        throw std::invalid_argument("estimate length does not match the graph");
    }

    PostprocessResult result;

    std::vector<bool> candidate(static_cast<std::size_t>(g.edge_count()), false);
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto& edge = g.edge(e);
        if (std::abs(estimate[edge.i] - estimate[edge.j]) >= eta / 2.0) {
            candidate[static_cast<std::size_t>(e)] = true;
        }
    }

    // Components of the graph with candidate edges removed.
    std::vector<int> parent(static_cast<std::size_t>(g.node_count()));
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&](int v) {
        while (parent[static_cast<std::size_t>(v)] != v) {
            parent[static_cast<std::size_t>(v)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
            v = parent[static_cast<std::size_t>(v)];
        }
        return v;
    };
    for (int e = 0; e < g.edge_count(); ++e) {
        if (candidate[static_cast<std::size_t>(e)]) continue;
        const auto& edge = g.edge(e);
        parent[static_cast<std::size_t>(find(edge.i))] = find(edge.j);
    }
    std::vector<int> cluster_of(static_cast<std::size_t>(g.node_count()), -1);
    int cluster_count = 0;
    std::vector<int> root_cluster(static_cast<std::size_t>(g.node_count()), -1);
    for (int v = 0; v < g.node_count(); ++v) {
        const int root = find(v);
        if (root_cluster[static_cast<std::size_t>(root)] < 0) {
            root_cluster[static_cast<std::size_t>(root)] = cluster_count++;
        }
        cluster_of[static_cast<std::size_t>(v)] = root_cluster[static_cast<std::size_t>(root)];
    }

    // Removed edges inside one component mean no partition has exactly the
    // candidate set as its boundary.
    for (int e = 0; e < g.edge_count(); ++e) {
        if (!candidate[static_cast<std::size_t>(e)]) continue;
        const auto& edge = g.edge(e);
        if (cluster_of[static_cast<std::size_t>(edge.i)] ==
            cluster_of[static_cast<std::size_t>(edge.j)]) {
            result.status = PostprocessResult::Status::inconsistent_boundary;
            result.detail = "candidate boundary edge " + std::to_string(edge.i + 1) + "-" +
                            std::to_string(edge.j + 1) + " stays within one component";
            return result;
        }
    }

    Partition recovered(cluster_of, cluster_count);

    std::vector<double> sum(static_cast<std::size_t>(cluster_count), 0.0);
    std::vector<int> count(static_cast<std::size_t>(cluster_count), 0);
    for (int k = 0; k < obs.sample_count(); ++k) {
        const int v = obs.nodes()[static_cast<std::size_t>(k)];
        if (v >= g.node_count()) throw std::invalid_argument("sampled node out of range");
        const int c = cluster_of[static_cast<std::size_t>(v)];
        sum[static_cast<std::size_t>(c)] += obs.values()[static_cast<std::size_t>(k)];
        ++count[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < cluster_count; ++c) {
        if (count[static_cast<std::size_t>(c)] == 0) {
            result.status = PostprocessResult::Status::empty_cluster;
            result.detail = "recovered cluster " + std::to_string(c + 1) + " has no samples";
            return result;
        }
    }

    std::vector<double> values(static_cast<std::size_t>(g.node_count()));
    for (int v = 0; v < g.node_count(); ++v) {
        const int c = cluster_of[static_cast<std::size_t>(v)];
        values[static_cast<std::size_t>(v)] =
            sum[static_cast<std::size_t>(c)] / count[static_cast<std::size_t>(c)];
    }

    result.status = PostprocessResult::Status::ok;
    result.signal = GraphSignal(std::move(values));
    result.partition = std::move(recovered);
    return result;
}

}  // namespace netlasso
