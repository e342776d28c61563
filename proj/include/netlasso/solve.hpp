#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netlasso/graph.hpp"

namespace netlasso {

struct SolverConfig {
    double lambda = 0.1;
    double rho = 0.01;
    int max_iterations = 300;
    double primal_tol = 0.0;  // 0 disables residual-based stopping
    double dual_tol = 0.0;
    std::uint64_t seed = 0;   // reserved; the solver itself is deterministic
};

struct SolveReport {
    GraphSignal estimate;
    std::vector<double> objective_trace;  // one entry per iteration run
    int iterations_run = 0;
    bool converged = false;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
};

/// l1 empirical error plus lambda times total variation.
double objective(const DataGraph& g, const Observation& obs, const GraphSignal& x,
                 double lambda);

using IterationCallback = std::function<void(int iteration, std::span<const double> x)>;

/// Edge-consensus ADMM. Every edge holds copies of both endpoint values with
/// consensus constraints; the node update is the closed-form prox of the l1
/// fidelity around the mean of edge copies, the edge update soft-thresholds
/// the copy difference while preserving the copy mean, and scaled duals
/// ascend with step rho. Runs max_iterations sweeps unless both residual
/// norms drop below the configured tolerances.
SolveReport nlasso_admm(const DataGraph& g, const Observation& obs, const SolverConfig& cfg,
                        const IterationCallback& on_iteration = {});

/// Exact minimizer via the epigraph LP (auxiliary variables bounding sample
/// deviations and edge differences). Verification-oriented; guarded to
/// N <= 200.
struct LpSolution {
    GraphSignal estimate;
    double value = 0.0;
};
LpSolution lp_oracle(const DataGraph& g, const Observation& obs, double lambda);

/// TV-error guarantee for estimates at lambda = 1/K on a resolving sampling
/// set: (K + 4/(L-1)) * sum of absolute noise over the samples. Requires
/// L > 1 and an observation carrying its true noise.
double recovery_error_bound(double K, double L, const Observation& obs);

/// Boundary detection and per-cluster averaging applied to a solver output:
/// edges with |difference| >= eta/2 form the candidate boundary, connected
/// components of the remaining graph form the recovered partition (rejected
/// if its boundary differs from the candidate set), and every cluster is
/// replaced by the mean of its observed samples (rejected when a cluster has
/// none).
struct PostprocessResult {
    enum class Status { ok, inconsistent_boundary, empty_cluster };
    Status status = Status::ok;
    GraphSignal signal;              // valid when status == ok
    std::optional<Partition> partition;  // recovered clustering when ok
    std::string detail;
};
PostprocessResult postprocess(const DataGraph& g, const Observation& obs,
                              const GraphSignal& estimate, double eta);

}  // namespace netlasso
