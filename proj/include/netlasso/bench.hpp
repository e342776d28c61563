#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netlasso/graph.hpp"
#include "netlasso/rng.hpp"

namespace netlasso {

struct WeightDistribution {
    enum class Kind { abs_normal, uniform, constant };
    Kind kind = Kind::abs_normal;
    double a = 2.0;   // abs_normal: mean; uniform: lo; constant: value
    double b = 0.25;  // abs_normal: variance; uniform: hi

    double sample(Rng& rng) const;

    static WeightDistribution absolute_normal(double mean, double variance) {
        return {Kind::abs_normal, mean, variance};
    }
    static WeightDistribution uniform(double lo, double hi) { return {Kind::uniform, lo, hi}; }
    static WeightDistribution constant(double value) { return {Kind::constant, value, 0.0}; }
};

/// Chain of n nodes in consecutive equal-size clusters; edge weights drawn
/// from the intra distribution inside clusters and the inter distribution on
/// the single edge between consecutive clusters.
std::pair<DataGraph, Partition> generate_chain(int n, int cluster_size,
                                               const WeightDistribution& intra,
                                               const WeightDistribution& inter,
                                               std::uint64_t seed);

struct PlantedPartitionSpec {
    int community_count = 16;
    double size_exponent = 2.0;  // power-law exponent of community sizes
    double min_community_size = 10;
    double avg_degree = 10.0;
    double mixing = 0.1;  // fraction of edge endpoints crossing communities
};

/// Communities with power-law sizes, dense intra-community wiring (each
/// community is spanning-tree connected), sparse cross-community edges, and
/// heavier intra-community weights. The output graph is connected.
std::pair<DataGraph, Partition> generate_planted_partition(int n,
                                                           const PlantedPartitionSpec& spec,
                                                           const WeightDistribution& intra,
                                                           const WeightDistribution& inter,
                                                           std::uint64_t seed);

enum class BoundaryMode {
    /// Per boundary edge, pick on each side the strongest same-cluster
    /// neighbor meeting the flanking weight threshold; fall back to the
    /// boundary endpoint itself when none qualifies.
    flanking,
    /// Scan all edges in ascending weight order and add the highest-degree
    /// neighbor of each endpoint.
    edge_sorted,
};

struct SampleSet {
    std::vector<int> nodes;  // ascending
    bool partial_coverage = false;
};

SampleSet sample_boundary_guided(const DataGraph& g, const Partition& p, int budget,
                                 BoundaryMode mode, std::uint64_t seed, double flank_L = 2.0);

std::vector<int> sample_uniform(const DataGraph& g, int budget, std::uint64_t seed);

struct SolverSettings {
    double rho = 0.01;
    int iterations = 300;
    std::optional<double> lambda;  // default: 1/K from the certificate
};

struct ExperimentSpec {
    enum class Family { chain, planted_partition };
    enum class Sampler { boundary_guided, uniform_random };

    std::string name = "custom";
    Family family = Family::chain;
    int n_nodes = 10000;
    int cluster_size = 10;  // chain family
    PlantedPartitionSpec planted;
    WeightDistribution intra_weight = WeightDistribution::absolute_normal(2.0, 0.25);
    WeightDistribution inter_weight = WeightDistribution::absolute_normal(1.0, 0.25);
    double noise_sigma = 0.0;
    int sample_budget = 2000;
    Sampler sampler = Sampler::boundary_guided;
    bool with_label_propagation = false;
    SolverSettings solver;
    double certificate_L = 2.0;
    std::uint64_t seed = 1;
};

struct MethodRun {
    std::string method;   // "nlasso" or "label_propagation"
    std::string sampler;  // "m1" (spec sampler) or "m2" (uniform)
    std::vector<double> nmse_trace;
    double final_nmse = 0.0;
};

struct ExperimentResult {
    ExperimentSpec spec;
    double certificate_K = 0.0;
    double certificate_L = 0.0;
    std::string certificate_method;  // "min_feasible_k", "flanking" or "boundary_degree"
    double lambda_used = 0.0;
    bool m1_partial_coverage = false;
    std::vector<MethodRun> runs;
    // First up-to-100 nodes of the truth and the two recoveries, for plots.
    std::vector<double> head_truth;
    std::vector<double> head_m1;
    std::vector<double> head_m2;
};

/// Generate, sample with both the configured sampler (M1) and uniformly (M2),
/// observe with Gaussian noise, solve, and trace the NMSE per iteration.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Runs specs on a worker pool capped by NETLASSO_THREADS (default: hardware
/// concurrency). Results are positionally aligned with the input.
std::vector<ExperimentResult> run_experiments(const std::vector<ExperimentSpec>& specs);

/// Writes result.json, nmse_trace.csv and signal_head.csv atomically.
void write_result(const ExperimentResult& result, const std::filesystem::path& out_dir);

ExperimentSpec load_experiment_spec(std::istream& in);
void save_experiment_spec(const ExperimentSpec& spec, std::ostream& out);

/// Presets mirroring the shipped experiment configurations; full_scale bumps
/// the node counts from desk scale to the large configuration.
ExperimentSpec chain_noiseless_preset(bool full_scale = false);
ExperimentSpec chain_noisy_preset(bool full_scale = false);
ExperimentSpec lfr_like_preset(bool full_scale = false);

}  // namespace netlasso
