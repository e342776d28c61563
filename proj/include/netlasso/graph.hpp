#pragma once

#include <optional>
#include <span>
#include <vector>

namespace netlasso {

struct WeightedEdge {
    int i = 0;  // endpoint with the smaller id
    int j = 0;
    double w = 0.0;  // strictly positive; absence of an edge means weight zero
};

/// Undirected weighted graph with dense 0-based node ids. Immutable after
/// construction; CSR adjacency is kept consistent with the canonical edge
/// list (edges stored once with i < j, sorted ascending).
class DataGraph {
public:
    struct Neighbor {
        int node;
        double weight;
        int edge;  // index into edges()
    };

    DataGraph(int node_count, std::vector<WeightedEdge> edges);

    int node_count() const noexcept { return node_count_; }
    int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
    const std::vector<WeightedEdge>& edges() const noexcept { return edges_; }
    const WeightedEdge& edge(int e) const { return edges_.at(static_cast<std::size_t>(e)); }

    /// Neighbors of node i, sorted by node id.
    std::span<const Neighbor> neighbors(int i) const;
    int degree(int i) const;
    /// Sum of incident edge weights (the Laplacian diagonal entry).
    double weighted_degree(int i) const;

    /// Edge index for {i, j}, or nullopt when not adjacent.
    std::optional<int> find_edge(int i, int j) const;

private:
    int node_count_;
    std::vector<WeightedEdge> edges_;
    std::vector<int> adj_offsets_;
    std::vector<Neighbor> adj_;
};

/// Real-valued node labeling; values are finite and the length must match the
/// graph the signal is used with.
class GraphSignal {
public:
    GraphSignal() = default;
    explicit GraphSignal(std::vector<double> values);
    static GraphSignal zeros(int n);

    int size() const noexcept { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

/// Disjoint clusters covering all nodes. Cluster indices are dense 0-based;
/// every cluster is non-empty.
class Partition {
public:
    Partition(std::vector<int> cluster_of, int cluster_count);
    static Partition from_cluster_of(std::vector<int> cluster_of);

    int node_count() const noexcept { return static_cast<int>(cluster_of_.size()); }
    int cluster_count() const noexcept { return cluster_count_; }
    int cluster_of(int node) const { return cluster_of_[static_cast<std::size_t>(node)]; }
    const std::vector<int>& assignments() const noexcept { return cluster_of_; }

private:
    std::vector<int> cluster_of_;
    int cluster_count_;
};

/// Noisy samples y[i] on a sampling set, optionally carrying the true noise
/// e[i] for synthetic runs. Nodes are kept sorted ascending.
class Observation {
public:
    Observation(std::vector<int> nodes, std::vector<double> values,
                std::optional<std::vector<double>> noise = std::nullopt);

    int sample_count() const noexcept { return static_cast<int>(nodes_.size()); }
    const std::vector<int>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& values() const noexcept { return values_; }
    bool has_noise() const noexcept { return noise_.has_value(); }
    const std::vector<double>& noise() const { return *noise_; }

    bool is_sampled(int node) const;
    /// Observed value at a sampled node; throws if the node is unsampled.
    double value_at(int node) const;

private:
    std::vector<int> nodes_;
    std::vector<double> values_;
    std::optional<std::vector<double>> noise_;
};

// --- Seminorms and the clustered signal model ---

/// Total variation: sum over edges of W_{i,j} |x[j] - x[i]|, accumulated in
/// ascending edge order.
double total_variation(const DataGraph& g, const GraphSignal& x);

/// Restriction of the TV sum to a subset of edges (given as edge indices,
/// duplicates rejected).
double tv_restricted(const DataGraph& g, const GraphSignal& x, std::span<const int> edge_subset);

/// Edges whose endpoints lie in different clusters, ascending edge indices.
std::vector<int> boundary_edges(const DataGraph& g, const Partition& p);

/// Ascending edge indices of E minus the given sorted subset.
std::vector<int> complement_edges(const DataGraph& g, std::span<const int> edge_subset);

/// Piecewise-constant signal taking coeffs[l] on cluster l.
GraphSignal clustered_signal(const Partition& p, std::span<const double> coeffs);

/// 2 max_l |a_l| * (total boundary weight); dominates the TV of the
/// corresponding clustered signal.
double tv_upper_bound(const Partition& p, std::span<const double> coeffs, const DataGraph& g);

/// l1 training error over the sampling set.
double empirical_error(const Observation& obs, const GraphSignal& x);

/// Normalized mean squared error: sum (x_hat - x)^2 / sum x^2.
double nmse(const GraphSignal& estimate, const GraphSignal& truth);

}  // namespace netlasso
