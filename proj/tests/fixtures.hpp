#pragma once

#include <utility>
#include <vector>

#include "netlasso/graph.hpp"
#include "netlasso/rng.hpp"

namespace netlasso::testing {

/// Ten-node chain split into two clusters of five consecutive nodes:
/// intra-cluster weights 1, single crossing edge weight 1/2.
inline std::pair<DataGraph, Partition> two_cluster_chain() {
    std::vector<WeightedEdge> edges;
    for (int i = 0; i + 1 < 10; ++i) {
        edges.push_back(WeightedEdge{i, i + 1, i == 4 ? 0.5 : 1.0});
    }
    std::vector<int> cluster_of(10, 0);
    for (int i = 5; i < 10; ++i) cluster_of[static_cast<std::size_t>(i)] = 1;
    return {DataGraph(10, std::move(edges)), Partition(std::move(cluster_of), 2)};
}

/// Two dense six-node clusters joined by a single bridge of weight 1; each
/// bridge endpoint has a dedicated in-cluster sampled neighbor attached with
/// weight 4. Sampling set {4, 9} (0-based).
struct BridgeFixture {
    DataGraph graph;
    Partition partition;
    std::vector<int> sampled;
    int bridge_edge;
};

inline BridgeFixture bridge_fixture() {
    // Cluster 0: nodes 0..5 with the bridge endpoint 5 and its sampled
    // neighbor 4. Cluster 1 mirrors it on nodes 6..11.
    std::vector<WeightedEdge> edges = {
        {0, 1, 1.0}, {0, 3, 1.0}, {0, 5, 1.0}, {1, 2, 1.0}, {1, 4, 1.0},
        {2, 3, 1.0}, {2, 5, 1.0}, {3, 4, 1.0}, {4, 5, 4.0},
        {6, 7, 1.0}, {6, 9, 4.0}, {6, 11, 1.0}, {7, 8, 1.0}, {7, 10, 1.0},
        {8, 9, 1.0}, {8, 11, 1.0}, {9, 10, 1.0}, {10, 11, 1.0},
        {5, 6, 1.0},
    };
    std::vector<int> cluster_of(12, 0);
    for (int i = 6; i < 12; ++i) cluster_of[static_cast<std::size_t>(i)] = 1;
    DataGraph g(12, std::move(edges));
    const int bridge = *g.find_edge(5, 6);
    return BridgeFixture{std::move(g), Partition(std::move(cluster_of), 2), {4, 9}, bridge};
}

/// Connected random graph: a random spanning tree plus extra random edges,
/// weights uniform in [w_lo, w_hi].
inline DataGraph random_connected_graph(int n, int extra_edges, double w_lo, double w_hi,
                                        Rng& rng) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    rng.shuffle(perm);

    std::vector<WeightedEdge> edges;
    std::vector<std::vector<bool>> adj(static_cast<std::size_t>(n),
                                       std::vector<bool>(static_cast<std::size_t>(n), false));
    const auto add = [&](int a, int b) {
        if (a == b || adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) return false;
        adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
        adj[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = true;
        edges.push_back(WeightedEdge{a, b, rng.uniform(w_lo, w_hi)});
        return true;
    };
    for (int k = 1; k < n; ++k) {
        add(perm[static_cast<std::size_t>(k)],
            perm[static_cast<std::size_t>(rng.uniform_int(0, k - 1))]);
    }
    int placed = 0;
    int attempts = 0;
    while (placed < extra_edges && attempts++ < 50 * (extra_edges + 1)) {
        if (add(rng.uniform_int(0, n - 1), rng.uniform_int(0, n - 1))) ++placed;
    }
    return DataGraph(n, std::move(edges));
}

/// Random signal with entries uniform in [lo, hi].
inline GraphSignal random_signal(int n, double lo, double hi, Rng& rng) {
    std::vector<double> values(static_cast<std::size_t>(n));
    for (double& v : values) v = rng.uniform(lo, hi);
    return GraphSignal(std::move(values));
}

}  // namespace netlasso::testing
