#include "netlasso/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace netlasso {

namespace {

void require(bool cond, const std::string& message) {
    if (!cond) throw std::invalid_argument(message);
}

}  // namespace

DataGraph::DataGraph(int node_count, std::vector<WeightedEdge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
    require(node_count_ > 0, "graph needs at least one node");
    for (auto& e : edges_) {
        if (e.i > e.j) std::swap(e.i, e.j);
        require(e.i >= 0 && e.j < node_count_, "edge endpoint out of range");
        require(e.i != e.j, "self-loops are not allowed");
        require(std::isfinite(e.w) && e.w > 0.0, "edge weights must be strictly positive");
    }
    std::sort(edges_.begin(), edges_.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
        return std::pair(a.i, a.j) < std::pair(b.i, b.j);
    });
    for (std::size_t k = 1; k < edges_.size(); ++k) {
        require(edges_[k - 1].i != edges_[k].i || edges_[k - 1].j != edges_[k].j,
                "duplicate edge");
    }

    std::vector<int> deg(static_cast<std::size_t>(node_count_), 0);
    for (const auto& e : edges_) {
        ++deg[static_cast<std::size_t>(e.i)];
        ++deg[static_cast<std::size_t>(e.j)];
    }
    adj_offsets_.assign(static_cast<std::size_t>(node_count_) + 1, 0);
    for (int v = 0; v < node_count_; ++v) {
        adj_offsets_[static_cast<std::size_t>(v) + 1] =
            adj_offsets_[static_cast<std::size_t>(v)] + deg[static_cast<std::size_t>(v)];
    }
    adj_.resize(edges_.size() * 2);
    std::vector<int> cursor(adj_offsets_.begin(), adj_offsets_.end() - 1);
    for (int e = 0; e < edge_count(); ++e) {
        const auto& edge = edges_[static_cast<std::size_t>(e)];
        adj_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(edge.i)]++)] =
            Neighbor{edge.j, edge.w, e};
        adj_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(edge.j)]++)] =
            Neighbor{edge.i, edge.w, e};
    }
    // Edge list order already leaves each neighbor run sorted by node id for
    // the second endpoint but not the first, so sort per node.
    for (int v = 0; v < node_count_; ++v) {
        auto begin = adj_.begin() + adj_offsets_[static_cast<std::size_t>(v)];
        auto end = adj_.begin() + adj_offsets_[static_cast<std::size_t>(v) + 1];
        std::sort(begin, end,
                  [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    }
}

std::span<const DataGraph::Neighbor> DataGraph::neighbors(int i) const {
    const auto lo = adj_offsets_.at(static_cast<std::size_t>(i));
    const auto hi = adj_offsets_[static_cast<std::size_t>(i) + 1];
    return {adj_.data() + lo, static_cast<std::size_t>(hi - lo)};
}

int DataGraph::degree(int i) const { return static_cast<int>(neighbors(i).size()); }

double DataGraph::weighted_degree(int i) const {
    double sum = 0.0;
    for (const auto& nb : neighbors(i)) sum += nb.weight;
    return sum;
}

std::optional<int> DataGraph::find_edge(int i, int j) const {
    if (i < 0 || j < 0 || i >= node_count_ || j >= node_count_ || i == j) return std::nullopt;
    const auto nbrs = neighbors(i);
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), j,
                               [](const Neighbor& n, int v) { return n.node < v; });
    if (it != nbrs.end() && it->node == j) return it->edge;
    return std::nullopt;
}

GraphSignal::GraphSignal(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("graph signal values must be finite");
    }
}

GraphSignal GraphSignal::zeros(int n) {
    return GraphSignal(std::vector<double>(static_cast<std::size_t>(n), 0.0));
}

Partition::Partition(std::vector<int> cluster_of, int cluster_count)
    : cluster_of_(std::move(cluster_of)), cluster_count_(cluster_count) {
    require(cluster_count_ > 0, "partition needs at least one cluster");
    require(!cluster_of_.empty(), "partition needs at least one node");
    std::vector<bool> seen(static_cast<std::size_t>(cluster_count_), false);
    for (int c : cluster_of_) {
        require(c >= 0 && c < cluster_count_, "cluster index out of range");
        seen[static_cast<std::size_t>(c)] = true;
    }
    for (bool s : seen) require(s, "every cluster must be non-empty");
}

Partition Partition::from_cluster_of(std::vector<int> cluster_of) {
    int max_cluster = -1;
    for (int c : cluster_of) max_cluster = std::max(max_cluster, c);
    return Partition(std::move(cluster_of), max_cluster + 1);
}

Observation::Observation(std::vector<int> nodes, std::vector<double> values,
                         std::optional<std::vector<double>> noise)
    : nodes_(std::move(nodes)), values_(std::move(values)), noise_(std::move(noise)) {
    require(nodes_.size() == values_.size(), "one observed value per sampled node");
    if (noise_) require(noise_->size() == nodes_.size(), "one noise value per sampled node");

    std::vector<std::size_t> order(nodes_.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return nodes_[a] < nodes_[b]; });
    std::vector<int> n;
    std::vector<double> v, e;
    n.reserve(nodes_.size());
    v.reserve(values_.size());
    if (noise_) e.reserve(noise_->size());
    for (std::size_t k : order) {
        n.push_back(nodes_[k]);
        v.push_back(values_[k]);
        if (noise_) e.push_back((*noise_)[k]);
    }
    nodes_ = std::move(n);
    values_ = std::move(v);
    if (noise_) noise_ = std::move(e);

    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        require(nodes_[k] >= 0, "sampled node ids must be non-negative");
        if (k > 0) require(nodes_[k] != nodes_[k - 1], "sampled nodes must be distinct");
        require(std::isfinite(values_[k]), "observed values must be finite");
    }
}

bool Observation::is_sampled(int node) const {
    return std::binary_search(nodes_.begin(), nodes_.end(), node);
}

double Observation::value_at(int node) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), node);
    if (it == nodes_.end() || *it != node) {
        throw std::invalid_argument("node is not in the sampling set");
    }
    return values_[static_cast<std::size_t>(it - nodes_.begin())];
}

namespace {

void require_signal_size(const DataGraph& g, const GraphSignal& x) {
    if (x.size() != g.node_count()) {
        throw std::invalid_argument("signal length does not match the graph");
    }
}

}  // namespace

double total_variation(const DataGraph& g, const GraphSignal& x) {
    require_signal_size(g, x);
    double tv = 0.0;
    for (const auto& e : g.edges()) tv += e.w * std::abs(x[e.j] - x[e.i]);
    return tv;
}

double tv_restricted(const DataGraph& g, const GraphSignal& x, std::span<const int> edge_subset) {
    require_signal_size(g, x);
    std::vector<int> sorted(edge_subset.begin(), edge_subset.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        if (sorted[k] < 0 || sorted[k] >= g.edge_count()) {
            throw std::invalid_argument("edge subset refers to an edge not in the graph");
        }
        if (k > 0 && sorted[k] == sorted[k - 1]) {
            throw std::invalid_argument("edge subset contains duplicates");
        }
    }
    double tv = 0.0;
    for (int e : sorted) {
        const auto& edge = g.edge(e);
        tv += edge.w * std::abs(x[edge.j] - x[edge.i]);
    }
    return tv;
}

std::vector<int> boundary_edges(const DataGraph& g, const Partition& p) {
    if (p.node_count() != g.node_count()) {
        throw std::invalid_argument("partition does not match the graph");
    }
    std::vector<int> result;
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto& edge = g.edge(e);
        if (p.cluster_of(edge.i) != p.cluster_of(edge.j)) result.push_back(e);
    }
    return result;
}

std::vector<int> complement_edges(const DataGraph& g, std::span<const int> edge_subset) {
    std::vector<bool> in(static_cast<std::size_t>(g.edge_count()), false);
    for (int e : edge_subset) in.at(static_cast<std::size_t>(e)) = true;
    std::vector<int> result;
    result.reserve(static_cast<std::size_t>(g.edge_count()) - edge_subset.size());
    for (int e = 0; e < g.edge_count(); ++e) {
        if (!in[static_cast<std::size_t>(e)]) result.push_back(e);
    }
    return result;
}

GraphSignal clustered_signal(const Partition& p, std::span<const double> coeffs) {
    if (static_cast<int>(coeffs.size()) != p.cluster_count()) {
        throw std::invalid_argument("one coefficient per cluster required");
    }
    std::vector<double> values(static_cast<std::size_t>(p.node_count()));
    for (int i = 0; i < p.node_count(); ++i) {
        values[static_cast<std::size_t>(i)] = coeffs[static_cast<std::size_t>(p.cluster_of(i))];
    }
    return GraphSignal(std::move(values));
}

double tv_upper_bound(const Partition& p, std::span<const double> coeffs, const DataGraph& g) {
    if (static_cast<int>(coeffs.size()) != p.cluster_count()) {
        throw std::invalid_argument("one coefficient per cluster required");
    }
    double max_abs = 0.0;
    for (double a : coeffs) max_abs = std::max(max_abs, std::abs(a));
    double boundary_weight = 0.0;
    for (int e : boundary_edges(g, p)) boundary_weight += g.edge(e).w;
    return 2.0 * max_abs * boundary_weight;
}

double empirical_error(const Observation& obs, const GraphSignal& x) {
    double err = 0.0;
    for (int k = 0; k < obs.sample_count(); ++k) {
        const int node = obs.nodes()[static_cast<std::size_t>(k)];
        if (node >= x.size()) throw std::invalid_argument("sampled node outside the signal");
        err += std::abs(x[node] - obs.values()[static_cast<std::size_t>(k)]);
    }
    return err;
}

double nmse(const GraphSignal& estimate, const GraphSignal& truth) {
    if (estimate.size() != truth.size()) {
        throw std::invalid_argument("signals must have equal length");
    }
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < truth.size(); ++i) {
        const double d = estimate[i] - truth[i];
        num += d * d;
        den += truth[i] * truth[i];
    }
    if (den == 0.0) throw std::invalid_argument("nmse undefined for an identically zero signal");
    return num / den;
}

}  // namespace netlasso
