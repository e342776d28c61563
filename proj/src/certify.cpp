#include "netlasso/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "netlasso/maxflow.hpp"

namespace netlasso {

namespace {

constexpr double kFeasSlack = 1e-9;
constexpr double kWeightEps = 1e-12;
constexpr double kMaxK = 1e6;

std::vector<bool> sampled_mask(const DataGraph& g, std::span<const int> sampled) {
    std::vector<bool> mask(static_cast<std::size_t>(g.node_count()), false);
    for (int v : sampled) {
        if (v < 0 || v >= g.node_count()) {
            throw std::invalid_argument("sampled node out of range");
        }
        if (mask[static_cast<std::size_t>(v)]) {
            throw std::invalid_argument("sampled nodes must be distinct");
        }
        mask[static_cast<std::size_t>(v)] = true;
    }
    return mask;
}

struct DemandFlow {
    std::vector<double> forward;   // aligned with the intra edge list
    std::vector<double> backward;
    std::vector<double> demand;    // aligned with the sampled list
};

// Feasibility of a conservation problem with fixed injections, box demands
// |d| <= K at sampled nodes, and per-orientation capacities on intra edges.
// The demand box is realized through a ground node so that production at one
// sampled node can offset consumption at another; a super source/sink pair
// then absorbs the fixed injections (lower-bound transform).
std::optional<DemandFlow> solve_demand_flow(const DataGraph& g, std::span<const int> nodes,
                                            std::span<const int> intra_edges,
                                            std::span<const std::pair<int, double>> injections,
                                            std::span<const int> sampled, double K) {
    const int n = static_cast<int>(nodes.size());
    std::vector<int> local(static_cast<std::size_t>(g.node_count()), -1);
    for (int k = 0; k < n; ++k) local[static_cast<std::size_t>(nodes[k])] = k;

    const int ground = n;
    const int source = n + 1;
    const int sink = n + 2;
    MaxFlow net(n + 3);

    std::vector<int> fwd_arc(intra_edges.size());
    std::vector<int> bwd_arc(intra_edges.size());
    for (std::size_t k = 0; k < intra_edges.size(); ++k) {
        const auto& e = g.edge(intra_edges[k]);
        const int li = local[static_cast<std::size_t>(e.i)];
        const int lj = local[static_cast<std::size_t>(e.j)];
        fwd_arc[k] = net.add_arc(li, lj, e.w);
        bwd_arc[k] = net.add_arc(lj, li, e.w);
    }

    std::vector<int> consume_arc(sampled.size());
    std::vector<int> produce_arc(sampled.size());
    for (std::size_t k = 0; k < sampled.size(); ++k) {
        const int lv = local[static_cast<std::size_t>(sampled[k])];
        consume_arc[k] = net.add_arc(lv, ground, K);
        produce_arc[k] = net.add_arc(ground, lv, K);
    }

    // Each fixed injection is flow exchanged with the outside world, which
    // the ground node stands in for; it therefore carries the complementary
    // excess. On a full-graph problem the injections cancel and the ground
    // excess is zero.
    std::vector<double> excess(static_cast<std::size_t>(n) + 1, 0.0);
    for (const auto& [node, amount] : injections) {
        excess[static_cast<std::size_t>(local[static_cast<std::size_t>(node)])] += amount;
        excess[static_cast<std::size_t>(n)] -= amount;
    }
    double needed = 0.0;
    for (int v = 0; v <= n; ++v) {
        const double ex = excess[static_cast<std::size_t>(v)];
        const int node = v == n ? ground : v;
        if (ex > 0.0) {
            net.add_arc(source, node, ex);
            needed += ex;
        } else if (ex < 0.0) {
            net.add_arc(node, sink, -ex);
        }
    }

    const double flowed = net.solve(source, sink);
    if (flowed < needed - kFeasSlack * std::max(1.0, needed)) return std::nullopt;

    DemandFlow result;
    result.forward.resize(intra_edges.size());
    result.backward.resize(intra_edges.size());
    result.demand.resize(sampled.size());
    for (std::size_t k = 0; k < intra_edges.size(); ++k) {
        result.forward[k] = net.flow_on(fwd_arc[k]);
        result.backward[k] = net.flow_on(bwd_arc[k]);
    }
    for (std::size_t k = 0; k < sampled.size(); ++k) {
        result.demand[k] = net.flow_on(consume_arc[k]) - net.flow_on(produce_arc[k]);
    }
    return result;
}

std::vector<std::pair<int, double>> pattern_injections(const DataGraph& g,
                                                       std::span<const int> boundary,
                                                       std::span<const std::uint8_t> pattern,
                                                       double L) {
    std::vector<std::pair<int, double>> injections;
    injections.reserve(boundary.size() * 2);
    for (std::size_t k = 0; k < boundary.size(); ++k) {
        const auto& e = g.edge(boundary[k]);
        const double amount = L * e.w;
        if (pattern[k]) {
            // h(i,j) = L*W: the flow leaves i and arrives at j.
            injections.emplace_back(e.i, -amount);
            injections.emplace_back(e.j, amount);
        } else {
            injections.emplace_back(e.i, amount);
            injections.emplace_back(e.j, -amount);
        }
    }
    return injections;
}

struct BoundaryComponents {
    std::vector<std::vector<int>> nodes;
    std::vector<std::vector<int>> intra_edges;
    std::vector<std::vector<int>> incident_boundary;
};

BoundaryComponents split_components(const DataGraph& g, std::span<const int> boundary)
{
    std::vector<bool> is_boundary(static_cast<std::size_t>(g.edge_count()), false);
    for (int e : boundary) is_boundary[static_cast<std::size_t>(e)] = true;

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
        if (is_boundary[static_cast<std::size_t>(e)]) continue;
        const auto& edge = g.edge(e);
        parent[static_cast<std::size_t>(find(edge.i))] = find(edge.j);
    }

    std::vector<int> component_of(static_cast<std::size_t>(g.node_count()), -1);
    BoundaryComponents result;
    for (int v = 0; v < g.node_count(); ++v) {
        const int root = find(v);
        if (component_of[static_cast<std::size_t>(root)] < 0) {
            component_of[static_cast<std::size_t>(root)] =
                static_cast<int>(result.nodes.size());
            result.nodes.emplace_back();
            result.intra_edges.emplace_back();
            result.incident_boundary.emplace_back();
        }
        component_of[static_cast<std::size_t>(v)] = component_of[static_cast<std::size_t>(root)];
        result.nodes[static_cast<std::size_t>(component_of[static_cast<std::size_t>(v)])]
            .push_back(v);
    }
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto& edge = g.edge(e);
        if (is_boundary[static_cast<std::size_t>(e)]) {
            // Boundary edges always bridge two components: intra paths stay
            // within one cluster while boundary endpoints lie in two.
            result.incident_boundary[static_cast<std::size_t>(
                                         component_of[static_cast<std::size_t>(edge.i)])]
                .push_back(e);
            result.incident_boundary[static_cast<std::size_t>(
                                         component_of[static_cast<std::size_t>(edge.j)])]
                .push_back(e);
        } else {
            result.intra_edges[static_cast<std::size_t>(
                                   component_of[static_cast<std::size_t>(edge.i)])]
                .push_back(e);
        }
    }
    return result;
}

}  // namespace

std::optional<FlowAssignment> check_pattern(const DataGraph& g, const Partition& p,
                                            std::span<const int> sampled, double K, double L,
                                            std::span<const std::uint8_t> pattern) {
    if (K <= 0.0) throw std::invalid_argument("K must be positive");
    if (L <= 0.0) throw std::invalid_argument("L must be positive");
    sampled_mask(g, sampled);  // id validation

    const std::vector<int> boundary = boundary_edges(g, p);
    if (pattern.size() != boundary.size()) {
        throw std::invalid_argument("pattern length must match the boundary size");
    }
    const std::vector<int> intra = complement_edges(g, boundary);

    std::vector<int> all_nodes(static_cast<std::size_t>(g.node_count()));
    std::iota(all_nodes.begin(), all_nodes.end(), 0);
    const auto injections = pattern_injections(g, boundary, pattern, L);
    std::vector<int> sampled_sorted(sampled.begin(), sampled.end());
    std::sort(sampled_sorted.begin(), sampled_sorted.end());

    const auto local = solve_demand_flow(g, all_nodes, intra, injections, sampled_sorted, K);
    if (!local) return std::nullopt;

    FlowAssignment flow;
    flow.forward.assign(static_cast<std::size_t>(g.edge_count()), 0.0);
    flow.backward.assign(static_cast<std::size_t>(g.edge_count()), 0.0);
    flow.demand.assign(static_cast<std::size_t>(g.node_count()), 0.0);
    for (std::size_t k = 0; k < boundary.size(); ++k) {
        const auto& e = g.edge(boundary[k]);
        const double amount = L * e.w;
        if (pattern[k]) {
            flow.forward[static_cast<std::size_t>(boundary[k])] = amount;
        } else {
            flow.backward[static_cast<std::size_t>(boundary[k])] = amount;
        }
    }
    for (std::size_t k = 0; k < intra.size(); ++k) {
        flow.forward[static_cast<std::size_t>(intra[k])] = local->forward[k];
        flow.backward[static_cast<std::size_t>(intra[k])] = local->backward[k];
    }
    for (std::size_t k = 0; k < sampled_sorted.size(); ++k) {
        flow.demand[static_cast<std::size_t>(sampled_sorted[k])] = local->demand[k];
    }
    return flow;
}

ResolvingCertificate resolves(const DataGraph& g, const Partition& p,
                              std::span<const int> sampled, double K, double L,
                              bool store_witnesses) {
    if (K <= 0.0) throw std::invalid_argument("K must be positive");
    if (L <= 0.0) throw std::invalid_argument("L must be positive");

    ResolvingCertificate cert;
    cert.K = K;
    cert.L = L;
    cert.boundary = boundary_edges(g, p);

    const int b = static_cast<int>(cert.boundary.size());
    if (b > 20) {
        throw BoundaryTooLargeError(
            "boundary has " + std::to_string(b) +
            " edges; exhaustive pattern enumeration is limited to 20");
    }

    const std::uint32_t pattern_count = 1u << b;
    std::vector<std::uint8_t> pattern(static_cast<std::size_t>(b), 0);
    for (std::uint32_t rank = 0; rank < pattern_count; ++rank) {
        // Bit 0 of the pattern is the most significant position so that
        // increasing rank enumerates patterns in lexicographic order.
        for (int k = 0; k < b; ++k) {
            pattern[static_cast<std::size_t>(k)] =
                static_cast<std::uint8_t>((rank >> (b - 1 - k)) & 1u);
        }
        auto witness = check_pattern(g, p, sampled, K, L, pattern);
        if (!witness) {
            cert.resolved = false;
            cert.witnesses.clear();
            cert.failing_pattern = pattern;
            return cert;
        }
        if (store_witnesses) cert.witnesses.push_back(std::move(*witness));
    }
    cert.resolved = true;
    return cert;
}

FlankingResult flanking_condition(const DataGraph& g, const Partition& p,
                                  std::span<const int> sampled, double L) {
    if (L <= 0.0) throw std::invalid_argument("L must be positive");
    const auto mask = sampled_mask(g, sampled);
    const std::vector<int> boundary = boundary_edges(g, p);

    FlankingResult result;
    if (boundary.empty()) return result;  // vacuous: nothing to resolve

    const auto has_strong_sampled_neighbor = [&](int node, double threshold) {
        const int cluster = p.cluster_of(node);
        for (const auto& nb : g.neighbors(node)) {
            if (!mask[static_cast<std::size_t>(nb.node)]) continue;
            if (p.cluster_of(nb.node) != cluster) continue;
            if (nb.weight >= threshold - kWeightEps) return true;
        }
        return false;
    };

    for (int e : boundary) {
        const auto& edge = g.edge(e);
        const double threshold = L * edge.w;
        if (!has_strong_sampled_neighbor(edge.i, threshold) ||
            !has_strong_sampled_neighbor(edge.j, threshold)) {
            result.failing_edge = e;
            return result;
        }
    }

    std::vector<int> incident(static_cast<std::size_t>(g.node_count()), 0);
    for (int e : boundary) {
        ++incident[static_cast<std::size_t>(g.edge(e).i)];
        ++incident[static_cast<std::size_t>(g.edge(e).j)];
    }
    const int max_incident = *std::max_element(incident.begin(), incident.end());

    result.applicable = true;
    result.K = L * static_cast<double>(max_incident);
    return result;
}

CompatibilityCheck compatibility_holds(const DataGraph& g, const Partition& p,
                                       std::span<const int> sampled, double K, double L,
                                       const GraphSignal& z) {
    const auto mask = sampled_mask(g, sampled);
    if (z.size() != g.node_count()) {
        throw std::invalid_argument("signal length does not match the graph");
    }
    const std::vector<int> boundary = boundary_edges(g, p);
    const std::vector<int> interior = complement_edges(g, boundary);

    double sample_mass = 0.0;
    for (int v = 0; v < g.node_count(); ++v) {
        if (mask[static_cast<std::size_t>(v)]) sample_mass += std::abs(z[v]);
    }

    CompatibilityCheck check;
    check.lhs = K * sample_mass + tv_restricted(g, z, interior);
    check.rhs = L * tv_restricted(g, z, boundary);
    check.slack = check.lhs - check.rhs;
    check.holds = check.slack >= -kFeasSlack;
    return check;
}

double min_feasible_K(const DataGraph& g, const Partition& p, std::span<const int> sampled,
                      double L, double tolerance) {
    if (L <= 0.0) throw std::invalid_argument("L must be positive");
    if (tolerance <= 0.0) throw std::invalid_argument("tolerance must be positive");
    const auto mask = sampled_mask(g, sampled);

    const std::vector<int> boundary = boundary_edges(g, p);
    if (boundary.empty()) return 0.0;

    const auto components = split_components(g, boundary);

    double global = 0.0;
    std::vector<std::uint8_t> pattern;
    for (std::size_t c = 0; c < components.nodes.size(); ++c) {
        const auto& nodes = components.nodes[c];
        const auto& intra = components.intra_edges[c];
        const auto& incident = components.incident_boundary[c];
        if (incident.empty()) continue;
        if (incident.size() > 20) {
            throw BoundaryTooLargeError(
                "a component touches " + std::to_string(incident.size()) +
                " boundary edges; exhaustive pattern enumeration is limited to 20");
        }

        std::vector<bool> inside(static_cast<std::size_t>(g.node_count()), false);
        for (int v : nodes) inside[static_cast<std::size_t>(v)] = true;
        std::vector<int> local_sampled;
        for (int v : nodes) {
            if (mask[static_cast<std::size_t>(v)]) local_sampled.push_back(v);
        }

        const auto component_feasible = [&](double K) {
            if (K <= 0.0) K = std::numeric_limits<double>::min();
            const std::uint32_t pattern_count = 1u << incident.size();
            for (std::uint32_t rank = 0; rank < pattern_count; ++rank) {
                std::vector<std::pair<int, double>> injections;
                for (std::size_t k = 0; k < incident.size(); ++k) {
                    const auto& e = g.edge(incident[k]);
                    const double amount = L * e.w;
                    const bool outward_bit = (rank >> k) & 1u;
                    // Only the endpoint inside this component gets an
                    // injection; the opposite endpoint belongs elsewhere.
                    if (inside[static_cast<std::size_t>(e.i)]) {
                        injections.emplace_back(e.i, outward_bit ? -amount : amount);
                    }
                    if (inside[static_cast<std::size_t>(e.j)]) {
                        injections.emplace_back(e.j, outward_bit ? amount : -amount);
                    }
                }
                if (!solve_demand_flow(g, nodes, intra, injections, local_sampled, K)) {
                    return false;
                }
            }
            return true;
        };

        double hi = 1.0;
        while (hi <= kMaxK && !component_feasible(hi)) hi *= 2.0;
        if (hi > kMaxK) {
            if (!component_feasible(kMaxK)) return std::numeric_limits<double>::infinity();
            hi = kMaxK;
        }
        double lo = 0.0;
        while (hi - lo > tolerance) {
            const double mid = 0.5 * (lo + hi);
            if (component_feasible(mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        global = std::max(global, hi);
    }
    return global;
}

FlowAudit audit_flow(const DataGraph& g, const Partition& p, std::span<const int> sampled,
                     double K, double L, std::span<const std::uint8_t> pattern,
                     const FlowAssignment& flow, double tolerance) {
    FlowAudit audit;
    const auto mask = sampled_mask(g, sampled);
    const std::vector<int> boundary = boundary_edges(g, p);
    if (pattern.size() != boundary.size() ||
        flow.forward.size() != static_cast<std::size_t>(g.edge_count()) ||
        flow.backward.size() != static_cast<std::size_t>(g.edge_count()) ||
        flow.demand.size() != static_cast<std::size_t>(g.node_count())) {
        audit.detail = "shape mismatch";
        return audit;
    }

    double worst = 0.0;
    std::string detail;
    const auto note = [&](double violation, const std::string& what) {
        if (violation > worst) {
            worst = violation;
            detail = what;
        }
    };

    std::vector<bool> is_boundary(static_cast<std::size_t>(g.edge_count()), false);
    for (std::size_t k = 0; k < boundary.size(); ++k) {
        const int e = boundary[k];
        is_boundary[static_cast<std::size_t>(e)] = true;
        const double amount = L * g.edge(e).w;
        const double want_fwd = pattern[k] ? amount : 0.0;
        const double want_bwd = pattern[k] ? 0.0 : amount;
        note(std::abs(flow.forward[static_cast<std::size_t>(e)] - want_fwd),
             "boundary orientation");
        note(std::abs(flow.backward[static_cast<std::size_t>(e)] - want_bwd),
             "boundary orientation");
    }
    for (int e = 0; e < g.edge_count(); ++e) {
        if (is_boundary[static_cast<std::size_t>(e)]) continue;
        const double w = g.edge(e).w;
        const double f = flow.forward[static_cast<std::size_t>(e)];
        const double b = flow.backward[static_cast<std::size_t>(e)];
        note(std::max(0.0, -f), "negative flow");
        note(std::max(0.0, -b), "negative flow");
        note(std::max(0.0, f - w), "capacity");
        note(std::max(0.0, b - w), "capacity");
    }

    std::vector<double> net_in(static_cast<std::size_t>(g.node_count()), 0.0);
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto& edge = g.edge(e);
        const double f = flow.forward[static_cast<std::size_t>(e)];
        const double b = flow.backward[static_cast<std::size_t>(e)];
        net_in[static_cast<std::size_t>(edge.i)] += b - f;
        net_in[static_cast<std::size_t>(edge.j)] += f - b;
    }
    for (int v = 0; v < g.node_count(); ++v) {
        note(std::abs(net_in[static_cast<std::size_t>(v)] -
                      flow.demand[static_cast<std::size_t>(v)]),
             "conservation");
        if (mask[static_cast<std::size_t>(v)]) {
            note(std::max(0.0, std::abs(flow.demand[static_cast<std::size_t>(v)]) - K),
                 "demand bound");
        } else {
            note(std::abs(flow.demand[static_cast<std::size_t>(v)]), "unsampled demand");
        }
    }

    audit.max_violation = worst;
    audit.ok = worst <= tolerance;
    audit.detail = audit.ok ? "" : detail;
    return audit;
}

}  // namespace netlasso
