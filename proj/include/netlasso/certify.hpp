#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "netlasso/graph.hpp"

namespace netlasso {

/// Flow values on both orientations of every edge plus the realized node
/// demands. forward[e] is h(i,j) along the stored orientation (i < j),
/// backward[e] is h(j,i). Both are non-negative and independent; on
/// non-boundary edges each is bounded by the edge weight, on boundary edges
/// exactly one of them is L*W and the other zero.
struct FlowAssignment {
    std::vector<double> forward;
    std::vector<double> backward;
    std::vector<double> demand;
};

/// Certificate over all boundary orientation patterns. Witnesses are indexed
/// by pattern rank, where patterns are ordered lexicographically over the
/// ascending boundary edge list (all-zeros first).
struct ResolvingCertificate {
    double K = 0.0;
    double L = 0.0;
    bool resolved = false;
    std::vector<int> boundary;
    std::vector<FlowAssignment> witnesses;
    std::optional<std::vector<std::uint8_t>> failing_pattern;
};

class BoundaryTooLargeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Feasibility of one boundary orientation pattern, reduced to a single
/// max-flow: boundary edges carry fixed flows L*W in the direction the
/// pattern dictates, non-boundary edges become capacity-W arcs in both
/// directions, and sampled nodes may produce or consume up to K.
std::optional<FlowAssignment> check_pattern(const DataGraph& g, const Partition& p,
                                            std::span<const int> sampled, double K, double L,
                                            std::span<const std::uint8_t> pattern);

/// Exhaustive check over all 2^|boundary| patterns; refuses boundaries larger
/// than 20 edges. On failure the reported pattern is the lexicographically
/// smallest infeasible one.
ResolvingCertificate resolves(const DataGraph& g, const Partition& p,
                              std::span<const int> sampled, double K, double L,
                              bool store_witnesses = true);

/// Sufficient condition: every boundary edge must have, on each side, a
/// sampled neighbor attached by an edge of weight at least L times the
/// boundary weight. When it applies, K = L * (max number of boundary edges
/// incident to any single node).
struct FlankingResult {
    bool applicable = false;
    double K = 0.0;
    std::optional<int> failing_edge;
};
FlankingResult flanking_condition(const DataGraph& g, const Partition& p,
                                  std::span<const int> sampled, double L);

/// Evaluates K * sum_M |z[i]| + ||z||_{E \ boundary} >= L * ||z||_{boundary}
/// for one signal z; slack is LHS - RHS.
struct CompatibilityCheck {
    bool holds = false;
    double slack = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
};
CompatibilityCheck compatibility_holds(const DataGraph& g, const Partition& p,
                                       std::span<const int> sampled, double K, double L,
                                       const GraphSignal& z);

/// Smallest K (within `tolerance`) for which the sampling set resolves the
/// partition at the given L, or +inf when none exists below 1e6. Exploits the
/// fact that patterns decouple across connected components of the graph with
/// boundary edges removed, so each component's incident boundary (rather than
/// the global boundary) must stay within the exhaustive guard.
double min_feasible_K(const DataGraph& g, const Partition& p, std::span<const int> sampled,
                      double L, double tolerance = 1e-3);

/// Validates one flow assignment against the conservation, capacity, demand
/// and boundary-orientation constraints; used to audit witnesses.
struct FlowAudit {
    bool ok = false;
    double max_violation = 0.0;
    std::string detail;
};
FlowAudit audit_flow(const DataGraph& g, const Partition& p, std::span<const int> sampled,
                     double K, double L, std::span<const std::uint8_t> pattern,
                     const FlowAssignment& flow, double tolerance = 1e-6);

}  // namespace netlasso
