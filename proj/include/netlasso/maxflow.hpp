#pragma once

#include <vector>

namespace netlasso {

/// Dinic max-flow with real-valued capacities. Capacities below 1e-12 are
/// treated as saturated when building level graphs.
class MaxFlow {
public:
    explicit MaxFlow(int node_count);

    int add_node();
    /// Returns an arc id usable with flow_on(); a zero-capacity reverse arc is
    /// created implicitly.
    int add_arc(int from, int to, double capacity);

    double solve(int source, int sink);
    double flow_on(int arc) const;

    int node_count() const { return static_cast<int>(head_.size()); }

private:
    struct Arc {
        int to;
        double cap;
        double orig;
        int next;
    };

    bool build_levels(int source, int sink);

    std::vector<Arc> arcs_;
    std::vector<int> head_;
    std::vector<int> level_;
    std::vector<int> iter_;
};

}  // namespace netlasso
