#include "netlasso/maxflow.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace netlasso {

namespace {
constexpr double kCapEps = 1e-12;
}

MaxFlow::MaxFlow(int node_count) : head_(static_cast<std::size_t>(node_count), -1) {}

int MaxFlow::add_node() {
    head_.push_back(-1);
    return static_cast<int>(head_.size()) - 1;
}

int MaxFlow::add_arc(int from, int to, double capacity) {
    if (capacity < 0.0) throw std::invalid_argument("arc capacity must be non-negative");
    const int id = static_cast<int>(arcs_.size());
    arcs_.push_back(Arc{to, capacity, capacity, head_[static_cast<std::size_t>(from)]});
    head_[static_cast<std::size_t>(from)] = id;
    arcs_.push_back(Arc{from, 0.0, 0.0, head_[static_cast<std::size_t>(to)]});
    head_[static_cast<std::size_t>(to)] = id + 1;
    return id;
}

bool MaxFlow::build_levels(int source, int sink) {
    level_.assign(head_.size(), -1);
    std::queue<int> frontier;
    level_[static_cast<std::size_t>(source)] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
        const int v = frontier.front();
        frontier.pop();
        for (int a = head_[static_cast<std::size_t>(v)]; a >= 0;
             a = arcs_[static_cast<std::size_t>(a)].next) {
            const Arc& arc = arcs_[static_cast<std::size_t>(a)];
            if (arc.cap > kCapEps && level_[static_cast<std::size_t>(arc.to)] < 0) {
                level_[static_cast<std::size_t>(arc.to)] =
                    level_[static_cast<std::size_t>(v)] + 1;
                frontier.push(arc.to);
            }
        }
    }
    return level_[static_cast<std::size_t>(sink)] >= 0;
}

double MaxFlow::solve(int source, int sink) {
    if (source == sink) return 0.0;
    double total = 0.0;
    std::vector<int> path;  // arc ids from the source to the current node

    // Iterative blocking-flow walk; recursion depth would otherwise scale
    // with the level-graph diameter.
    while (build_levels(source, sink)) {
        iter_.assign(head_.begin(), head_.end());
        path.clear();
        int v = source;
        while (true) {
            if (v == sink) {
                double limit = std::numeric_limits<double>::infinity();
                for (int a : path) limit = std::min(limit, arcs_[static_cast<std::size_t>(a)].cap);
                for (int a : path) {
                    arcs_[static_cast<std::size_t>(a)].cap -= limit;
                    arcs_[static_cast<std::size_t>(a ^ 1)].cap += limit;
                }
                total += limit;
                // Retreat to the tail of the first saturated arc; the
                // minimum arc lands at exactly zero, so one always exists.
                std::size_t cut = 0;
                while (cut < path.size() &&
                       arcs_[static_cast<std::size_t>(path[cut])].cap > kCapEps) {
                    ++cut;
                }
                v = cut == 0 ? source : arcs_[static_cast<std::size_t>(path[cut - 1])].to;
                path.resize(cut);
                continue;
            }
            int a = iter_[static_cast<std::size_t>(v)];
            while (a >= 0) {
                const Arc& arc = arcs_[static_cast<std::size_t>(a)];
                if (arc.cap > kCapEps &&
                    level_[static_cast<std::size_t>(arc.to)] ==
                        level_[static_cast<std::size_t>(v)] + 1) {
                    break;
                }
                a = arc.next;
            }
            iter_[static_cast<std::size_t>(v)] = a;
            if (a >= 0) {
                path.push_back(a);
                v = arcs_[static_cast<std::size_t>(a)].to;
            } else {
                if (v == source) break;  // blocking flow complete
                level_[static_cast<std::size_t>(v)] = -1;  // dead end
                v = path.empty() ? source
                                 : arcs_[static_cast<std::size_t>(path.back() ^ 1)].to;
                if (!path.empty()) path.pop_back();
            }
        }
    }
    return total;
}

double MaxFlow::flow_on(int arc) const {
    const Arc& a = arcs_.at(static_cast<std::size_t>(arc));
    return a.orig - a.cap;
}

}  // namespace netlasso
