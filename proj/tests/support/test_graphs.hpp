#pragma once

// Test-only oracles and generators. The Dijkstra oracle is deliberately
// independent of the ant-colony code path it cross-checks.

#include <algorithm>
#include <limits>
#include <queue>
#include <vector>

#include "ehrp/node.hpp"
#include "ehrp/rng.hpp"
#include "ehrp/topology.hpp"

namespace ehrp::test {

/// Exact shortest path length by distance between src and dst; infinity when
/// disconnected.
inline double dijkstra_length(const CommGraph& g, NodeId src, NodeId dst) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(g.node_capacity(), kInf);
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[src] = 0.0;
    pq.emplace(0.0, src);
    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        if (u == dst) return d;
        for (const auto& e : g.neighbors(u)) {
            const double nd = d + e.dist;
            if (nd < dist[e.to]) {
                dist[e.to] = nd;
                pq.emplace(nd, e.to);
            }
        }
    }
    return dist[dst];
}

struct TestGraph {
    std::vector<NodeState> nodes;
    CommGraph graph;
};

/// Random connected geometric graph: n points uniform in a side x side
/// square, radius graph over them; resamples until connected. Node energies
/// uniform at `energy`.
inline TestGraph random_connected_graph(int n, double side, double radius,
                                        double energy, Rng& rng) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        TestGraph tg;
        tg.nodes.reserve(n);
        for (int i = 0; i < n; ++i) {
            NodeState node;
            node.id = i;
            node.position = {rng.uniform(0.0, side), rng.uniform(0.0, side)};
            node.energy = EnergyAccount(energy);
            tg.nodes.push_back(node);
        }
        tg.graph = CommGraph::build(tg.nodes, radius);
        bool connected = true;
        for (int i = 1; i < n && connected; ++i)
            connected = tg.graph.reachable(0, i);
        if (connected) return tg;
    }
    throw std::runtime_error("random_connected_graph: could not generate (radius too small?)");
}

}  // namespace ehrp::test
