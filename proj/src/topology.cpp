#include "ehrp/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

#include "ehrp/clustering.hpp"
#include "ehrp/rng.hpp"

namespace ehrp {

GridLattice choose_lattice(int grid_count, double area_w, double area_h) {
    if (grid_count < 1) throw std::invalid_argument("choose_lattice: grid_count < 1");
    if (area_w <= 0.0 || area_h <= 0.0)
        throw std::invalid_argument("choose_lattice: nonpositive area");

    GridLattice best{};
    double best_score = -1.0;
    for (int cols = 1; cols <= grid_count; ++cols) {
        if (grid_count % cols != 0) continue;
        const int rows = grid_count / cols;
        const double cell_w = area_w / cols;
        const double cell_h = area_h / rows;
        const double aspect = cell_w / cell_h;
        if (aspect < 0.25 || aspect > 4.0) continue;
        const double score = std::abs(aspect - 1.0);
        if (best_score < 0.0 || score < best_score ||
            (score == best_score && cols > best.cols)) {
            best = GridLattice{rows, cols, cell_w, cell_h};
            best_score = score;
        }
    }
    if (best_score < 0.0)
        throw std::invalid_argument(
            "choose_lattice: no rows x cols factorization of " +
            std::to_string(grid_count) + " keeps cell aspect within [1/4, 4]");
    return best;
}

Deployment deploy(int node_count, double area_w, double area_h,
                  double initial_energy, std::uint64_t seed) {
    if (node_count < kNodesPerGrid)
        throw std::invalid_argument("deploy: node_count must be >= 5");
    if (node_count % kNodesPerGrid != 0)
        throw std::invalid_argument("deploy: node_count must be divisible by 5");
    if (initial_energy < 0.0)
        throw std::invalid_argument("deploy: negative initial energy");

    const int grid_count = node_count / kNodesPerGrid;
    Deployment d;
    d.lattice = choose_lattice(grid_count, area_w, area_h);

    Rng rng(derive_seed(seed, 0xDE9107ull));
    d.nodes.reserve(node_count);
    d.grids.reserve(grid_count);

    for (int row = 0; row < d.lattice.rows; ++row) {
        for (int col = 0; col < d.lattice.cols; ++col) {
            const int gid = row * d.lattice.cols + col;
            VirtualGrid g;
            g.id = gid;
            g.row = row;
            g.col = col;
            g.bounds = Rect{col * d.lattice.cell_w, row * d.lattice.cell_h,
                            (col + 1) * d.lattice.cell_w, (row + 1) * d.lattice.cell_h};
            for (int k = 0; k < kNodesPerGrid; ++k) {
                NodeState n;
                n.id = static_cast<NodeId>(d.nodes.size());
                n.position = {rng.uniform(g.bounds.x0, g.bounds.x1),
                              rng.uniform(g.bounds.y0, g.bounds.y1)};
                n.energy = EnergyAccount(initial_energy);
                n.grid_id = gid;
                g.member_ids.push_back(n.id);
                d.nodes.push_back(n);
            }
            d.grids.push_back(std::move(g));
        }
    }

    for (auto& g : d.grids) {
        initial_ch_election(g, d.nodes);
        ++d.elections_performed;
    }
    return d;
}

CommGraph CommGraph::build(std::span<const NodeState> nodes, double comm_range) {
    if (comm_range <= 0.0)
        throw std::invalid_argument("rebuild_comm_graph: comm_range must be positive");

    CommGraph g;
    const int n = static_cast<int>(nodes.size());
    g.adj_.resize(n);
    g.present_.assign(n, 0);
    for (const auto& node : nodes)
        if (node.alive()) {
            g.present_[node.id] = 1;
            ++g.present_count_;
        }

    // Bucket nodes on a comm_range pitch so neighbor search is local.
    double max_x = 1.0, max_y = 1.0;
    for (const auto& node : nodes) {
        max_x = std::max(max_x, node.position.x);
        max_y = std::max(max_y, node.position.y);
    }
    const int bx = std::max(1, static_cast<int>(max_x / comm_range) + 1);
    const int by = std::max(1, static_cast<int>(max_y / comm_range) + 1);
    std::vector<std::vector<NodeId>> buckets(static_cast<std::size_t>(bx) * by);
    auto bucket_of = [&](Position p) {
        int cx = std::min(bx - 1, static_cast<int>(p.x / comm_range));
        int cy = std::min(by - 1, static_cast<int>(p.y / comm_range));
        return cy * bx + cx;
    };
    for (const auto& node : nodes)
        if (node.alive()) buckets[bucket_of(node.position)].push_back(node.id);

    for (const auto& node : nodes) {
        if (!node.alive()) continue;
        const int cx = std::min(bx - 1, static_cast<int>(node.position.x / comm_range));
        const int cy = std::min(by - 1, static_cast<int>(node.position.y / comm_range));
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int nx = cx + dx, ny = cy + dy;
                if (nx < 0 || nx >= bx || ny < 0 || ny >= by) continue;
                for (NodeId other : buckets[ny * bx + nx]) {
                    if (other <= node.id) continue;  // add each pair once
                    const double dist =
                        euclidean_distance(node.position, nodes[other].position);
                    if (dist <= comm_range) {
                        g.adj_[node.id].push_back({other, dist, g.edge_capacity_++});
                        g.adj_[other].push_back({node.id, dist, g.edge_capacity_++});
                    }
                }
            }
        }
    }
    // Neighbor lists sorted by id for deterministic iteration.
    for (auto& lst : g.adj_)
        std::sort(lst.begin(), lst.end(),
                  [](const Edge& a, const Edge& b) { return a.to < b.to; });
    return g;
}

CommGraph CommGraph::build_from_edges(std::span<const NodeState> nodes,
                                      std::span<const std::pair<NodeId, NodeId>> edges) {
    CommGraph g;
    const int n = static_cast<int>(nodes.size());
    g.adj_.resize(n);
    g.present_.assign(n, 0);
    for (const auto& node : nodes)
        if (node.alive()) {
            g.present_[node.id] = 1;
            ++g.present_count_;
        }
    for (auto [a, b] : edges) {
        if (a == b) throw std::invalid_argument("build_from_edges: self loop");
        if (a < 0 || b < 0 || a >= n || b >= n)
            throw std::invalid_argument("build_from_edges: endpoint out of range");
        if (!g.present_[a] || !g.present_[b]) continue;
        if (g.has_edge(a, b)) continue;
        const double dist = euclidean_distance(nodes[a].position, nodes[b].position);
        g.adj_[a].push_back({b, dist, g.edge_capacity_++});
        g.adj_[b].push_back({a, dist, g.edge_capacity_++});
    }
    for (auto& lst : g.adj_)
        std::sort(lst.begin(), lst.end(),
                  [](const Edge& a, const Edge& b) { return a.to < b.to; });
    return g;
}

bool CommGraph::has_edge(NodeId a, NodeId b) const {
    return edge_index(a, b) >= 0;
}

int CommGraph::edge_index(NodeId a, NodeId b) const {
    if (!contains(a) || !contains(b)) return -1;
    for (const auto& e : adj_[a])
        if (e.to == b) return e.idx;
    return -1;
}

void CommGraph::remove_node(NodeId id) {
    if (!contains(id)) return;
    for (const auto& e : adj_[id]) {
        auto& lst = adj_[e.to];
        lst.erase(std::remove_if(lst.begin(), lst.end(),
                                 [id](const Edge& x) { return x.to == id; }),
                  lst.end());
    }
    adj_[id].clear();
    present_[id] = 0;
    --present_count_;
}

bool CommGraph::reachable(NodeId src, NodeId dst) const {
    if (!contains(src) || !contains(dst)) return false;
    if (src == dst) return true;
    std::vector<char> seen(adj_.size(), 0);
    std::deque<NodeId> q{src};
    seen[src] = 1;
    while (!q.empty()) {
        const NodeId u = q.front();
        q.pop_front();
        for (const auto& e : adj_[u]) {
            if (e.to == dst) return true;
            if (!seen[e.to]) {
                seen[e.to] = 1;
                q.push_back(e.to);
            }
        }
    }
    return false;
}

}  // namespace ehrp
