#include "ehrp/clustering.hpp"

#include <algorithm>

namespace ehrp {

namespace {

void assign_roles(VirtualGrid& grid, std::span<NodeState> nodes) {
    for (NodeId m : grid.member_ids) {
        NodeRole r = NodeRole::Member;
        if (m == grid.ch_id)
            r = NodeRole::ClusterHead;
        else if (m == grid.backup_ch_id)
            r = NodeRole::BackupClusterHead;
        nodes[m].role = r;
    }
}

}  // namespace

std::vector<NodeId> energy_sorted_members(const VirtualGrid& grid,
                                          std::span<const NodeState> nodes) {
    std::vector<NodeId> order;
    order.reserve(grid.member_ids.size());
    for (NodeId m : grid.member_ids)
        if (nodes[m].alive()) order.push_back(m);
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        const double ea = nodes[a].residual_energy();
        const double eb = nodes[b].residual_energy();
        if (ea != eb) return ea > eb;
        return a < b;
    });
    return order;
}

void initial_ch_election(VirtualGrid& grid, std::span<NodeState> nodes) {
    grid.rotation_order = energy_sorted_members(grid, nodes);
    if (grid.rotation_order.empty()) {
        grid.ch_id = kNoNode;
        grid.backup_ch_id = kNoNode;
        grid.active = false;
        return;
    }
    grid.ch_id = grid.rotation_order[0];
    grid.backup_ch_id =
        grid.rotation_order.size() >= 2 ? grid.rotation_order[1] : kNoNode;
    grid.active = true;
    grid.last_refresh = 0;
    assign_roles(grid, nodes);
}

NodeId rotate_ch(const VirtualGrid& grid, std::span<const NodeState> nodes, long round) {
    const auto n = static_cast<long>(grid.rotation_order.size());
    if (n == 0) return kNoNode;
    const long start = round % n;
    for (long k = 0; k < n; ++k) {
        const NodeId cand = grid.rotation_order[(start + k) % n];
        if (nodes[cand].alive()) return cand;
    }
    return kNoNode;
}

NodeId next_alive_after(const VirtualGrid& grid, std::span<const NodeState> nodes,
                        NodeId after) {
    const auto n = static_cast<long>(grid.rotation_order.size());
    if (n == 0) return kNoNode;
    long pos = 0;
    for (long i = 0; i < n; ++i)
        if (grid.rotation_order[i] == after) {
            pos = i;
            break;
        }
    for (long k = 1; k < n; ++k) {
        const NodeId cand = grid.rotation_order[(pos + k) % n];
        if (cand != after && nodes[cand].alive()) return cand;
    }
    return kNoNode;
}

void refresh_energy_order(VirtualGrid& grid, std::span<const NodeState> nodes,
                          long round) {
    grid.rotation_order = energy_sorted_members(grid, nodes);
    grid.last_refresh = static_cast<int>(round);
}

int adopt_unconnected(const NodeState& node, std::span<const NodeState> nodes,
                      const CommGraph& graph, const RadioModel& radio) {
    if (!node.alive() || !graph.contains(node.id)) return kUnattached;
    int best_grid = kUnattached;
    double best_rssi = 0.0;
    NodeId best_id = kNoNode;
    for (const auto& e : graph.neighbors(node.id)) {
        const NodeState& other = nodes[e.to];
        if (other.grid_id == kUnattached) continue;
        const double r = radio.rssi(node.id, other.id, node.position, other.position);
        if (best_id == kNoNode || r > best_rssi ||
            (r == best_rssi && other.id < best_id)) {
            best_rssi = r;
            best_id = other.id;
            best_grid = other.grid_id;
        }
    }
    return best_grid;
}

NodeId failover(VirtualGrid& grid, std::span<NodeState> nodes) {
    if (grid.backup_ch_id != kNoNode && nodes[grid.backup_ch_id].alive()) {
        grid.ch_id = grid.backup_ch_id;
        grid.backup_ch_id = next_alive_after(grid, nodes, grid.ch_id);
        assign_roles(grid, nodes);
        return grid.ch_id;
    }
    // CH and backup both gone: the grid disbands, survivors seek adoption.
    for (NodeId m : grid.member_ids) {
        if (nodes[m].alive()) {
            nodes[m].grid_id = kUnattached;
            nodes[m].role = NodeRole::Member;
        }
    }
    grid.ch_id = kNoNode;
    grid.backup_ch_id = kNoNode;
    grid.active = false;
    return kNoNode;
}

}  // namespace ehrp
