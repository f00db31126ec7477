#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ehrp/geometry.hpp"
#include "ehrp/node.hpp"

namespace ehrp {

inline constexpr int kNodesPerGrid = 5;

/// How the virtual grids tile the area: rows x cols cells of equal size.
struct GridLattice {
    int rows = 0;
    int cols = 0;
    double cell_w = 0.0;
    double cell_h = 0.0;
};

/// One virtual grid: a cluster of nodes with a rotating cluster head.
struct VirtualGrid {
    int id = -1;
    int row = 0, col = 0;
    Rect bounds{};
    std::vector<NodeId> member_ids;
    NodeId ch_id = kNoNode;
    NodeId backup_ch_id = kNoNode;
    /// Rotation order as of the last energy refresh, residual descending.
    std::vector<NodeId> rotation_order;
    int last_refresh = 0;
    bool active = true;
};

/// Picks the rows x cols factorization of grid_count whose cells are closest
/// to square (minimizing |cell_w/cell_h - 1|; ties prefer more columns).
/// Throws if no factorization keeps the cell aspect ratio within [1/4, 4].
GridLattice choose_lattice(int grid_count, double area_w, double area_h);

struct Deployment {
    std::vector<NodeState> nodes;
    std::vector<VirtualGrid> grids;
    GridLattice lattice;
    int elections_performed = 0;
};

/// Deploys node_count sensors: the area is tiled into node_count/5 equal
/// cells, five nodes are placed uniformly at random inside each cell, and
/// the initial cluster-head election runs once per grid. Deterministic in
/// the seed. node_count must be >= 5 and divisible by 5.
Deployment deploy(int node_count, double area_w, double area_h,
                  double initial_energy, std::uint64_t seed);

/// Undirected communication graph over alive nodes: edge (i,j) exists iff
/// both are alive and within comm_range. Nodes are pruned as they die, so
/// the graph never contains a dead node.
class CommGraph {
public:
    struct Edge {
        NodeId to = kNoNode;
        double dist = 0.0;
        int idx = 0;  // directed edge slot, stable for the graph's lifetime
    };

    CommGraph() = default;

    static CommGraph build(std::span<const NodeState> nodes, double comm_range);

    /// Builds from an explicit undirected edge list (crafted topologies).
    /// Edges touching dead nodes are ignored; duplicates collapse.
    static CommGraph build_from_edges(std::span<const NodeState> nodes,
                                      std::span<const std::pair<NodeId, NodeId>> edges);

    bool contains(NodeId id) const {
        return id >= 0 && id < static_cast<NodeId>(present_.size()) && present_[id];
    }
    const std::vector<Edge>& neighbors(NodeId id) const { return adj_[id]; }
    int node_count() const { return present_count_; }
    int node_capacity() const { return static_cast<int>(adj_.size()); }
    /// Total directed edge slots ever allocated (stable across removals).
    int edge_capacity() const { return edge_capacity_; }

    bool has_edge(NodeId a, NodeId b) const;
    int edge_index(NodeId a, NodeId b) const;  // -1 if absent

    /// Removes a node and all its incident edges (called on node death).
    void remove_node(NodeId id);

    /// BFS reachability over current (alive) nodes.
    bool reachable(NodeId src, NodeId dst) const;

private:
    std::vector<std::vector<Edge>> adj_;
    std::vector<char> present_;
    int present_count_ = 0;
    int edge_capacity_ = 0;
};

/// Spec-level constructor name: builds the graph from scratch.
inline CommGraph rebuild_comm_graph(std::span<const NodeState> nodes, double comm_range) {
    return CommGraph::build(nodes, comm_range);
}

}  // namespace ehrp
