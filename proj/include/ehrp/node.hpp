#pragma once

#include <cstdint>

#include "ehrp/energy.hpp"
#include "ehrp/geometry.hpp"

namespace ehrp {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;
inline constexpr int kUnattached = -1;

enum class NodeRole { Member, ClusterHead, BackupClusterHead };

struct NodeState {
    NodeId id = kNoNode;
    Position position{};
    EnergyAccount energy{};
    NodeRole role = NodeRole::Member;
    int grid_id = kUnattached;

    bool alive() const { return energy.alive(); }
    double residual_energy() const { return energy.residual(); }
    double initial_energy() const { return energy.initial(); }
};

/// Debits a node battery, clamped at zero residual; a drained node is dead
/// and never transmits or receives afterwards. Returns the applied amount.
inline double debit(NodeState& node, double amount) { return node.energy.apply(amount); }

}  // namespace ehrp
