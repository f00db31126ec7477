#pragma once

#include <span>
#include <vector>

#include "ehrp/node.hpp"
#include "ehrp/radio.hpp"
#include "ehrp/topology.hpp"

namespace ehrp {

/// Grid members sorted by residual energy descending, ties by id ascending;
/// dead members excluded. Shared by election and refresh.
std::vector<NodeId> energy_sorted_members(const VirtualGrid& grid,
                                          std::span<const NodeState> nodes);

/// One-time cluster-head election: highest-residual alive member becomes CH,
/// second becomes backup, rotation order is the full energy ordering; node
/// roles are set accordingly. A grid with no alive member is marked inactive.
/// Runs once at network start; rotation and refresh handle everything
/// afterwards.
void initial_ch_election(VirtualGrid& grid, std::span<NodeState> nodes);

/// Cluster head for the given round: rotation_order[round mod n], scanning
/// forward past dead nodes. Returns kNoNode if no listed member is alive.
/// Rotation itself exchanges no messages and costs no energy.
NodeId rotate_ch(const VirtualGrid& grid, std::span<const NodeState> nodes, long round);

/// First alive node in rotation order strictly after `after` (cyclic scan),
/// excluding `after` itself; kNoNode if none. Used to pick backups.
NodeId next_alive_after(const VirtualGrid& grid, std::span<const NodeState> nodes,
                        NodeId after);

/// Re-sorts the rotation order by current residual energy (the reorder half
/// of the periodic refresh; the simulation pays the control-packet costs).
void refresh_energy_order(VirtualGrid& grid, std::span<const NodeState> nodes, long round);

/// Picks a grid for an unattached node: among alive attached neighbors in
/// the comm graph, the one with the strongest RSSI (ties by lower id) donates
/// its grid. Returns kUnattached when nothing is in range. Adoption works by
/// overhearing, so it costs no energy.
int adopt_unconnected(const NodeState& node, std::span<const NodeState> nodes,
                      const CommGraph& graph, const RadioModel& radio);

/// Promotes the backup CH after the current CH died mid-round. Returns the
/// new CH id, or kNoNode when the backup is also gone — in that case the
/// grid is deactivated and its alive members become unattached (they attempt
/// adoption next round).
NodeId failover(VirtualGrid& grid, std::span<NodeState> nodes);

}  // namespace ehrp
