#pragma once

#include <span>
#include <vector>

#include "ehrp/geometry.hpp"
#include "ehrp/topology.hpp"

namespace ehrp {

/// A mobile sink sweeping back and forth over the grid centers of its band.
struct SinkState {
    int id = -1;
    std::vector<Position> waypoints;        // grid centers, boustrophedon order
    std::vector<int> waypoint_grid_ids;     // grid served at each waypoint
    std::vector<int> assigned_grid_ids;     // sorted; disjoint across sinks
    std::vector<double> cum_arc;            // arc length up to each waypoint
    double speed_mps = 1.0;
    Position position{};                    // current position (updated by sim)

    double path_length() const { return cum_arc.empty() ? 0.0 : cum_arc.back(); }
    bool is_assigned(int grid_id) const;
};

/// Splits the grids into sink_count contiguous vertical bands of near-equal
/// grid count (column-major order, so a band may split one column) and lays
/// a boustrophedon waypoint path over each band's grid centers. Each sink
/// starts parked on its first waypoint.
std::vector<SinkState> build_routes(std::span<const VirtualGrid> grids,
                                    const GridLattice& lattice, int sink_count,
                                    double speed_mps);

/// Position after traveling speed*t meters along the waypoint polyline,
/// reflecting at both ends. Piecewise linear and continuous in t; any node
/// can evaluate it locally, so the path is never re-broadcast.
Position position_at(const SinkState& sink, double t);

/// Waypoint index visited on the given round (one waypoint per round,
/// bouncing off the path ends without repeating them).
int waypoint_index_for_round(const SinkState& sink, long round);

/// Grid the sink is serving on the given round: the grid whose center is the
/// round's waypoint. Returns -1 for a sink with no waypoints.
int serving_grid_for_round(const SinkState& sink, long round);

/// Spec-form query: the grid whose cell contains position_at(sink, t), if
/// that grid is assigned to this sink; -1 otherwise. Shared boundaries go to
/// the lower grid id.
int serving_grid(const SinkState& sink, double t, std::span<const VirtualGrid> grids);

}  // namespace ehrp
