#include "ehrp/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ehrp {

bool SinkState::is_assigned(int grid_id) const {
    return std::binary_search(assigned_grid_ids.begin(), assigned_grid_ids.end(),
                              grid_id);
}

std::vector<SinkState> build_routes(std::span<const VirtualGrid> grids,
                                    const GridLattice& lattice, int sink_count,
                                    double speed_mps) {
    const int g = static_cast<int>(grids.size());
    if (sink_count < 1) throw std::invalid_argument("build_routes: sink_count < 1");
    if (sink_count > g)
        throw std::invalid_argument("build_routes: sink_count exceeds grid count");
    if (speed_mps <= 0.0) throw std::invalid_argument("build_routes: speed must be positive");

    // Column-major grid order; contiguous chunks of it form vertical bands.
    std::vector<int> order(g);
    for (int col = 0; col < lattice.cols; ++col)
        for (int row = 0; row < lattice.rows; ++row)
            order[col * lattice.rows + row] = row * lattice.cols + col;

    std::vector<SinkState> sinks;
    sinks.reserve(sink_count);
    const int base = g / sink_count;
    const int extra = g % sink_count;
    int cursor = 0;
    for (int s = 0; s < sink_count; ++s) {
        const int take = base + (s < extra ? 1 : 0);
        SinkState sink;
        sink.id = s;
        sink.speed_mps = speed_mps;
        sink.assigned_grid_ids.assign(order.begin() + cursor,
                                      order.begin() + cursor + take);

        // Boustrophedon over the band: consecutive columns alternate row
        // direction. The band slice is column-major, so each column is a
        // contiguous run.
        int i = 0;
        int band_col = 0;
        while (i < take) {
            int j = i;
            const int col_of = grids[sink.assigned_grid_ids[i]].col;
            while (j < take && grids[sink.assigned_grid_ids[j]].col == col_of) ++j;
            if (band_col % 2 == 0) {
                for (int k = i; k < j; ++k) sink.waypoint_grid_ids.push_back(sink.assigned_grid_ids[k]);
            } else {
                for (int k = j - 1; k >= i; --k) sink.waypoint_grid_ids.push_back(sink.assigned_grid_ids[k]);
            }
            ++band_col;
            i = j;
        }
        for (int gid : sink.waypoint_grid_ids)
            sink.waypoints.push_back(grids[gid].bounds.center());

        sink.cum_arc.resize(sink.waypoints.size(), 0.0);
        for (std::size_t k = 1; k < sink.waypoints.size(); ++k)
            sink.cum_arc[k] = sink.cum_arc[k - 1] +
                              euclidean_distance(sink.waypoints[k - 1], sink.waypoints[k]);

        std::sort(sink.assigned_grid_ids.begin(), sink.assigned_grid_ids.end());
        sink.position = sink.waypoints.front();
        sinks.push_back(std::move(sink));
        cursor += take;
    }
    return sinks;
}

Position position_at(const SinkState& sink, double t) {
    if (t < 0.0) throw std::invalid_argument("position_at: negative time");
    if (sink.waypoints.size() <= 1 || sink.path_length() <= 0.0)
        return sink.waypoints.front();

    const double total = sink.path_length();
    double s = std::fmod(sink.speed_mps * t, 2.0 * total);
    if (s > total) s = 2.0 * total - s;

    // Locate the segment containing arc length s.
    const auto it = std::upper_bound(sink.cum_arc.begin(), sink.cum_arc.end(), s);
    std::size_t seg = it == sink.cum_arc.begin()
                          ? 0
                          : static_cast<std::size_t>(it - sink.cum_arc.begin()) - 1;
    if (seg >= sink.waypoints.size() - 1) seg = sink.waypoints.size() - 2;
    const double seg_len = sink.cum_arc[seg + 1] - sink.cum_arc[seg];
    const double f = seg_len > 0.0 ? (s - sink.cum_arc[seg]) / seg_len : 0.0;
    const Position a = sink.waypoints[seg];
    const Position b = sink.waypoints[seg + 1];
    return {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
}

int waypoint_index_for_round(const SinkState& sink, long round) {
    const auto n = static_cast<long>(sink.waypoints.size());
    if (n <= 0) return -1;
    if (n == 1) return 0;
    const long period = 2 * (n - 1);
    const long k = round % period;
    return static_cast<int>(k < n ? k : period - k);
}

int serving_grid_for_round(const SinkState& sink, long round) {
    const int w = waypoint_index_for_round(sink, round);
    return w < 0 ? -1 : sink.waypoint_grid_ids[w];
}

int serving_grid(const SinkState& sink, double t, std::span<const VirtualGrid> grids) {
    const Position p = position_at(sink, t);
    for (const auto& g : grids) {  // ascending id: boundary ties go low
        if (g.bounds.contains(p))
            return sink.is_assigned(g.id) ? g.id : -1;
    }
    return -1;
}

}  // namespace ehrp
