#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ehrp/node.hpp"
#include "ehrp/radio.hpp"
#include "ehrp/rng.hpp"
#include "ehrp/topology.hpp"

namespace ehrp::aco {

struct AcoParams {
    double alpha = 5.0;      // pheromone exponent
    double beta = 10.0;      // heuristic exponent
    double rho = 0.6;        // evaporation rate in [0, 1]
    double q_deposit = 1.0;  // deposit constant Q
    int ant_count = 20;
    int max_iterations = 60;
    double tau_init = 1.0;
    double tau_min = 1e-4;   // positive pheromone floor
};

/// Pheromone concentration per directed edge of a CommGraph snapshot.
class PheromoneTable {
public:
    PheromoneTable(const CommGraph& graph, double tau_init)
        : values_(static_cast<std::size_t>(graph.edge_capacity()), tau_init) {}

    double value(int edge_idx) const { return values_[edge_idx]; }
    void set_value(int edge_idx, double v) { values_[edge_idx] = v; }
    std::size_t size() const { return values_.size(); }

    std::vector<double>& raw() { return values_; }
    const std::vector<double>& raw() const { return values_; }

private:
    std::vector<double> values_;
};

/// A candidate route with the energy statistics its fitness depends on.
/// Energy fields are computed over the source and intermediate nodes,
/// excluding the destination.
struct RoutePath {
    std::vector<NodeId> nodes;  // source first, destination last
    double length = 0.0;        // sum of hop distances, meters
    double e_avg = 0.0;
    double e_min = 0.0;
    double e_init = 0.0;
    double fitness = 0.0;
};

/// Edge desirability toward `dest`: the shifted-RSSI sum of the i->j link
/// and the j->dest link. Nonnegative by construction.
double heuristic(NodeId i, NodeId j, NodeId dest, const RadioModel& radio,
                 std::span<const NodeState> nodes);

/// Ant transition distribution out of node i over its unvisited neighbors:
/// p(j) = tau_ij^alpha * eta_ij^beta, normalized over the allowed set.
/// Empty map signals a dead end. When every weight vanishes the choice
/// degenerates to uniform over the allowed set.
std::map<NodeId, double> transition_probabilities(
    NodeId i, const std::vector<char>& visited, NodeId dest,
    const PheromoneTable& tau, const CommGraph& graph, const RadioModel& radio,
    std::span<const NodeState> nodes, const AcoParams& params);

/// Path score: (e_avg * e_min) / (e^(e_init) * length). Higher is better;
/// a depleted node on the path zeroes it. Rejects nonpositive length.
double fitness(const RoutePath& path);

/// Fills length, energy statistics, and fitness for a node sequence.
void finalize_route(RoutePath& path, const CommGraph& graph,
                    std::span<const NodeState> nodes);

/// Total route distance: source->first relay, relay chain, last relay->end,
/// recomputed from node positions (cross-checks RoutePath::length).
double route_distance(const RoutePath& path, std::span<const NodeState> nodes);

/// Single ant walk from source toward destination, sampling the transition
/// distribution, never revisiting a node. nullopt on a dead end.
std::optional<RoutePath> construct_path(NodeId source, NodeId destination,
                                        const PheromoneTable& tau,
                                        const CommGraph& graph,
                                        const RadioModel& radio,
                                        std::span<const NodeState> nodes,
                                        const AcoParams& params, Rng& rng);

/// Evaporates every edge by (1 - rho), deposits Q/L_k along each completed
/// path, adds the fitness-weighted bonus Q*fit on the iteration-best path,
/// and floors everything at tau_min.
void update_pheromones(PheromoneTable& tau,
                       std::span<const RoutePath> iteration_paths,
                       const RoutePath* iteration_best, const CommGraph& graph,
                       const AcoParams& params);

struct SolveResult {
    RoutePath best;
    int found_iteration = -1;  // iteration that produced the returned path
    long ants_completed = 0;
};

/// Full colony run: max_iterations rounds of ant_count ants, returning the
/// highest-fitness completed path (ties: shorter length, then lexicographic
/// node sequence). Deterministic for a given seed. Returns nullopt when the
/// destination is unreachable or no ant ever completes.
///
/// `persistent`, when non-null, seeds the colony's pheromones and receives
/// the updated table back (cross-round persistence mode).
std::optional<SolveResult> solve(NodeId source, NodeId destination,
                                 const CommGraph& graph,
                                 std::span<const NodeState> nodes,
                                 const RadioModel& radio, const AcoParams& params,
                                 std::uint64_t seed,
                                 PheromoneTable* persistent = nullptr);

}  // namespace ehrp::aco
