#include "ehrp/aco.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ehrp::aco {

namespace {

/// Scratch buffers shared by all ants of one solve call. tau^alpha entries
/// are invalidated per iteration (pheromones change), eta^beta entries live
/// for the whole solve (destination is fixed).
struct Workspace {
    std::vector<int> visited;
    int visit_stamp = 0;
    std::vector<double> tau_pow;
    std::vector<int> tau_stamp;
    int tau_mark = 0;
    std::vector<double> eta_pow;
    std::vector<char> eta_ready;
    std::vector<double> weights;

    Workspace(int node_cap, int edge_cap)
        : visited(node_cap, 0),
          tau_pow(edge_cap, 0.0),
          tau_stamp(edge_cap, -1),
          eta_pow(edge_cap, 0.0),
          eta_ready(edge_cap, 0) {}
};

bool route_better(const RoutePath& a, const RoutePath& b) {
    if (a.fitness != b.fitness) return a.fitness > b.fitness;
    if (a.length != b.length) return a.length < b.length;
    return a.nodes < b.nodes;
}

std::optional<RoutePath> walk(Workspace& ws, NodeId source, NodeId destination,
                              const PheromoneTable& tau, const CommGraph& graph,
                              const RadioModel& radio,
                              std::span<const NodeState> nodes,
                              const AcoParams& params, Rng& rng) {
    ++ws.visit_stamp;
    ws.visited[source] = ws.visit_stamp;

    RoutePath path;
    path.nodes.push_back(source);
    NodeId u = source;
    while (u != destination) {
        const auto& nbrs = graph.neighbors(u);
        ws.weights.assign(nbrs.size(), -1.0);
        double total = 0.0;
        int allowed = 0;
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            const auto& e = nbrs[k];
            if (ws.visited[e.to] == ws.visit_stamp) continue;
            if (ws.tau_stamp[e.idx] != ws.tau_mark) {
                ws.tau_pow[e.idx] = std::pow(tau.value(e.idx), params.alpha);
                ws.tau_stamp[e.idx] = ws.tau_mark;
            }
            if (!ws.eta_ready[e.idx]) {
                ws.eta_pow[e.idx] =
                    std::pow(heuristic(u, e.to, destination, radio, nodes), params.beta);
                ws.eta_ready[e.idx] = 1;
            }
            const double w = ws.tau_pow[e.idx] * ws.eta_pow[e.idx];
            ws.weights[k] = w;
            total += w;
            ++allowed;
        }
        if (allowed == 0) return std::nullopt;  // dead end, ant abandoned

        NodeId next = kNoNode;
        if (total > 0.0 && std::isfinite(total)) {
            const double r = rng.next_double() * total;
            double acc = 0.0;
            for (std::size_t k = 0; k < nbrs.size(); ++k) {
                if (ws.weights[k] < 0.0) continue;
                acc += ws.weights[k];
                next = nbrs[k].to;
                if (r < acc) break;
            }
        } else {
            // All weights vanished (or overflowed): uniform over allowed.
            auto pick = static_cast<long>(rng.next_below(static_cast<std::uint64_t>(allowed)));
            for (std::size_t k = 0; k < nbrs.size(); ++k) {
                if (ws.weights[k] < 0.0) continue;
                if (pick-- == 0) {
                    next = nbrs[k].to;
                    break;
                }
            }
        }
        ws.visited[next] = ws.visit_stamp;
        path.nodes.push_back(next);
        u = next;
    }
    return path;
}

}  // namespace

double heuristic(NodeId i, NodeId j, NodeId dest, const RadioModel& radio,
                 std::span<const NodeState> nodes) {
    const double link = radio.shifted_rssi(
        radio.rssi(i, j, nodes[i].position, nodes[j].position));
    // At the destination itself the onward hop is zero-length: take the
    // no-path-loss best case rather than evaluating RSSI at distance 0.
    const double onward =
        j == dest ? radio.shifted_rssi(radio.params().tx_power_dbm)
                  : radio.shifted_rssi(
                        radio.rssi(j, dest, nodes[j].position, nodes[dest].position));
    return link + onward;
}

std::map<NodeId, double> transition_probabilities(
    NodeId i, const std::vector<char>& visited, NodeId dest,
    const PheromoneTable& tau, const CommGraph& graph, const RadioModel& radio,
    std::span<const NodeState> nodes, const AcoParams& params) {
    std::map<NodeId, double> probs;
    double total = 0.0;
    for (const auto& e : graph.neighbors(i)) {
        if (e.to < static_cast<NodeId>(visited.size()) && visited[e.to]) continue;
        const double w = std::pow(tau.value(e.idx), params.alpha) *
                         std::pow(heuristic(i, e.to, dest, radio, nodes), params.beta);
        probs[e.to] = w;
        total += w;
    }
    if (probs.empty()) return probs;  // dead end
    if (total > 0.0 && std::isfinite(total)) {
        for (auto& [_, w] : probs) w /= total;
    } else {
        const double u = 1.0 / static_cast<double>(probs.size());
        for (auto& [_, w] : probs) w = u;
    }
    return probs;
}

double fitness(const RoutePath& path) {
    if (path.length <= 0.0) throw std::invalid_argument("fitness: nonpositive path length");
    return (path.e_avg * path.e_min) / (std::exp(path.e_init) * path.length);
}

void finalize_route(RoutePath& path, const CommGraph&,
                    std::span<const NodeState> nodes) {
    path.length = 0.0;
    for (std::size_t k = 1; k < path.nodes.size(); ++k)
        path.length += euclidean_distance(nodes[path.nodes[k - 1]].position,
                                          nodes[path.nodes[k]].position);
    // Energy statistics over source + relays; the destination is excluded.
    double sum_res = 0.0, sum_init = 0.0;
    double min_res = 0.0;
    const std::size_t counted = path.nodes.size() - 1;
    for (std::size_t k = 0; k < counted; ++k) {
        const auto& n = nodes[path.nodes[k]];
        sum_res += n.residual_energy();
        sum_init += n.initial_energy();
        if (k == 0 || n.residual_energy() < min_res) min_res = n.residual_energy();
    }
    path.e_avg = sum_res / static_cast<double>(counted);
    path.e_min = min_res;
    path.e_init = sum_init / static_cast<double>(counted);
    path.fitness = fitness(path);
}

double route_distance(const RoutePath& path, std::span<const NodeState> nodes) {
    double sum = 0.0;
    for (std::size_t k = 1; k < path.nodes.size(); ++k)
        sum += euclidean_distance(nodes[path.nodes[k - 1]].position,
                                  nodes[path.nodes[k]].position);
    return sum;
}

std::optional<RoutePath> construct_path(NodeId source, NodeId destination,
                                        const PheromoneTable& tau,
                                        const CommGraph& graph,
                                        const RadioModel& radio,
                                        std::span<const NodeState> nodes,
                                        const AcoParams& params, Rng& rng) {
    if (source == destination)
        throw std::invalid_argument("construct_path: source equals destination");
    Workspace ws(graph.node_capacity(), graph.edge_capacity());
    auto path = walk(ws, source, destination, tau, graph, radio, nodes, params, rng);
    if (path) finalize_route(*path, graph, nodes);
    return path;
}

void update_pheromones(PheromoneTable& tau,
                       std::span<const RoutePath> iteration_paths,
                       const RoutePath* iteration_best, const CommGraph& graph,
                       const AcoParams& params) {
    if (params.rho < 0.0 || params.rho > 1.0)
        throw std::invalid_argument("update_pheromones: rho outside [0, 1]");
    for (auto& v : tau.raw()) v = std::max(params.tau_min, (1.0 - params.rho) * v);

    auto deposit = [&](const RoutePath& p, double amount) {
        for (std::size_t k = 1; k < p.nodes.size(); ++k) {
            const int idx = graph.edge_index(p.nodes[k - 1], p.nodes[k]);
            if (idx >= 0) tau.set_value(idx, tau.value(idx) + amount);
        }
    };
    for (const auto& p : iteration_paths)
        if (p.length > 0.0) deposit(p, params.q_deposit / p.length);
    if (iteration_best) deposit(*iteration_best, params.q_deposit * iteration_best->fitness);
}

std::optional<SolveResult> solve(NodeId source, NodeId destination,
                                 const CommGraph& graph,
                                 std::span<const NodeState> nodes,
                                 const RadioModel& radio, const AcoParams& params,
                                 std::uint64_t seed, PheromoneTable* persistent) {
    if (source == destination)
        throw std::invalid_argument("solve: source equals destination");
    if (!graph.contains(source) || !graph.contains(destination))
        throw std::invalid_argument("solve: endpoint not present in graph");
    if (!graph.reachable(source, destination)) return std::nullopt;  // unreachable

    PheromoneTable tau = persistent ? *persistent : PheromoneTable(graph, params.tau_init);
    Rng rng(seed);
    Workspace ws(graph.node_capacity(), graph.edge_capacity());

    std::optional<RoutePath> best;
    int best_iter = -1;
    long completed = 0;
    std::vector<RoutePath> iter_paths;
    iter_paths.reserve(params.ant_count);

    for (int iter = 0; iter < params.max_iterations; ++iter) {
        iter_paths.clear();
        ++ws.tau_mark;  // pheromones changed since last iteration
        for (int ant = 0; ant < params.ant_count; ++ant) {
            auto p = walk(ws, source, destination, tau, graph, radio, nodes, params, rng);
            if (p) {
                finalize_route(*p, graph, nodes);
                iter_paths.push_back(std::move(*p));
            }
        }
        completed += static_cast<long>(iter_paths.size());

        const RoutePath* iter_best = nullptr;
        for (const auto& p : iter_paths)
            if (!iter_best || route_better(p, *iter_best)) iter_best = &p;

        update_pheromones(tau, iter_paths, iter_best, graph, params);

        if (iter_best && (!best || route_better(*iter_best, *best))) {
            best = *iter_best;
            best_iter = iter;
        }
    }
    if (persistent) *persistent = std::move(tau);
    if (!best) return std::nullopt;  // connected, but no ant completed
    return SolveResult{std::move(*best), best_iter, completed};
}

}  // namespace ehrp::aco
