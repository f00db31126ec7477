#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "ehrp/aco.hpp"
#include "ehrp/clustering.hpp"
#include "ehrp/config.hpp"
#include "ehrp/metrics.hpp"
#include "ehrp/mobility.hpp"
#include "ehrp/packet.hpp"
#include "ehrp/radio.hpp"
#include "ehrp/rng.hpp"
#include "ehrp/topology.hpp"

namespace ehrp {

struct RoundOutcome {
    int round = -1;
    std::vector<double> energy_spent;  // per node, this round
    std::int64_t generated = 0, delivered = 0, dropped = 0;
    int alive_end = 0;
    double mean_delay_s = 0.0;  // over this round's delivered packets
    double mean_hops = 0.0;
};

struct SimStats {
    int elections_performed = 0;
    long failovers = 0;
    long adoptions = 0;
    long retransmissions = 0;
    long aco_solves = 0;
    long drops_radio = 0;      // lost after retry
    long drops_no_route = 0;   // no usable sink/route
    long drops_death = 0;      // sender or receiver died mid-hop
    long drops_queue = 0;      // grid disbanded with queued packets
};

enum class EnergyUse : int {
    TxData = 0, RxData, TxControl, RxControl, Aggregation, Idle, kCount
};

/// Discrete-round engine for the hybrid protocol: member-to-CH collection,
/// CH aggregation, direct delivery in sink-served grids, and ant-routed
/// multi-hop delivery everywhere else. Strictly single threaded and
/// reproducible per (config, seed); independent runs may execute in
/// parallel, sharing nothing but the immutable config.
class Simulation {
public:
    /// Deploys a fresh network from the config.
    Simulation(const ScenarioConfig& cfg, std::uint64_t seed);

    /// Starts from a prebuilt deployment (crafted topologies in tests).
    /// Grids with an empty rotation order get their initial election here.
    Simulation(const ScenarioConfig& cfg, std::uint64_t seed, Deployment deployment);

    /// Executes one protocol round. A fully dead network yields an empty
    /// outcome.
    RoundOutcome run_round();

    /// Runs rounds until half the nodes are dead (plus the configured
    /// overrun), the network dies, or the round cap is hit.
    MetricsReport run();

    MetricsReport build_report() const;

    const std::vector<NodeState>& nodes() const { return nodes_; }
    const std::vector<VirtualGrid>& grids() const { return grids_; }
    const std::vector<SinkState>& sinks() const { return sinks_; }
    const CommGraph& graph() const { return graph_; }
    const std::vector<Packet>& packets() const { return packets_; }
    const RadioModel& radio() const { return radio_; }
    const SimStats& stats() const { return stats_; }
    const GridLattice& lattice() const { return lattice_; }
    long round() const { return round_; }
    int alive_count() const { return alive_count_; }
    double round_duration_s() const { return round_duration_s_; }
    double energy_use_total(EnergyUse u) const {
        return energy_use_[static_cast<int>(u)];
    }

private:
    enum class HopResult { Delivered, LostRadio, SenderDied, ReceiverDied };

    void init();
    double spend(NodeId id, EnergyUse use, double amount);
    void on_death(NodeId id);
    NodeId ensure_collector(VirtualGrid& grid);
    void drop_queue(VirtualGrid& grid);
    void drop_packet(Packet& p, long& counter);

    double link_success_prob(NodeId from, NodeId to) const;
    HopResult attempt_hop_node(NodeId from, NodeId to, double bits, bool control);
    HopResult attempt_hop_sink(NodeId from, Position sink_pos, double bits);

    void adoption_pass();
    void rotation_pass();
    void refresh_pass();
    std::int64_t collection_pass();  // returns packets generated
    void mark_delivered(Packet& p, int hops);
    void deliver_direct(VirtualGrid& grid, const SinkState& sink,
                        std::vector<std::int64_t>& fresh);
    void route_distant(VirtualGrid& grid, std::int64_t pkt_idx,
                       const std::vector<int>& serving_grid_of_sink);
    std::optional<aco::SolveResult> run_solver(NodeId src, NodeId dst);
    void verify_round_invariants() const;

    ScenarioConfig cfg_;
    std::uint64_t seed_ = 0;
    GridLattice lattice_{};
    std::vector<NodeState> nodes_;
    std::vector<VirtualGrid> grids_;
    std::vector<SinkState> sinks_;
    CommGraph graph_;
    RadioModel radio_;
    Rng rng_;

    // Independent debit ledger: mirrors every battery mutation so any
    // bypassing write is caught by the per-round bitwise comparison.
    std::vector<EnergyAccount> ledger_;
    std::array<double, static_cast<int>(EnergyUse::kCount)> energy_use_{};

    std::vector<Packet> packets_;
    std::vector<std::vector<std::int64_t>> grid_queues_;  // wait-for-sink mode
    std::map<std::uint64_t, double> pheromone_store_;     // persistence mode

    long round_ = 0;
    int alive_count_ = 0;
    double round_duration_s_ = 0.0;

    std::int64_t generated_total_ = 0, delivered_total_ = 0, dropped_total_ = 0;
    double delivered_delay_sum_ = 0.0;
    std::int64_t delivered_hops_sum_ = 0;

    RoundSeries series_;
    bool hna_seen_ = false;
    long hna_round_ = 0;
    double wasted_at_hna_ = 0.0;

    SimStats stats_;
};

inline MetricsReport run_simulation(const ScenarioConfig& cfg, std::uint64_t seed) {
    return Simulation(cfg, seed).run();
}

}  // namespace ehrp
