#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ehrp/node.hpp"
#include "ehrp/packet.hpp"

namespace ehrp {

/// Per-round series, columnar.
struct RoundSeries {
    std::vector<int> alive;
    std::vector<double> energy_cum;        // total consumed through this round
    std::vector<std::int64_t> generated_cum;
    std::vector<std::int64_t> delivered_cum;
    std::vector<std::int64_t> dropped_cum;
    std::vector<std::int64_t> in_flight;
    std::vector<double> mean_delay;        // over packets delivered so far, seconds
    std::vector<double> mean_hops;

    std::size_t rounds() const { return alive.size(); }
};

struct MetricsReport {
    int node_count = 0;
    double initial_energy_total = 0.0;
    int rounds_executed = 0;
    double round_duration_s = 0.0;
    double hop_time_s = 0.0;
    std::uint64_t seed = 0;

    RoundSeries series;

    // Aggregates.
    int lifetime_hna = 0;
    bool hna_reached = false;
    int lifetime_fnd = 0;
    bool fnd_reached = false;
    double total_energy = 0.0;   // consumed by run end
    double pdr = 0.0;
    double avg_delay_s = 0.0;
    double avg_hops = 0.0;
    double wasted_energy = 0.0;  // sum of residuals at the lifetime instant

    std::int64_t generated = 0, delivered = 0, dropped = 0, in_flight = 0;

    // Consistency ledger (checked every round by the engine, surfaced here).
    double ledger_total_debited = 0.0;
    double node_consumed_total = 0.0;
    bool ledger_exact = false;
    bool conservation_ok = false;
};

struct LifetimeResult {
    int rounds = 0;
    bool reached = false;
};

/// First round index at which alive count drops below ceil(N/2); if the
/// series never crosses, returns its length with reached=false.
LifetimeResult lifetime_hna(std::span<const int> alive_series, int node_count);

/// First round index at which any node has died (alive < N).
LifetimeResult lifetime_fnd(std::span<const int> alive_series, int node_count);

/// Sum of residual energies over all nodes (evaluated at the lifetime instant).
double wasted_energy(std::span<const NodeState> nodes);

/// Analytic lifetime (n*e_init - e_wasted)/e_rate; with e_wasted = 0 this is
/// the virtual lifetime. e_rate must be positive (joules per round).
double analytic_lifetime(int node_count, double e_init, double e_rate,
                         double e_wasted);

/// delivered/generated; 1.0 by convention when nothing was generated.
double pdr(std::int64_t delivered, std::int64_t generated);

/// Delay of a delivered packet: hop transit plus any rounds spent waiting.
double packet_delay(const Packet& p, double hop_time_s, double round_duration_s);

/// Mean delay over the delivered subset of `packets`; 0 when none delivered.
double average_delay(std::span<const Packet> packets, double hop_time_s,
                     double round_duration_s);

}  // namespace ehrp
