#pragma once

#include <string>
#include <vector>

#include "ehrp/config.hpp"
#include "ehrp/sim.hpp"

namespace ehrp {

/// One swept parameter (any scalar ScenarioConfig key) over a value list,
/// with optional fixed key=value overrides applied to every point.
struct SweepSpec {
    std::string param;
    std::vector<std::string> values;
    std::vector<std::pair<std::string, std::string>> overrides;
};

/// One (value, metric) cell of a sweep result: mean and sample stddev over
/// the repetitions.
struct SweepCell {
    std::string value;
    std::string metric;
    double mean = 0.0;
    double stddev = 0.0;
    int repetitions = 0;
    std::uint64_t seed = 0;
};

/// Aggregates of a single scenario averaged over its repetitions
/// (seeds seed+0 .. seed+reps-1). Metric order is fixed:
/// total_energy_j, lifetime_hna_rounds, avg_delay_s, pdr.
std::vector<SweepCell> run_repetitions(const ScenarioConfig& cfg,
                                       const std::string& value_label);

/// Runs the sweep: for each value, `repetitions` simulations are averaged
/// per metric. Any single-run failure aborts with the offending value and
/// seed in the message. Cells depend only on (config, value, seed), so
/// permuting the value order permutes rows without changing numbers.
std::vector<SweepCell> run_sweep(const SweepSpec& spec, const ScenarioConfig& base);

std::string sweep_csv(const std::string& sweep_param,
                      const std::vector<SweepCell>& cells, std::uint64_t seed);
std::string summary_csv(const std::vector<SweepCell>& cells, std::uint64_t seed);
std::string series_csv(const MetricsReport& report);

/// Runs a scenario end to end the way the CLI `run` subcommand does:
/// repetitions, summary.csv, and per-repetition series files under out_dir.
/// Returns the summary CSV text (also written to disk).
std::string run_scenario_to_dir(const ScenarioConfig& cfg, const std::string& out_dir,
                                bool write_series);

/// Writes sweep CSV (and optional per-run series files) under out_dir.
std::string run_sweep_to_dir(const SweepSpec& spec, const ScenarioConfig& base,
                             const std::string& out_dir);

// --- standalone ACO benchmark -------------------------------------------

struct BenchGraph {
    std::vector<NodeState> nodes;
    CommGraph graph;
};

/// Text graph format, one directive per line ('#' comments):
///   node <id> <x> <y> [energy]     ids dense from 0
///   range <meters>                 connect all pairs within range
///   edge <a> <b>                   explicit extra edge
BenchGraph load_graph_file(const std::string& path);
BenchGraph parse_graph(const std::string& text);

struct AcoTriple {
    double alpha, beta, rho;
};

struct BenchRow {
    AcoTriple triple{};
    double path_length = 0.0;
    int found_iteration = -1;
};

/// Eight-row tuning-table defaults (the alpha/beta/rho triples swept in the
/// tuning experiment).
std::vector<AcoTriple> default_bench_triples();

/// Solves src->dst once per triple and reports best length and the
/// iteration that found it. Rejects disconnected graphs.
std::vector<BenchRow> aco_bench(const BenchGraph& g, std::span<const AcoTriple> triples,
                                NodeId src, NodeId dst, const aco::AcoParams& base,
                                const PropagationParams& prop, std::uint64_t seed);

std::string bench_csv(const std::vector<BenchRow>& rows, std::uint64_t seed);

/// Deterministic double formatting shared by all CSV writers.
std::string format_double(double v);

}  // namespace ehrp
