#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ehrp/harness.hpp"

namespace {

std::vector<std::string> split_csv_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto a = item.find_first_not_of(" \t");
        const auto b = item.find_last_not_of(" \t");
        if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
    }
    return out;
}

ehrp::ScenarioConfig resolve_config(const std::string& config_path, bool seed_set,
                                    std::uint64_t seed, const std::string& protocol) {
    ehrp::ScenarioConfig cfg =
        config_path.empty() ? ehrp::ScenarioConfig{} : ehrp::load_config(config_path);
    if (seed_set) cfg.seed = seed;
    if (!protocol.empty()) cfg.protocol = ehrp::protocol_from_string(protocol);
    ehrp::validate_config(cfg);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ehrp-sim: hybrid WSN routing simulator and experiment harness"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string config_path, out_dir = "out", protocol;
    std::uint64_t seed = 0;
    bool seed_set = false;
    app.add_option("--config", config_path, "scenario config file (defaults when omitted)");
    app.add_option("--out-dir", out_dir, "output directory");
    app.add_option("--protocol", protocol, "protocol override: ehrp | wait_for_sink");
    auto* seed_opt = app.add_option("--seed", seed, "seed override");

    auto* run_cmd = app.add_subcommand("run", "run one scenario, emit summary + series CSV");
    bool no_series = false;
    run_cmd->add_flag("--no-series", no_series, "skip per-round series files");

    auto* sweep_cmd = app.add_subcommand("sweep", "sweep one config parameter");
    std::string sweep_param, sweep_values;
    std::vector<std::string> sweep_sets;
    bool sweep_series = false;
    sweep_cmd->add_option("--param", sweep_param, "config key to sweep")->required();
    sweep_cmd->add_option("--values", sweep_values, "comma-separated values")->required();
    sweep_cmd->add_option("--set", sweep_sets, "fixed key=value override (repeatable)");
    sweep_cmd->add_flag("--series", sweep_series, "also emit per-run series files");

    auto* bench_cmd = app.add_subcommand("aco-bench", "tune alpha/beta/rho on a graph file");
    std::string graph_path, triples_arg;
    long bench_src = 0, bench_dst = -1;
    bench_cmd->add_option("--graph", graph_path, "graph file")->required();
    bench_cmd->add_option("--source", bench_src, "source node id (default 0)");
    bench_cmd->add_option("--dest", bench_dst, "destination node id (default last)");
    bench_cmd->add_option("--triples", triples_arg,
                          "semicolon-separated alpha,beta,rho triples "
                          "(default: the standard eight-row grid)");

    CLI11_PARSE(app, argc, argv);
    seed_set = seed_opt->count() > 0;

    try {
        if (run_cmd->parsed()) {
            const auto cfg = resolve_config(config_path, seed_set, seed, protocol);
            const auto text = ehrp::run_scenario_to_dir(cfg, out_dir, !no_series);
            std::cout << text;
            return 0;
        }
        if (sweep_cmd->parsed()) {
            const auto cfg = resolve_config(config_path, seed_set, seed, protocol);
            ehrp::SweepSpec spec{sweep_param, split_csv_list(sweep_values), {}};
            for (const auto& kv : sweep_sets) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw std::runtime_error("--set expects key=value, got '" + kv + "'");
                spec.overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
            }
            const auto text = ehrp::run_sweep_to_dir(spec, cfg, out_dir);
            std::cout << text;
            if (sweep_series) {
                for (const auto& v : spec.values) {
                    ehrp::ScenarioConfig c = cfg;
                    for (const auto& [k, val] : spec.overrides)
                        ehrp::apply_config_key(c, k, val);
                    ehrp::apply_config_key(c, spec.param, v);
                    ehrp::validate_config(c);
                    for (int rep = 0; rep < c.repetitions; ++rep) {
                        const auto rpt = ehrp::run_simulation(c, c.seed + rep);
                        std::ofstream f(out_dir + "/series_" + spec.param + "_" + v +
                                        "_rep" + std::to_string(rep) + ".csv");
                        f << ehrp::series_csv(rpt);
                    }
                }
            }
            return 0;
        }
        if (bench_cmd->parsed()) {
            const auto g = ehrp::load_graph_file(graph_path);
            if (bench_dst < 0) bench_dst = static_cast<long>(g.nodes.size()) - 1;
            std::vector<ehrp::AcoTriple> triples;
            if (triples_arg.empty()) {
                triples = ehrp::default_bench_triples();
            } else {
                std::stringstream ss(triples_arg);
                std::string t;
                while (std::getline(ss, t, ';')) {
                    const auto parts = split_csv_list(t);
                    if (parts.size() != 3)
                        throw std::runtime_error("bad triple '" + t +
                                                 "' (want alpha,beta,rho)");
                    triples.push_back({std::stod(parts[0]), std::stod(parts[1]),
                                       std::stod(parts[2])});
                }
            }
            ehrp::ScenarioConfig cfg;  // propagation/aco defaults for the bench
            if (!config_path.empty()) cfg = ehrp::load_config(config_path);
            const std::uint64_t s = seed_set ? seed : cfg.seed;
            const auto rows = ehrp::aco_bench(g, triples, static_cast<ehrp::NodeId>(bench_src),
                                              static_cast<ehrp::NodeId>(bench_dst),
                                              cfg.aco, cfg.prop, s);
            const auto text = ehrp::bench_csv(rows, s);
            std::filesystem::create_directories(out_dir);
            std::ofstream f(out_dir + "/aco_bench.csv", std::ios::binary);
            f << text;
            std::cout << text;
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
