#include "ehrp/harness.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ehrp {

namespace {

const char* kMetricNames[] = {"total_energy_j", "lifetime_hna_rounds",
                              "avg_delay_s", "pdr"};

double metric_value(const MetricsReport& r, int which) {
    switch (which) {
        case 0: return r.total_energy;
        case 1: return static_cast<double>(r.lifetime_hna);
        case 2: return r.avg_delay_s;
        default: return r.pdr;
    }
}

struct MeanStd {
    double mean = 0.0, stddev = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd m;
    if (xs.empty()) return m;
    double sum = 0.0;
    for (double x : xs) sum += x;
    m.mean = sum / static_cast<double>(xs.size());
    if (xs.size() >= 2) {
        double ss = 0.0;
        for (double x : xs) ss += (x - m.mean) * (x - m.mean);
        m.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return m;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write file: " + path);
    f << text;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

std::vector<MetricsReport> collect_reports(const ScenarioConfig& cfg,
                                           const std::string& value_label) {
    std::vector<MetricsReport> reports;
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
        const std::uint64_t s = cfg.seed + static_cast<std::uint64_t>(rep);
        try {
            reports.push_back(run_simulation(cfg, s));
        } catch (const std::exception& e) {
            throw std::runtime_error("run failed at value=" + value_label +
                                     " seed=" + std::to_string(s) + ": " + e.what());
        }
    }
    return reports;
}

std::vector<SweepCell> cells_from_reports(const std::vector<MetricsReport>& reports,
                                          const std::string& value_label,
                                          const ScenarioConfig& cfg) {
    std::vector<SweepCell> cells;
    for (int m = 0; m < 4; ++m) {
        std::vector<double> xs;
        xs.reserve(reports.size());
        for (const auto& r : reports) xs.push_back(metric_value(r, m));
        const auto ms = mean_std(xs);
        cells.push_back({value_label, kMetricNames[m], ms.mean, ms.stddev,
                         cfg.repetitions, cfg.seed});
    }
    return cells;
}

}  // namespace

std::vector<SweepCell> run_repetitions(const ScenarioConfig& cfg,
                                       const std::string& value_label) {
    return cells_from_reports(collect_reports(cfg, value_label), value_label, cfg);
}

std::vector<SweepCell> run_sweep(const SweepSpec& spec, const ScenarioConfig& base) {
    if (spec.values.empty()) throw ConfigError("sweep: empty value list");
    std::vector<SweepCell> cells;
    for (const auto& value : spec.values) {
        ScenarioConfig cfg = base;
        for (const auto& [k, v] : spec.overrides) apply_config_key(cfg, k, v);
        apply_config_key(cfg, spec.param, value);  // rejects unknown params
        validate_config(cfg);
        auto vc = run_repetitions(cfg, value);
        cells.insert(cells.end(), vc.begin(), vc.end());
    }
    return cells;
}

std::string sweep_csv(const std::string& sweep_param,
                      const std::vector<SweepCell>& cells, std::uint64_t seed) {
    std::ostringstream out;
    out << "# seed=" << seed << "\n";
    out << "sweep_param,value,metric,mean,stddev,repetitions,seed\n";
    for (const auto& c : cells)
        out << sweep_param << ',' << c.value << ',' << c.metric << ','
            << format_double(c.mean) << ',' << format_double(c.stddev) << ','
            << c.repetitions << ',' << c.seed << "\n";
    return out.str();
}

std::string summary_csv(const std::vector<SweepCell>& cells, std::uint64_t seed) {
    std::ostringstream out;
    out << "# seed=" << seed << "\n";
    out << "metric,mean,stddev,repetitions,seed\n";
    for (const auto& c : cells)
        out << c.metric << ',' << format_double(c.mean) << ','
            << format_double(c.stddev) << ',' << c.repetitions << ',' << c.seed
            << "\n";
    return out.str();
}

std::string series_csv(const MetricsReport& r) {
    std::ostringstream out;
    out << "# seed=" << r.seed << "\n";
    out << "round,alive,energy_cum,delivered_cum,mean_delay\n";
    for (std::size_t i = 0; i < r.series.rounds(); ++i)
        out << i << ',' << r.series.alive[i] << ','
            << format_double(r.series.energy_cum[i]) << ','
            << r.series.delivered_cum[i] << ','
            << format_double(r.series.mean_delay[i]) << "\n";
    return out.str();
}

std::string run_scenario_to_dir(const ScenarioConfig& cfg, const std::string& out_dir,
                                bool write_series) {
    std::filesystem::create_directories(out_dir);
    const auto reports = collect_reports(cfg, "-");
    if (write_series)
        for (std::size_t rep = 0; rep < reports.size(); ++rep)
            write_file(out_dir + "/series_rep" + std::to_string(rep) + ".csv",
                       series_csv(reports[rep]));
    const auto text = summary_csv(cells_from_reports(reports, "-", cfg), cfg.seed);
    write_file(out_dir + "/summary.csv", text);
    return text;
}

std::string run_sweep_to_dir(const SweepSpec& spec, const ScenarioConfig& base,
                             const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto cells = run_sweep(spec, base);
    const auto text = sweep_csv(spec.param, cells, base.seed);
    write_file(out_dir + "/sweep_" + spec.param + ".csv", text);
    return text;
}

BenchGraph parse_graph(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<NodeState> nodes;
    std::vector<std::pair<NodeId, NodeId>> extra_edges;
    double range = -1.0;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;
        if (kind == "node") {
            long id;
            double x, y, energy = 0.5;
            if (!(ls >> id >> x >> y))
                throw std::runtime_error("graph line " + std::to_string(lineno) +
                                         ": expected 'node <id> <x> <y> [energy]'");
            ls >> energy;
            if (id != static_cast<long>(nodes.size()))
                throw std::runtime_error("graph line " + std::to_string(lineno) +
                                         ": node ids must be dense from 0");
            NodeState n;
            n.id = static_cast<NodeId>(id);
            n.position = {x, y};
            n.energy = EnergyAccount(energy);
            nodes.push_back(n);
        } else if (kind == "range") {
            if (!(ls >> range) || range <= 0.0)
                throw std::runtime_error("graph line " + std::to_string(lineno) +
                                         ": expected 'range <meters>'");
        } else if (kind == "edge") {
            long a, b;
            if (!(ls >> a >> b))
                throw std::runtime_error("graph line " + std::to_string(lineno) +
                                         ": expected 'edge <a> <b>'");
            extra_edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
        } else {
            throw std::runtime_error("graph line " + std::to_string(lineno) +
                                     ": unknown directive '" + kind + "'");
        }
    }
    if (nodes.size() < 2) throw std::runtime_error("graph: needs at least 2 nodes");
    for (auto [a, b] : extra_edges)
        if (a < 0 || b < 0 || a >= static_cast<NodeId>(nodes.size()) ||
            b >= static_cast<NodeId>(nodes.size()) || a == b)
            throw std::runtime_error("graph: edge endpoint out of range");

    BenchGraph g;
    g.nodes = std::move(nodes);
    std::vector<std::pair<NodeId, NodeId>> edges = std::move(extra_edges);
    if (range > 0.0) {
        for (NodeId a = 0; a < static_cast<NodeId>(g.nodes.size()); ++a)
            for (NodeId b = a + 1; b < static_cast<NodeId>(g.nodes.size()); ++b)
                if (euclidean_distance(g.nodes[a].position, g.nodes[b].position) <= range)
                    edges.emplace_back(a, b);
    }
    if (edges.empty()) throw std::runtime_error("graph: no edges (add 'range' or 'edge' lines)");
    g.graph = CommGraph::build_from_edges(g.nodes, edges);
    return g;
}

BenchGraph load_graph_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open graph file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_graph(buf.str());
}

std::vector<AcoTriple> default_bench_triples() {
    return {{0.5, 1, 0.3}, {0.5, 1, 0.4}, {0.5, 1, 0.5}, {0.5, 1, 0.6},
            {1, 5, 0.3},   {2, 6, 0.4},   {4, 8, 0.5},   {5, 10, 0.6}};
}

std::vector<BenchRow> aco_bench(const BenchGraph& g, std::span<const AcoTriple> triples,
                                NodeId src, NodeId dst, const aco::AcoParams& base,
                                const PropagationParams& prop, std::uint64_t seed) {
    if (src < 0 || dst < 0 || src >= static_cast<NodeId>(g.nodes.size()) ||
        dst >= static_cast<NodeId>(g.nodes.size()) || src == dst)
        throw std::runtime_error("aco-bench: bad source/destination");
    for (NodeId u = 0; u < static_cast<NodeId>(g.nodes.size()); ++u)
        if (!g.graph.reachable(src, u))
            throw std::runtime_error("aco-bench: graph is disconnected");

    RadioModel radio(prop, derive_seed(seed, 0x5AAD07ull));
    std::vector<BenchRow> rows;
    for (const auto& t : triples) {
        aco::AcoParams p = base;
        p.alpha = t.alpha;
        p.beta = t.beta;
        p.rho = t.rho;
        const auto res = aco::solve(src, dst, g.graph, g.nodes, radio, p,
                                    derive_seed(seed, 0xBE9C4ull));
        BenchRow row;
        row.triple = t;
        if (res) {
            row.path_length = res->best.length;
            row.found_iteration = res->found_iteration;
        }
        rows.push_back(row);
    }
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows, std::uint64_t seed) {
    std::ostringstream out;
    out << "# seed=" << seed << "\n";
    out << "alpha,beta,rho,path_length,iteration\n";
    for (const auto& r : rows)
        out << format_double(r.triple.alpha) << ',' << format_double(r.triple.beta)
            << ',' << format_double(r.triple.rho) << ','
            << format_double(r.path_length) << ',' << r.found_iteration << "\n";
    return out.str();
}

}  // namespace ehrp
