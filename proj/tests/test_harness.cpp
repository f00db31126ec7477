#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "ehrp/harness.hpp"
#include "support/test_graphs.hpp"

using namespace ehrp;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::string write_temp(const std::string& name, const std::string& text) {
    const auto dir = std::filesystem::temp_directory_path() / "ehrp_harness_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / name).string();
    std::ofstream f(path, std::ios::binary);
    f << text;
    return path;
}

ScenarioConfig tiny_cfg() {
    ScenarioConfig c;
    c.node_count = 30;
    c.area_width = 300;
    c.area_height = 300;
    c.sink_count = 1;
    c.max_rounds = 10;
    c.repetitions = 2;
    c.lossless = true;
    c.aco.ant_count = 6;
    c.aco.max_iterations = 6;
    return c;
}

}  // namespace

TEST_SUITE("config") {
    TEST_CASE("empty text yields the full default scenario") {
        const auto c = parse_config("");
        CHECK(c.node_count == 900);
        CHECK(c.area_width == 1000.0);
        CHECK(c.area_height == 1000.0);
        CHECK(c.sink_count == 2);
        CHECK(c.sink_speed_kmh == 9.0);
        CHECK(c.message_size_bits == 4000.0);
        CHECK(c.control_packet_bits == 200.0);
        CHECK(c.initial_energy == 0.5);
        CHECK(c.repetitions == 25);
        CHECK(c.radio.e_elec == 50e-9);
        CHECK(c.radio.eps_freespace == 10e-12);
        CHECK(c.radio.eps_tworay == 0.0013e-12);
        CHECK(c.radio.e_da == 5e-9);
        CHECK(std::abs(c.radio.d0 - 87.705) < 0.01);
        CHECK(c.aco.alpha == 5.0);
        CHECK(c.aco.beta == 10.0);
        CHECK(c.aco.rho == 0.6);
        CHECK(c.aco.ant_count == 20);
        CHECK(c.aco.max_iterations == 60);
        CHECK(c.protocol == Protocol::Ehrp);
    }

    TEST_CASE("keys parse with comments and whitespace") {
        const auto c = parse_config(
            "# scenario\n"
            "node_count = 100\n"
            "sink_speed_kmh=15   # brisk\n"
            "protocol = wait_for_sink\n"
            "radio.e_da = 5e-9\n"
            "aco.rho = 0.4\n"
            "lossless = true\n"
            "seed = 77\n");
        CHECK(c.node_count == 100);
        CHECK(c.sink_speed_kmh == 15.0);
        CHECK(c.protocol == Protocol::WaitForSink);
        CHECK(c.aco.rho == 0.4);
        CHECK(c.lossless);
        CHECK(c.seed == 77);
    }

    TEST_CASE("validation errors name the offending field") {
        CHECK_THROWS_WITH_AS(parse_config("node_count = -5\n"),
                             doctest::Contains("node_count"), ConfigError);
        CHECK_THROWS_WITH_AS(parse_config("aco.rho = 1.5\n"),
                             doctest::Contains("aco.rho"), ConfigError);
        CHECK_THROWS_WITH_AS(parse_config("hop_time_s = 0\n"),
                             doctest::Contains("hop_time_s"), ConfigError);
        // node_count 10 -> 2 grids, 4 sinks is too many
        CHECK_THROWS_WITH_AS(parse_config("node_count = 10\nsink_count = 4\n"),
                             doctest::Contains("sink_count"), ConfigError);
        CHECK_THROWS_WITH_AS(parse_config("radio.d0 = 50\n"),
                             doctest::Contains("radio.d0"), ConfigError);
    }

    TEST_CASE("unknown keys and malformed lines are rejected") {
        CHECK_THROWS_WITH_AS(parse_config("nodecount = 900\n"),
                             doctest::Contains("nodecount"), ConfigError);
        CHECK_THROWS_AS(parse_config("node_count 900\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("node_count = 900x\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("lossless = yes\n"), ConfigError);
    }

    TEST_CASE("load_config reads files and reports missing ones") {
        const auto path = write_temp("ok.cfg", "node_count = 45\n");
        CHECK(load_config(path).node_count == 45);
        CHECK_THROWS_AS(load_config("/nonexistent/nope.cfg"), ConfigError);
    }
}

TEST_SUITE("sweep") {
    TEST_CASE("single value, single repetition matches run_simulation") {
        auto cfg = tiny_cfg();
        cfg.repetitions = 1;
        const auto report = run_simulation(cfg, cfg.seed);
        SweepSpec spec{"node_count", {"30"}};
        const auto cells = run_sweep(spec, cfg);
        REQUIRE(cells.size() == 4);
        CHECK(cells[0].metric == "total_energy_j");
        CHECK(cells[0].mean == report.total_energy);
        CHECK(cells[0].stddev == 0.0);
        CHECK(cells[3].metric == "pdr");
        CHECK(cells[3].mean == report.pdr);
    }

    TEST_CASE("permuting sweep values changes no numbers") {
        const auto cfg = tiny_cfg();
        const auto a = run_sweep({"sink_speed_kmh", {"6", "12"}}, cfg);
        const auto b = run_sweep({"sink_speed_kmh", {"12", "6"}}, cfg);
        std::map<std::pair<std::string, std::string>, double> ma, mb;
        for (const auto& c : a) ma[{c.value, c.metric}] = c.mean;
        for (const auto& c : b) mb[{c.value, c.metric}] = c.mean;
        CHECK(ma == mb);
    }

    TEST_CASE("fixed overrides apply to every sweep point") {
        auto cfg = tiny_cfg();
        SweepSpec spec{"sink_speed_kmh", {"6"}, {{"max_rounds", "5"}}};
        const auto cells = run_sweep(spec, cfg);
        auto direct = cfg;
        direct.max_rounds = 5;
        const auto expect = run_simulation(direct, direct.seed);
        for (const auto& c : cells)
            if (c.metric == "total_energy_j" && cfg.repetitions == 1)
                CHECK(c.mean == expect.total_energy);
        // lifetime capped by the override
        for (const auto& c : cells)
            if (c.metric == "lifetime_hna_rounds") CHECK(c.mean <= 5.0);
        CHECK_THROWS_AS(run_sweep({"node_count", {"30"}, {{"bogus", "1"}}}, cfg),
                        ConfigError);
    }

    TEST_CASE("bad sweep parameters abort with context") {
        const auto cfg = tiny_cfg();
        CHECK_THROWS_AS(run_sweep({"not_a_key", {"1"}}, cfg), ConfigError);
        CHECK_THROWS_AS(run_sweep({"node_count", {"30", "-10"}}, cfg), ConfigError);
        CHECK_THROWS_AS(run_sweep({"node_count", {}}, cfg), ConfigError);
    }

    TEST_CASE("run directory outputs are byte-stable") {
        const auto cfg = tiny_cfg();
        const auto dir = std::filesystem::temp_directory_path() / "ehrp_run_AB";
        std::filesystem::remove_all(dir);
        const auto t1 = run_scenario_to_dir(cfg, (dir / "a").string(), true);
        const auto t2 = run_scenario_to_dir(cfg, (dir / "b").string(), true);
        CHECK(t1 == t2);
        CHECK(slurp((dir / "a/summary.csv").string()) ==
              slurp((dir / "b/summary.csv").string()));
        CHECK(slurp((dir / "a/series_rep0.csv").string()) ==
              slurp((dir / "b/series_rep0.csv").string()));
        CHECK(slurp((dir / "a/series_rep1.csv").string()) ==
              slurp((dir / "b/series_rep1.csv").string()));
        // header shape
        const auto text = slurp((dir / "a/series_rep0.csv").string());
        CHECK(text.find("round,alive,energy_cum,delivered_cum,mean_delay") !=
              std::string::npos);
    }

    TEST_CASE("sweep csv shape") {
        const auto cfg = tiny_cfg();
        const auto cells = run_sweep({"node_count", {"30", "50", "100"}}, cfg);
        CHECK(cells.size() == 12);  // 3 values x 4 metrics
        const auto text = sweep_csv("node_count", cells, cfg.seed);
        CHECK(text.find("sweep_param,value,metric,mean,stddev,repetitions,seed") !=
              std::string::npos);
        std::size_t rows = 0;
        for (char ch : text) rows += ch == '\n';
        CHECK(rows == 14);  // comment + header + 12 cells
    }
}

TEST_SUITE("aco-bench") {
    std::string grid_graph_text(int n, double pitch, double range) {
        // n nodes on a line with a slight zigzag so lengths differ
        std::ostringstream out;
        for (int i = 0; i < n; ++i)
            out << "node " << i << ' ' << pitch * i << ' ' << (i % 2 ? 8.0 : 0.0)
                << "\n";
        out << "range " << range << "\n";
        return out.str();
    }

    TEST_CASE("default triples produce a populated tuning table") {
        const auto path = write_temp("line.graph", grid_graph_text(12, 30.0, 65.0));
        const auto g = load_graph_file(path);
        const auto triples = default_bench_triples();
        const auto rows = aco_bench(g, triples, 0, 11, aco::AcoParams{},
                                    PropagationParams{}, 9);
        REQUIRE(rows.size() == 8);
        for (const auto& r : rows) {
            CHECK(r.path_length > 0.0);
            CHECK(r.found_iteration >= 0);
        }
        const auto csv = bench_csv(rows, 9);
        CHECK(csv.find("alpha,beta,rho,path_length,iteration") != std::string::npos);
    }

    TEST_CASE("two-node graphs settle on the single edge for every triple") {
        const auto path = write_temp("pair.graph",
                                     "node 0 0 0\nnode 1 40 0\nrange 50\n");
        const auto g = load_graph_file(path);
        const auto rows = aco_bench(g, default_bench_triples(), 0, 1,
                                    aco::AcoParams{}, PropagationParams{}, 3);
        for (const auto& r : rows) CHECK(r.path_length == doctest::Approx(40.0));
    }

    TEST_CASE("disconnected graphs are rejected") {
        const auto path = write_temp(
            "split.graph", "node 0 0 0\nnode 1 10 0\nnode 2 500 0\nrange 50\n");
        const auto g = load_graph_file(path);
        CHECK_THROWS_WITH_AS(
            aco_bench(g, default_bench_triples(), 0, 2, aco::AcoParams{},
                      PropagationParams{}, 3),
            doctest::Contains("disconnected"), std::runtime_error);
    }

    TEST_CASE("graph file parse errors") {
        CHECK_THROWS_AS(parse_graph("node 0 0 0\nnode 2 1 1\nrange 5\n"),
                        std::runtime_error);  // ids not dense
        CHECK_THROWS_AS(parse_graph("node 0 0 0\n"), std::runtime_error);
        CHECK_THROWS_AS(parse_graph("frob 1 2\n"), std::runtime_error);
        // explicit edges work without a range line
        const auto g = parse_graph("node 0 0 0\nnode 1 9 0\nedge 0 1\n");
        CHECK(g.graph.has_edge(0, 1));
    }

    TEST_CASE("heuristic-blind search does no better than the tuned triple") {
        Rng rng(12);
        PropagationParams prop;
        prop.shadowing_sigma_db = 0.0;
        prop.sensitivity_dbm = -120.0;
        RadioModel radio(prop, 1);
        auto tg = test::random_connected_graph(20, 400.0, 150.0, 0.5, rng);
        double blind = 0.0, tuned = 0.0;
        int done = 0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            aco::AcoParams pb;
            pb.alpha = 1.0;
            pb.beta = 0.0;  // ignore the heuristic entirely
            const auto rb = aco::solve(0, 19, tg.graph, tg.nodes, radio, pb, seed);
            aco::AcoParams pt;  // tuned defaults: alpha 5, beta 10, rho 0.6
            const auto rt = aco::solve(0, 19, tg.graph, tg.nodes, radio, pt, seed);
            if (rb && rt) {
                blind += rb->best.length;
                tuned += rt->best.length;
                ++done;
            }
        }
        REQUIRE(done >= 8);
        CHECK(blind >= tuned);
    }
}
