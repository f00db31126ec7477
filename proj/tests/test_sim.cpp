#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "ehrp/metrics.hpp"
#include "ehrp/sim.hpp"

using namespace ehrp;

namespace {

ScenarioConfig small_cfg(int nodes, double side, Protocol proto = Protocol::Ehrp) {
    ScenarioConfig c;
    c.node_count = nodes;
    c.area_width = side;
    c.area_height = side;
    c.sink_count = 1;
    c.protocol = proto;
    c.lossless = true;
    c.max_rounds = 30;
    c.repetitions = 1;
    c.aco.ant_count = 8;
    c.aco.max_iterations = 10;
    return c;
}

NodeState node_at(NodeId id, Position pos, double energy, int grid) {
    NodeState n;
    n.id = id;
    n.position = pos;
    n.energy = EnergyAccount(energy);
    n.grid_id = grid;
    return n;
}

/// Row of single-node grids along y=10, cell 60 m wide, 20 m tall.
Deployment row_deployment(const std::vector<double>& xs,
                          const std::vector<double>& energies) {
    Deployment d;
    d.lattice = {1, static_cast<int>(xs.size()), 60.0, 20.0};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        VirtualGrid g;
        g.id = static_cast<int>(i);
        g.row = 0;
        g.col = static_cast<int>(i);
        g.bounds = {60.0 * i, 0, 60.0 * (i + 1), 20.0};
        g.member_ids = {static_cast<NodeId>(i)};
        d.grids.push_back(g);
        d.nodes.push_back(node_at(static_cast<NodeId>(i), {xs[i], 10.0},
                                  energies[i], static_cast<int>(i)));
    }
    return d;
}

}  // namespace

TEST_SUITE("metrics.ops") {
    TEST_CASE("lifetime thresholds") {
        const std::vector<int> series{10, 10, 4, 3};
        CHECK(lifetime_hna(series, 10).rounds == 2);
        CHECK(lifetime_hna(series, 10).reached);
        CHECK(lifetime_fnd(series, 10).rounds == 2);

        const std::vector<int> immortal{10, 10, 10};
        const auto hna = lifetime_hna(immortal, 10);
        CHECK(hna.rounds == 3);
        CHECK_FALSE(hna.reached);

        // odd node count: ceil(9/2) = 5
        const std::vector<int> odd{9, 5, 4};
        CHECK(lifetime_hna(odd, 9).rounds == 2);
        // the paper-scale threshold: 900 nodes -> 450
        std::vector<int> big(3, 450);
        CHECK_FALSE(lifetime_hna(big, 900).reached);
        big.push_back(449);
        CHECK(lifetime_hna(big, 900).rounds == 3);
    }

    TEST_CASE("wasted energy sums residuals") {
        std::vector<NodeState> nodes{node_at(0, {0, 0}, 0.1, 0),
                                     node_at(1, {1, 0}, 0.2, 0)};
        CHECK(wasted_energy(nodes) == doctest::Approx(0.3));
        nodes[0].energy.apply(1.0);
        nodes[1].energy.apply(1.0);
        CHECK(wasted_energy(nodes) == 0.0);
    }

    TEST_CASE("analytic lifetime") {
        CHECK(analytic_lifetime(10, 0.5, 0.05, 0.0) == doctest::Approx(100.0));
        CHECK(analytic_lifetime(10, 0.5, 0.05, 5.0) == doctest::Approx(0.0));
        const double half = analytic_lifetime(10, 0.5, 0.05, 1.0);
        const double full = analytic_lifetime(10, 0.5, 0.05, 2.0);
        CHECK(half > full);
        CHECK_THROWS_AS(analytic_lifetime(10, 0.5, 0.0, 0.0), std::invalid_argument);
    }

    TEST_CASE("pdr ratio and convention") {
        CHECK(pdr(90, 100) == doctest::Approx(0.9));
        CHECK(pdr(0, 0) == 1.0);
    }

    TEST_CASE("packet delay decomposition") {
        Packet p;
        p.delivered = true;
        p.hop_count = 1;
        p.waiting_rounds = 0;
        CHECK(packet_delay(p, 0.01, 10.0) == doctest::Approx(0.01));
        p.hop_count = 3;
        CHECK(packet_delay(p, 0.01, 10.0) == doctest::Approx(0.03));
        p.hop_count = 1;
        p.waiting_rounds = 5;
        CHECK(packet_delay(p, 0.01, 10.0) == doctest::Approx(50.01));
        Packet und;
        CHECK_THROWS_AS(packet_delay(und, 0.01, 10.0), std::invalid_argument);
    }

    TEST_CASE("average delay over delivered packets") {
        Packet a, b, c;
        a.delivered = b.delivered = true;
        a.hop_count = 1;
        b.hop_count = 3;
        std::vector<Packet> packets{a, b, c};
        CHECK(average_delay(packets, 0.01, 10.0) == doctest::Approx(0.02));
        std::vector<Packet> none{c};
        CHECK(average_delay(none, 0.01, 10.0) == 0.0);
    }
}

TEST_SUITE("sim.engine") {
    TEST_CASE("minimal network: one aggregated packet per round, single hop") {
        const auto cfg = small_cfg(5, 50.0);
        Simulation sim(cfg, 7);
        for (int r = 0; r < 10; ++r) {
            const auto out = sim.run_round();
            CHECK(out.generated == 1);
            CHECK(out.delivered == 1);
            CHECK(out.mean_hops == doctest::Approx(1.0));
        }
        for (const auto& p : sim.packets()) {
            CHECK(p.delivered);
            CHECK(p.hop_count == 1);
            CHECK(p.waiting_rounds == 0);
        }
    }

    TEST_CASE("zero initial energy: empty run") {
        auto cfg = small_cfg(5, 50.0);
        cfg.initial_energy = 0.0;
        const auto r = run_simulation(cfg, 1);
        CHECK(r.rounds_executed == 0);
        CHECK(r.lifetime_hna == 0);
        CHECK(r.hna_reached);
        CHECK(r.delivered == 0);
        CHECK(r.generated == 0);
    }

    TEST_CASE("same config and seed reproduce the report bit for bit") {
        auto cfg = small_cfg(30, 300.0);
        cfg.lossless = false;  // exercise the stochastic paths too
        cfg.max_rounds = 15;
        const auto a = run_simulation(cfg, 42);
        const auto b = run_simulation(cfg, 42);
        CHECK(a.total_energy == b.total_energy);
        CHECK(a.delivered == b.delivered);
        CHECK(a.dropped == b.dropped);
        CHECK(a.avg_delay_s == b.avg_delay_s);
        REQUIRE(a.series.rounds() == b.series.rounds());
        for (std::size_t i = 0; i < a.series.rounds(); ++i) {
            CHECK(a.series.energy_cum[i] == b.series.energy_cum[i]);
            CHECK(a.series.alive[i] == b.series.alive[i]);
        }
        const auto c = run_simulation(cfg, 43);
        CHECK(a.total_energy != c.total_energy);
    }

    TEST_CASE("relay chain delivers with three hops (two-sink layout)") {
        // Six single-node grids in a row; comm range 70 forces the chain
        // 0 -> 1 -> 2, and grid 2 is served by sink A on round 2.
        auto d = row_deployment({10, 80, 149, 190, 250, 310},
                                {0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
        ScenarioConfig cfg;
        cfg.node_count = 30;  // not used by the crafted deployment
        cfg.sink_count = 2;
        cfg.comm_range = 70.0;
        cfg.lossless = true;
        cfg.max_rounds = 5;
        cfg.aco.ant_count = 10;
        cfg.aco.max_iterations = 10;
        Simulation sim(cfg, 5, std::move(d));

        REQUIRE(sim.sinks().size() == 2);
        CHECK(sim.sinks()[0].assigned_grid_ids == std::vector<int>{0, 1, 2});
        CHECK(sim.sinks()[1].assigned_grid_ids == std::vector<int>{3, 4, 5});

        sim.run_round();  // round 0
        sim.run_round();  // round 1
        sim.run_round();  // round 2: sink A parked on grid 2
        bool found_three_hop = false, found_direct = false, found_two_hop = false;
        for (const auto& p : sim.packets()) {
            if (p.created_round != 2 || !p.delivered) continue;
            if (p.origin_grid == 0) {
                CHECK(p.hop_count == 3);  // 0 ->relay 1 -> CH 2 -> sink
                found_three_hop = true;
            }
            if (p.origin_grid == 1) {
                CHECK(p.hop_count == 1);  // sink itself within range
                found_direct = true;
            }
            if (p.origin_grid == 4) {
                CHECK(p.hop_count == 2);  // 4 -> CH 5 -> sink B
                found_two_hop = true;
            }
        }
        CHECK(found_three_hop);
        CHECK(found_direct);
        CHECK(found_two_hop);
    }

    TEST_CASE("cluster head death mid-round fails over, packet survives") {
        Deployment d;
        d.lattice = {1, 1, 60.0, 60.0};
        VirtualGrid g;
        g.id = 0;
        g.bounds = {0, 0, 60, 60};
        g.member_ids = {0, 1, 2};
        g.rotation_order = {0, 1, 2};  // pin the dying node as round-0 CH
        g.ch_id = 0;
        g.backup_ch_id = 1;
        d.grids.push_back(g);
        d.nodes.push_back(node_at(0, {30, 30}, 2.5e-4, 0));  // dies on 2nd rx
        d.nodes.push_back(node_at(1, {20, 30}, 0.5, 0));
        d.nodes.push_back(node_at(2, {40, 30}, 0.5, 0));
        d.elections_performed = 1;

        ScenarioConfig cfg;
        cfg.sink_count = 1;
        cfg.lossless = true;
        cfg.max_rounds = 2;
        Simulation sim(cfg, 3, std::move(d));
        const auto out = sim.run_round();
        CHECK(out.generated == 1);
        CHECK(out.delivered == 1);  // backup served the same round
        CHECK(sim.stats().failovers >= 1);
        CHECK_FALSE(sim.nodes()[0].alive());
        CHECK(sim.grids()[0].ch_id == 1);
    }

    TEST_CASE("dead CH and backup disband the grid; survivors get adopted") {
        Deployment d;
        d.lattice = {1, 2, 60.0, 60.0};
        VirtualGrid g0;
        g0.id = 0;
        g0.bounds = {0, 0, 60, 60};
        g0.member_ids = {0, 1, 2};
        g0.rotation_order = {0, 1, 2};
        g0.ch_id = 0;
        g0.backup_ch_id = 1;
        d.grids.push_back(g0);
        VirtualGrid g1;
        g1.id = 1;
        g1.bounds = {60, 0, 120, 60};
        g1.member_ids = {3, 4};
        d.grids.push_back(g1);
        d.nodes.push_back(node_at(0, {30, 30}, 1.5e-4, 0));  // CH: dies receiving
        d.nodes.push_back(node_at(1, {20, 30}, 1.0e-4, 0));  // backup: dies transmitting
        d.nodes.push_back(node_at(2, {50, 30}, 0.5, 0));     // survivor
        d.nodes.push_back(node_at(3, {70, 30}, 0.5, 1));
        d.nodes.push_back(node_at(4, {80, 30}, 0.5, 1));
        d.elections_performed = 1;

        ScenarioConfig cfg;
        cfg.sink_count = 1;
        cfg.lossless = true;
        cfg.max_rounds = 3;
        Simulation sim(cfg, 3, std::move(d));
        sim.run_round();
        CHECK_FALSE(sim.grids()[0].active);
        sim.run_round();  // adoption pass runs at the next round start
        CHECK(sim.nodes()[2].grid_id == 1);
        CHECK(sim.stats().adoptions >= 1);
    }

    TEST_CASE("wait-for-sink buffers until served; ehrp never waits") {
        auto d = row_deployment({30, 90, 150, 210}, {0.5, 0.5, 0.5, 0.5});
        ScenarioConfig cfg;
        cfg.sink_count = 1;
        cfg.comm_range = 100.0;
        cfg.lossless = true;
        cfg.protocol = Protocol::WaitForSink;
        cfg.max_rounds = 4;
        Simulation sim(cfg, 11, std::move(d));
        for (int r = 0; r < 4; ++r) sim.run_round();

        bool waited = false;
        for (const auto& p : sim.packets()) {
            if (!p.delivered) continue;
            CHECK(p.hop_count == 1);
            CHECK(p.waiting_rounds == p.delivered_round - p.created_round);
            waited = waited || p.waiting_rounds > 0;
            if (p.origin_grid == 3 && p.created_round == 0) {
                CHECK(p.delivered_round == 3);
                CHECK(p.waiting_rounds == 3);
                const double rd = sim.round_duration_s();
                CHECK(packet_delay(p, cfg.hop_time_s, rd) ==
                      doctest::Approx(0.01 + 3 * rd));
            }
        }
        CHECK(waited);

        // ehrp on the same layout: zero waiting everywhere
        auto d2 = row_deployment({30, 90, 150, 210}, {0.5, 0.5, 0.5, 0.5});
        cfg.protocol = Protocol::Ehrp;
        Simulation sim2(cfg, 11, std::move(d2));
        for (int r = 0; r < 4; ++r) sim2.run_round();
        for (const auto& p : sim2.packets())
            if (p.delivered) CHECK(p.waiting_rounds == 0);
    }

    TEST_CASE("paired seeds: hybrid mean delay beats wait-for-sink") {
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            auto cfg = small_cfg(50, 400.0);
            cfg.sink_count = 2;
            cfg.max_rounds = 25;
            const auto ehrp = run_simulation(cfg, seed);
            cfg.protocol = Protocol::WaitForSink;
            const auto wait = run_simulation(cfg, seed);
            REQUIRE(ehrp.delivered > 0);
            REQUIRE(wait.delivered > 0);
            CHECK(ehrp.avg_delay_s < wait.avg_delay_s);
        }
    }

    TEST_CASE("refresh control traffic pays the radio model prices") {
        Deployment d;
        d.lattice = {1, 1, 60.0, 10.0};
        VirtualGrid g;
        g.id = 0;
        g.bounds = {0, 0, 60, 10};
        g.member_ids = {0, 1, 2};
        d.grids.push_back(g);
        d.nodes.push_back(node_at(0, {0, 0}, 0.50, 0));
        d.nodes.push_back(node_at(1, {20, 0}, 0.49, 0));  // round-1 CH
        d.nodes.push_back(node_at(2, {40, 0}, 0.48, 0));
        ScenarioConfig cfg;
        cfg.sink_count = 1;
        cfg.lossless = true;
        cfg.refresh_period = 1;
        cfg.max_rounds = 2;
        Simulation sim(cfg, 1, std::move(d));
        sim.run_round();  // round 0: no refresh yet
        CHECK(sim.energy_use_total(EnergyUse::TxControl) == 0.0);
        sim.run_round();  // round 1: CH is node 1, both members at 20 m
        const double expected_tx = 2.0 * tx_energy(200, 20, cfg.radio);
        const double expected_rx = 2.0 * rx_energy(200, cfg.radio);
        CHECK(sim.energy_use_total(EnergyUse::TxControl) ==
              doctest::Approx(expected_tx).epsilon(1e-12));
        CHECK(sim.energy_use_total(EnergyUse::RxControl) ==
              doctest::Approx(expected_rx).epsilon(1e-12));
    }

    TEST_CASE("clustering happens once; ledgers stay exact") {
        auto cfg = small_cfg(100, 600.0);
        cfg.sink_count = 2;
        cfg.lossless = false;
        cfg.max_rounds = 25;
        Simulation sim(cfg, 21);
        const auto report = sim.run();
        CHECK(sim.stats().elections_performed == 20);  // |grids| and never again
        CHECK(report.ledger_exact);
        CHECK(report.conservation_ok);
        CHECK(report.generated ==
              report.delivered + report.dropped + report.in_flight);
        CHECK(report.total_energy == report.ledger_total_debited);
        // dead nodes hold zero residual and stop changing
        for (const auto& n : sim.nodes())
            if (!n.alive()) CHECK(n.residual_energy() == 0.0);
    }

    TEST_CASE("idle drain debits every alive node once per round") {
        auto cfg = small_cfg(5, 50.0);
        cfg.idle_drain = 1e-3;
        cfg.max_rounds = 3;
        Simulation sim(cfg, 2);
        for (int r = 0; r < 3; ++r) sim.run_round();
        CHECK(sim.energy_use_total(EnergyUse::Idle) ==
              doctest::Approx(5 * 3 * 1e-3).epsilon(1e-12));
    }

    TEST_CASE("exactly one cluster head per active grid, every round") {
        auto cfg = small_cfg(50, 400.0);
        cfg.sink_count = 2;
        cfg.initial_energy = 0.01;  // force deaths and failovers
        cfg.max_rounds = 40;
        Simulation sim(cfg, 13);
        for (int r = 0; r < 40 && sim.alive_count() > 0; ++r) {
            sim.run_round();
            for (const auto& g : sim.grids()) {
                if (!g.active) continue;
                int ch_roles = 0;
                for (NodeId m : g.member_ids)
                    if (sim.nodes()[m].alive() &&
                        sim.nodes()[m].role == NodeRole::ClusterHead)
                        ++ch_roles;
                CHECK(ch_roles == 1);
                CHECK(sim.nodes()[g.ch_id].alive());
            }
        }
    }

    TEST_CASE("route distance equals the stored path length") {
        std::vector<NodeState> nodes{node_at(0, {0, 0}, 0.5, 0),
                                     node_at(1, {30, 40}, 0.5, 0),
                                     node_at(2, {60, 80}, 0.5, 0)};
        aco::RoutePath p;
        p.nodes = {0, 1, 2};
        const auto g = CommGraph::build_from_edges(
            nodes, std::vector<std::pair<NodeId, NodeId>>{{0, 1}, {1, 2}});
        aco::finalize_route(p, g, nodes);
        CHECK(aco::route_distance(p, nodes) == doctest::Approx(p.length).epsilon(1e-9));
        CHECK(p.length == doctest::Approx(100.0));
        aco::RoutePath single;
        single.nodes = {0, 1};
        aco::finalize_route(single, g, nodes);
        CHECK(single.length == doctest::Approx(50.0));  // single 50 m hop
    }
}
