// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <bribesim/network.h>

#include <boost/test/unit_test.hpp>

#include <cmath>
#include <vector>

using namespace bribesim;

BOOST_AUTO_TEST_SUITE(network_tests)

BOOST_AUTO_TEST_CASE(rng_streams_are_label_scoped)
{
    RngStreams s(42);
    Rng a = s.stream("mining"), b = s.stream("mining"), c = s.stream("delay");
    const auto va = a(), vb = b(), vc = c();
    BOOST_CHECK_EQUAL(va, vb);
    BOOST_CHECK_NE(va, vc);
    BOOST_CHECK_NE(RngStreams(43).stream("mining")(), va);

    Rng r = s.stream("u");
    for (int i = 0; i < 10'000; ++i) {
        const double u = uniform01(r);
        BOOST_REQUIRE(u >= 0.0 && u < 1.0);
        BOOST_REQUIRE_GT(sample_exponential(r, 15.0), 0.0);
    }
}

BOOST_AUTO_TEST_CASE(topology_two_nodes)
{
    const auto g = build_topology(2, 25, 1);
    BOOST_REQUIRE_EQUAL(g.edges().size(), 1u);
    BOOST_CHECK(g.has_edge(0, 1));
}

BOOST_AUTO_TEST_CASE(topology_hundred_nodes)
{
    for (uint64_t seed = 0; seed < 10; ++seed) {
        const auto g = build_topology(100, 25, seed);
        BOOST_CHECK(g.is_connected());
        BOOST_CHECK_LE(g.max_degree(), 25u);
        for (size_t v = 0; v < g.size(); ++v) BOOST_CHECK(!g.has_edge(v, v));
    }
    // Degree 2 still connects via the spanning tree.
    const auto thin = build_topology(50, 2, 3);
    BOOST_CHECK(thin.is_connected());
    BOOST_CHECK_LE(thin.max_degree(), 2u);
}

BOOST_AUTO_TEST_CASE(topology_deterministic)
{
    BOOST_CHECK(build_topology(100, 25, 9).edges() == build_topology(100, 25, 9).edges());
    BOOST_CHECK(build_topology(100, 25, 9).edges() != build_topology(100, 25, 10).edges());
}

BOOST_AUTO_TEST_CASE(topology_errors)
{
    BOOST_CHECK_THROW(build_topology(1, 25, 0), TopologyError);
    BOOST_CHECK_THROW(build_topology(10, 0, 0), TopologyError);
    BOOST_CHECK_THROW(build_topology(3, 1, 0), TopologyError);
}

BOOST_AUTO_TEST_CASE(propagate_zero_delay)
{
    const auto g = build_topology(30, 4, 2);
    Rng rng = RngStreams(1).stream("delay");
    const auto out = propagate(5, 12.5, g, FixedDelay{0.0}, rng);
    BOOST_CHECK_EQUAL(out.size(), 29u);
    for (const auto& d : out) {
        BOOST_CHECK_NE(d.node, 5u);
        BOOST_CHECK_EQUAL(d.time, 12.5);
    }
}

BOOST_AUTO_TEST_CASE(propagate_line)
{
    PeerGraph line(3);
    line.add_edge(0, 1);
    line.add_edge(1, 2);
    Rng rng = RngStreams(1).stream("delay");
    const auto out = propagate(0, 100.0, line, FixedDelay{1.0}, rng);
    BOOST_REQUIRE_EQUAL(out.size(), 2u);
    BOOST_CHECK_EQUAL(out[0].node, 1u);
    BOOST_CHECK_EQUAL(out[0].time, 101.0);
    BOOST_CHECK_EQUAL(out[1].node, 2u);
    BOOST_CHECK_EQUAL(out[1].time, 102.0);
}

BOOST_AUTO_TEST_CASE(propagate_uniform_deterministic)
{
    const auto g = build_topology(60, 6, 4);
    const UniformDelay model{0.2, 1.5};
    Rng r1 = RngStreams(77).stream("delay"), r2 = RngStreams(77).stream("delay");
    const auto a = propagate(3, 10.0, g, model, r1);
    const auto b = propagate(3, 10.0, g, model, r2);
    BOOST_REQUIRE_EQUAL(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        BOOST_CHECK_EQUAL(a[i].node, b[i].node);
        BOOST_CHECK_EQUAL(a[i].time, b[i].time);
        BOOST_CHECK_GE(a[i].time, 10.2);
        if (i) BOOST_CHECK_GE(a[i].time, a[i - 1].time);
    }
}

BOOST_AUTO_TEST_CASE(schedule_single_miner)
{
    Rng rng = RngStreams(3).stream("mining");
    const std::vector<double> hp{500.0};
    SimTime t = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto d = schedule_mining(rng, hp, 500.0, 15.0, t);
        BOOST_REQUIRE(d.finder && *d.finder == 0);
        BOOST_REQUIRE_GT(d.time, t);
        t = d.time;
    }
}

BOOST_AUTO_TEST_CASE(schedule_mean_interval_and_shares)
{
    Rng rng = RngStreams(11).stream("mining");
    const std::vector<double> hp{100.0, 300.0, 600.0};
    std::vector<int> wins(3, 0);
    const int n = 10'000;
    SimTime t = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto d = schedule_mining(rng, hp, 1000.0, 15.0, t);
        BOOST_REQUIRE(d.finder);
        ++wins[*d.finder];
        t = d.time;
    }
    BOOST_CHECK_CLOSE(t / n, 15.0, 5.0);
    for (size_t i = 0; i < hp.size(); ++i) {
        const double p = hp[i] / 1000.0;
        const double sigma = std::sqrt(n * p * (1.0 - p));
        BOOST_CHECK_LE(std::abs(wins[i] - n * p), 3.0 * sigma);
    }
}

BOOST_AUTO_TEST_CASE(schedule_uncovered_hash_rate)
{
    Rng rng = RngStreams(12).stream("mining");
    const std::vector<double> hp{100.0};
    int found = 0;
    for (int i = 0; i < 4000; ++i) found += schedule_mining(rng, hp, 400.0, 15.0, 0.0).finder.has_value();
    BOOST_CHECK_LE(std::abs(found - 1000), 3.0 * std::sqrt(4000 * 0.25 * 0.75));
    BOOST_CHECK_THROW(schedule_mining(rng, hp, 50.0, 15.0, 0.0), std::invalid_argument);
}

BOOST_AUTO_TEST_CASE(event_queue_order)
{
    EventQueue q;
    q.push(5.0, EventKind::BlockFound, 0);
    q.push(1.0, EventKind::DeliverBlock, 1);
    q.push(5.0, EventKind::ContractTick);
    q.push(1.0, EventKind::DeliverBlock, 2);
    std::vector<std::pair<double, uint64_t>> seen;
    while (!q.empty()) {
        const auto e = q.pop();
        seen.emplace_back(e.time, e.seq);
    }
    const std::vector<std::pair<double, uint64_t>> expected{{1.0, 1}, {1.0, 3}, {5.0, 0}, {5.0, 2}};
    BOOST_CHECK(seen == expected);
    BOOST_CHECK_EQUAL(to_string(EventKind::DeliverBlock), "deliver-block");
}

BOOST_AUTO_TEST_SUITE_END()
