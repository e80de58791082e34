// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <bribesim/agents.h>
#include <bribesim/economics.h>

#include "util.h"

#include <boost/test/unit_test.hpp>

#include <cmath>

using namespace bribesim;
using bribesim::test::child;
using bribesim::test::Gen;

namespace {

MinerAgent make_agent(AgentId id, Strategy s, double alpha = 400.0) { return MinerAgent(AgentSpec{id, s, alpha}); }

RationalInputs reference_inputs(double alpha)
{
    return RationalInputs{alpha, economics::default_network_hash_rate(), 15.0, 2.0, 0.002, 3.0};
}

/** Chain of blocks built outside any agent, for feeding views. */
std::vector<BlockPtr> chain_from(const BlockPtr& base, size_t n, AgentId miner, uint64_t nonce)
{
    std::vector<BlockPtr> out;
    BlockPtr tip = base;
    for (size_t i = 0; i < n; ++i) {
        tip = child(*tip, miner, {}, nonce);
        out.push_back(tip);
    }
    return out;
}

} // namespace

BOOST_AUTO_TEST_SUITE(agents_tests)

BOOST_AUTO_TEST_CASE(strategy_names)
{
    BOOST_CHECK(parse_strategy("selfish") == Strategy::Selfish);
    BOOST_CHECK(!parse_strategy("greedy"));
    BOOST_CHECK_EQUAL(to_string(Strategy::Rational), "rational");
    BOOST_CHECK_THROW(make_agent(0, Strategy::Honest, 0.0), std::invalid_argument);
}

BOOST_AUTO_TEST_CASE(honest_decide_examples)
{
    auto a = make_agent(0, Strategy::Honest);
    BOOST_CHECK(honest_decide(a).target == a.view().genesis());
    BOOST_CHECK(honest_decide(a).broadcast_immediately);

    const auto four = chain_from(Block::genesis(), 4, 1, 1);
    const auto five = chain_from(Block::genesis(), 5, 2, 2);
    for (const auto& b : four) a.receive(b);
    for (const auto& b : five) a.receive(b);
    BOOST_CHECK(honest_decide(a).target == five.back()->id());
    BOOST_CHECK(mining_decision(a).target == five.back()->id());
}

BOOST_AUTO_TEST_CASE(receive_parks_out_of_order_blocks)
{
    auto a = make_agent(0, Strategy::Honest);
    const auto blocks = chain_from(Block::genesis(), 3, 1, 1);
    BOOST_CHECK(a.receive(blocks[2]).empty());
    BOOST_CHECK(a.receive(blocks[1]).empty());
    BOOST_CHECK_EQUAL(a.parked(), 2u);
    const auto inserted = a.receive(blocks[0]);
    BOOST_CHECK_EQUAL(inserted.size(), 3u);
    BOOST_CHECK_EQUAL(a.parked(), 0u);
    BOOST_CHECK(a.view().canonical_head() == blocks[2]->id());
}

BOOST_AUTO_TEST_CASE(selfish_withhold_then_release)
{
    auto s = make_agent(7, Strategy::Selfish);
    BOOST_CHECK(!mining_decision(s).broadcast_immediately);

    // Two private blocks: lead 2.
    auto p1 = child(*Block::genesis(), 7, {}, 1);
    s.add_own_block(p1);
    BOOST_CHECK(selfish_decide(s, FoundBlock{p1}).kind == SelfishActionKind::Withhold);
    auto p2 = child(*p1, 7, {}, 1);
    s.add_own_block(p2);
    BOOST_CHECK(selfish_decide(s, FoundBlock{p2}).kind == SelfishActionKind::Withhold);
    BOOST_CHECK_EQUAL(s.private_blocks().size(), 2u);
    BOOST_CHECK(mining_decision(s).target == p2->id());

    // Public tip reaches private_height - 1: release everything together.
    auto h1 = child(*Block::genesis(), 1, {}, 9);
    s.receive(h1);
    const auto act = selfish_decide(s, PublicBlock{h1});
    BOOST_CHECK(act.kind == SelfishActionKind::Release);
    BOOST_REQUIRE_EQUAL(act.blocks.size(), 2u);
    BOOST_CHECK(act.blocks[0] == p1 && act.blocks[1] == p2);
    BOOST_CHECK(s.private_blocks().empty());
    BOOST_CHECK(s.view().canonical_head() == p2->id());
}

BOOST_AUTO_TEST_CASE(selfish_keeps_lead_above_threshold)
{
    auto s = make_agent(7, Strategy::Selfish);
    BlockPtr tip = Block::genesis();
    for (int i = 0; i < 3; ++i) {
        tip = child(*tip, 7, {}, 1);
        s.add_own_block(tip);
        selfish_decide(s, FoundBlock{tip});
    }
    auto h1 = child(*Block::genesis(), 1, {}, 9);
    s.receive(h1);
    BOOST_CHECK(selfish_decide(s, PublicBlock{h1}).kind == SelfishActionKind::None);
    BOOST_CHECK_EQUAL(s.private_blocks().size(), 3u);
    // A stale public block that does not raise the public height changes nothing.
    auto h1b = child(*Block::genesis(), 2, {}, 10);
    s.receive(h1b);
    BOOST_CHECK(selfish_decide(s, PublicBlock{h1b}).kind == SelfishActionKind::None);
    auto h2 = child(*h1, 1, {}, 9);
    s.receive(h2);
    BOOST_CHECK(selfish_decide(s, PublicBlock{h2}).kind == SelfishActionKind::Release);
}

BOOST_AUTO_TEST_CASE(selfish_release_lead_is_configurable)
{
    auto s = make_agent(7, Strategy::Selfish);
    BlockPtr tip = Block::genesis();
    for (int i = 0; i < 3; ++i) {
        tip = child(*tip, 7, {}, 1);
        s.add_own_block(tip);
        selfish_decide(s, FoundBlock{tip}, 2);
    }
    auto h1 = child(*Block::genesis(), 1, {}, 9);
    s.receive(h1);
    BOOST_CHECK(selfish_decide(s, PublicBlock{h1}, 2).kind == SelfishActionKind::Release);
}

BOOST_AUTO_TEST_CASE(selfish_discards_when_overtaken)
{
    // Small-trace oracle: the public chain jumps from 0 to 2 in one delivery, the private
    // branch of height 1 can no longer win under longest-chain and must be abandoned.
    auto s = make_agent(7, Strategy::Selfish);
    auto p1 = child(*Block::genesis(), 7, {}, 1);
    s.add_own_block(p1);
    selfish_decide(s, FoundBlock{p1});
    // With lead 1 nothing is published until the public chain moves.
    BOOST_CHECK(selfish_decide(s, PublicBlock{p1}).kind == SelfishActionKind::None);

    const auto pub = chain_from(Block::genesis(), 2, 1, 9);
    BOOST_CHECK(s.receive(pub[1]).empty());
    s.receive(pub[0]);
    BOOST_CHECK_EQUAL(s.public_height(), 2u);
    const auto act = selfish_decide(s, PublicBlock{pub[0]});
    BOOST_CHECK(act.kind == SelfishActionKind::Discard);
    BOOST_CHECK_EQUAL(act.blocks.size(), 1u);
    BOOST_CHECK(s.private_blocks().empty());
    BOOST_CHECK(mining_decision(s).target == pub[1]->id());
}

BOOST_AUTO_TEST_CASE(selfish_decide_rejects_other_strategies)
{
    auto h = make_agent(0, Strategy::Honest);
    BOOST_CHECK_THROW(selfish_decide(h, FoundBlock{Block::genesis()}), std::logic_error);
}

BOOST_AUTO_TEST_CASE(rational_joins_under_scenario_constants)
{
    for (double alpha = 10.0; alpha <= 400.0; alpha += 10.0) BOOST_CHECK(rational_decide(reference_inputs(alpha)));
    for (double alpha = 10.0; alpha <= 400.0; alpha += 10.0) {
        auto in = reference_inputs(alpha);
        in.mining_bribe = 1.0;
        in.accept_bribe_per_hour = 0.0;
        BOOST_CHECK(!rational_decide(in));
    }
}

BOOST_AUTO_TEST_CASE(rational_gap_matches_closed_form)
{
    // Gamma - theta = tau_h + (alpha/beta)(3600/phi)(mu_m - R).
    Gen g(5);
    for (int i = 0; i < 1000; ++i) {
        const double alpha = 1.0 + static_cast<double>(g.below(100'000));
        const double beta = alpha + static_cast<double>(g.below(1'000'000'000));
        const double phi = 1.0 + static_cast<double>(g.below(60));
        const double tau = static_cast<double>(g.below(1000)) / 1e5;
        const double mu = static_cast<double>(1 + g.below(600)) / 100.0;
        const double r = 2.0;
        const double theta = economics::honest_hourly_reward(alpha, beta, r, phi).value;
        const double gamma = economics::bribed_hourly_reward(tau, alpha, beta, mu, phi).value;
        const double closed = tau + (alpha / beta) * (3600.0 / phi) * (mu - r);
        BOOST_REQUIRE_SMALL(gamma - theta - closed, 1e-9 * (1.0 + std::abs(closed)));
        const RationalInputs in{alpha, beta, phi, r, tau, mu};
        if (std::abs(closed) > 1e-9) BOOST_REQUIRE_EQUAL(rational_decide(in), closed > 0.0);
        // Pure function: repeated evaluation agrees.
        BOOST_REQUIRE_EQUAL(rational_decide(in), rational_decide(in));
    }
}

BOOST_AUTO_TEST_CASE(rational_offers)
{
    const auto base = reference_inputs(400.0);
    auto r = make_agent(1, Strategy::Rational);
    BOOST_CHECK(!rational_decide(r, base, {}));
    const BribeOffer good{0.002, 3.0};
    const BribeOffer poor{0.0, 1.0};
    BOOST_CHECK(rational_decide(r, base, std::span<const BribeOffer>(&good, 1)));
    BOOST_CHECK(!rational_decide(r, base, std::span<const BribeOffer>(&poor, 1)));
    auto h = make_agent(2, Strategy::Honest);
    BOOST_CHECK(!rational_decide(h, base, std::span<const BribeOffer>(&good, 1)));

    // A join margin above the relative gap keeps the agent honest.
    auto strict = base;
    strict.join_margin = 10.0;
    BOOST_CHECK(!rational_decide(strict));
}

BOOST_AUTO_TEST_CASE(accept_policy_honest_and_invalid)
{
    auto a = make_agent(0, Strategy::Honest);
    const auto main = chain_from(Block::genesis(), 3, 1, 1);
    for (const auto& b : main) BOOST_CHECK(accept_block_policy(a, b).outcome == AcceptOutcome::Accepted);
    auto fork = child(*main[0], 2, {}, 2);
    const auto d = accept_block_policy(a, fork);
    BOOST_CHECK(d.outcome == AcceptOutcome::Accepted);
    BOOST_CHECK(d.claims.empty());
    BOOST_CHECK(a.view().canonical_head() == main[2]->id());

    auto ghost_parent = child(*main[2], 5, {}, 77);
    auto ghost = child(*ghost_parent, 5);
    for (auto s : {Strategy::Honest, Strategy::Selfish, Strategy::Rational}) {
        auto agent = make_agent(3, s);
        BOOST_CHECK(accept_block_policy(agent, ghost).outcome == AcceptOutcome::Ignored);
    }
}

BOOST_AUTO_TEST_CASE(accept_policy_bribed_claims)
{
    auto a = make_agent(0, Strategy::Rational);
    const auto main = chain_from(Block::genesis(), 6, 1, 1);
    for (const auto& b : main) a.receive(b);

    a.join_bribery(main[2]->id());
    BOOST_CHECK(mining_decision(a).target == main[2]->id());

    auto root = child(*main[2], 4, {}, 3);
    a.receive(root);
    a.set_fork_root(root->id());
    BOOST_CHECK(mining_decision(a).target == root->id());

    auto next = child(*root, 5, {}, 3);
    const auto d = accept_block_policy(a, next);
    BOOST_CHECK(d.outcome == AcceptOutcome::Accepted);
    BOOST_REQUIRE_EQUAL(d.claims.size(), 1u);
    BOOST_CHECK(d.claims[0].role == ClaimRole::Accepted);
    BOOST_CHECK(d.claims[0].claimed_block == next->id());
    BOOST_REQUIRE_EQUAL(d.claims[0].segment.size(), 2u);
    BOOST_CHECK(d.claims[0].segment.front()->id() == root->id());
    BOOST_CHECK(mining_decision(a).target == next->id());

    // Its own fork blocks are claimed as mined elsewhere, not accepted here.
    auto own = child(*next, 0, {}, 3);
    BOOST_CHECK(accept_block_policy(a, own).claims.empty());

    a.leave_bribery();
    BOOST_CHECK(!a.bribed());
    BOOST_CHECK(mining_decision(a).target == main[5]->id());
}

BOOST_AUTO_TEST_SUITE_END()
