// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <bribesim/agents.h>
#include <bribesim/economics.h>

#include <algorithm>
#include <stdexcept>

namespace bribesim {

std::string_view to_string(Strategy s)
{
    switch (s) {
    case Strategy::Honest: return "honest";
    case Strategy::Selfish: return "selfish";
    case Strategy::Rational: return "rational";
    }
    return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view s)
{
    for (auto st : {Strategy::Honest, Strategy::Selfish, Strategy::Rational}) {
        if (to_string(st) == s) return st;
    }
    return std::nullopt;
}

std::string_view to_string(SelfishActionKind k)
{
    switch (k) {
    case SelfishActionKind::None: return "none";
    case SelfishActionKind::Withhold: return "withhold";
    case SelfishActionKind::Release: return "release";
    case SelfishActionKind::Discard: return "discard";
    }
    return "unknown";
}

MinerAgent::MinerAgent(AgentSpec spec, ChainParams chain, BlockPtr genesis)
    : spec_(spec), view_(std::move(genesis), chain)
{
    if (!(spec_.hash_power_mhs > 0.0)) throw std::invalid_argument("hash power must be positive");
}

void MinerAgent::on_inserted(const BlockPtr& block)
{
    if (!fork_root_) return;
    if (block->id() == *fork_root_ || fork_members_.contains(block->parent())) {
        fork_members_.insert(block->id());
        if (!fork_tip_ || block->height() > view_.get(*fork_tip_).height()) fork_tip_ = block->id();
    }
}

std::vector<BlockPtr> MinerAgent::receive(BlockPtr block)
{
    std::vector<BlockPtr> inserted;
    auto result = view_.append(block);
    if (!result) {
        if (is_missing_dependency(result.reason())) {
            const bool known = std::any_of(parked_.begin(), parked_.end(),
                                           [&](const BlockPtr& p) { return p->id() == block->id(); });
            if (!known) {
                parked_.push_back(std::move(block));
                if (parked_.size() > MAX_PARKED) parked_.pop_front();
            }
        }
        return inserted;
    }
    inserted.push_back(block);
    on_inserted(block);

    for (bool progress = true; progress && !parked_.empty();) {
        progress = false;
        for (auto it = parked_.begin(); it != parked_.end();) {
            auto r = view_.append(*it);
            if (r) {
                inserted.push_back(*it);
                on_inserted(*it);
                progress = true;
                it = parked_.erase(it);
            } else if (!is_missing_dependency(r.reason())) {
                it = parked_.erase(it);
            } else {
                ++it;
            }
        }
    }
    for (const auto& b : inserted) public_height_ = std::max(public_height_, b->height());
    return inserted;
}

void MinerAgent::add_own_block(BlockPtr block)
{
    auto r = view_.append(block);
    if (!r) throw std::logic_error("own block rejected: " + std::string(to_string(r.reason())));
    on_inserted(block);
}

void MinerAgent::join_bribery(const BlockId& fork_parent)
{
    bribed_ = true;
    fork_parent_ = fork_parent;
}

void MinerAgent::leave_bribery()
{
    bribed_ = false;
    fork_parent_.reset();
    fork_root_.reset();
    fork_tip_.reset();
    fork_members_.clear();
}

void MinerAgent::set_fork_root(const BlockId& root)
{
    fork_root_ = root;
    fork_tip_.reset();
    fork_members_.clear();
    if (!view_.contains(root)) return;
    for (const auto& id : view_.subtree(root)) {
        fork_members_.insert(id);
        if (!fork_tip_ || view_.get(id).height() > view_.get(*fork_tip_).height()) fork_tip_ = id;
    }
}

MiningDecision honest_decide(const MinerAgent& agent) { return {agent.view().canonical_head(), true}; }

MiningDecision mining_decision(const MinerAgent& agent)
{
    if (agent.bribed()) {
        const auto& view = agent.view();
        if (agent.fork_tip()) return {*agent.fork_tip(), true};
        if (agent.fork_root() && view.contains(*agent.fork_root())) return {*agent.fork_root(), true};
        if (agent.fork_parent() && view.contains(*agent.fork_parent())) return {*agent.fork_parent(), true};
        return honest_decide(agent);
    }
    if (agent.strategy() == Strategy::Selfish) return {agent.view().canonical_head(), false};
    return honest_decide(agent);
}

SelfishAction selfish_decide(MinerAgent& agent, const SelfishEvent& event, Height release_lead)
{
    if (agent.strategy() != Strategy::Selfish) throw std::logic_error("selfish_decide on a non-selfish agent");
    if (const auto* found = std::get_if<FoundBlock>(&event)) {
        agent.private_.push_back(found->block);
        return {SelfishActionKind::Withhold, {}};
    }
    const Height public_height = agent.public_height_;
    if (public_height <= agent.decided_public_height_) return {};
    agent.decided_public_height_ = public_height;
    if (agent.private_.empty()) return {};
    const Height private_height = agent.private_.back()->height();
    SelfishAction action;
    if (public_height > private_height) {
        action.kind = SelfishActionKind::Discard;
    } else if (public_height + release_lead >= private_height) {
        action.kind = SelfishActionKind::Release;
        agent.public_height_ = private_height;
        agent.decided_public_height_ = private_height;
    } else {
        return {};
    }
    action.blocks = std::move(agent.private_);
    agent.private_.clear();
    return action;
}

bool rational_decide(const RationalInputs& in)
{
    const double theta = economics::honest_hourly_reward(in.alpha_mhs, in.network_hash_rate_mhs, in.block_reward,
                                                         in.block_interval).value;
    const double gamma = economics::bribed_hourly_reward(in.accept_bribe_per_hour, in.alpha_mhs,
                                                         in.network_hash_rate_mhs, in.mining_bribe, in.block_interval)
                             .value;
    return gamma > theta * in.eth_to_token * (1.0 + in.join_margin);
}

bool rational_decide(const MinerAgent& agent, const RationalInputs& base, std::span<const BribeOffer> offers)
{
    if (agent.strategy() != Strategy::Rational) return false;
    return std::any_of(offers.begin(), offers.end(), [&](const BribeOffer& o) {
        RationalInputs in = base;
        in.alpha_mhs = agent.hash_power();
        in.accept_bribe_per_hour = o.accept_bribe_per_hour;
        in.mining_bribe = o.mining_bribe;
        return rational_decide(in);
    });
}

AcceptDecision accept_block_policy(MinerAgent& agent, BlockPtr incoming)
{
    AcceptDecision d;
    d.inserted = agent.receive(std::move(incoming));
    d.outcome = d.inserted.empty() ? AcceptOutcome::Ignored : AcceptOutcome::Accepted;
    if (agent.bribed() && agent.fork_root()) {
        for (const auto& b : d.inserted) {
            if (!agent.in_fork(b->id()) || b->miner() == agent.id()) continue;
            d.claims.push_back(Claim{agent.id(), ClaimRole::Accepted, agent.view().chain_segment(*agent.fork_root(), b->id()),
                                     b->id()});
        }
    }
    return d;
}

} // namespace bribesim
