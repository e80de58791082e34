// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BRIBESIM_AGENTS_H
#define BRIBESIM_AGENTS_H

#include <bribesim/block_tree.h>
#include <bribesim/bribe_contract.h>

#include <deque>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

namespace bribesim {

enum class Strategy { Honest, Selfish, Rational };

std::string_view to_string(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view s);

struct AgentSpec {
    AgentId id{};
    Strategy strategy{Strategy::Honest};
    /** alpha, MH/s. */
    double hash_power_mhs{0.0};
};

struct FoundBlock {
    BlockPtr block;
};
struct PublicBlock {
    BlockPtr block;
};
using SelfishEvent = std::variant<FoundBlock, PublicBlock>;

enum class SelfishActionKind { None, Withhold, Release, Discard };
std::string_view to_string(SelfishActionKind k);

struct SelfishAction {
    SelfishActionKind kind{SelfishActionKind::None};
    /** Blocks to broadcast, parent first (Release and Discard). */
    std::vector<BlockPtr> blocks;
};

/**
 * A miner and its local view of the victim chain. Blocks that arrive before their
 * parent or uncles are parked and retried after each successful insertion.
 */
class MinerAgent
{
public:
    static constexpr size_t MAX_PARKED = 4096;

    MinerAgent(AgentSpec spec, ChainParams chain = {}, BlockPtr genesis = Block::genesis());

    AgentId id() const { return spec_.id; }
    Strategy strategy() const { return spec_.strategy; }
    double hash_power() const { return spec_.hash_power_mhs; }
    const AgentSpec& spec() const { return spec_; }

    const BlockTree& view() const { return view_; }
    std::vector<AgentId> peers;

    /** Insert a block from the network; returns every block that entered the view, in order. */
    std::vector<BlockPtr> receive(BlockPtr block);
    /** Insert a block this agent just mined. Throws std::logic_error if the view rejects it. */
    void add_own_block(BlockPtr block);
    size_t parked() const { return parked_.size(); }

    // Selfish state.
    const std::vector<BlockPtr>& private_blocks() const { return private_; }
    Height public_height() const { return public_height_; }

    // Bribery state.
    bool bribed() const { return bribed_; }
    void join_bribery(const BlockId& fork_parent);
    void leave_bribery();
    void set_fork_root(const BlockId& root);
    const std::optional<BlockId>& fork_parent() const { return fork_parent_; }
    const std::optional<BlockId>& fork_root() const { return fork_root_; }
    /** Best block in the view descending from the fork root, if the root is known. */
    const std::optional<BlockId>& fork_tip() const { return fork_tip_; }
    bool in_fork(const BlockId& id) const { return fork_members_.contains(id); }

private:
    friend SelfishAction selfish_decide(MinerAgent& agent, const SelfishEvent& event, Height release_lead);

    void on_inserted(const BlockPtr& block);

    AgentSpec spec_;
    BlockTree view_;
    std::deque<BlockPtr> parked_;

    std::vector<BlockPtr> private_;
    Height public_height_{0};
    /** Public height at the last selfish decision; only an advance past it triggers a release. */
    Height decided_public_height_{0};

    bool bribed_{false};
    std::optional<BlockId> fork_parent_;
    std::optional<BlockId> fork_root_;
    std::optional<BlockId> fork_tip_;
    std::unordered_set<BlockId> fork_members_;
};

struct MiningDecision {
    BlockId target;
    bool broadcast_immediately{true};
};

/** Mine on the canonical head and broadcast on discovery. */
MiningDecision honest_decide(const MinerAgent& agent);

/**
 * Full mining policy. Bribed agents mine on the fork tip, else the fork root, else the
 * fork parent; selfish agents mine on their view's head (their private tip while it
 * leads) and withhold; everyone else behaves honestly.
 */
MiningDecision mining_decision(const MinerAgent& agent);

/**
 * Withholding strategy. A found block (already in the agent's view) joins the private
 * chain. On a public block: if the public height passed the private tip the private
 * chain is abandoned; if it reached private_height - release_lead everything is
 * released together. Abandoned blocks are still handed back for broadcast as stale
 * blocks, so peers can reference them as uncles.
 */
SelfishAction selfish_decide(MinerAgent& agent, const SelfishEvent& event, Height release_lead = 1);

/** Inputs to the join decision; all economic quantities per the closed-form model. */
struct RationalInputs {
    double alpha_mhs;
    double network_hash_rate_mhs;
    double block_interval;
    double block_reward;
    double accept_bribe_per_hour;
    double mining_bribe;
    double join_margin{0.0};
    /** Token-worth per ETH used to compare the two incomes. */
    double eth_to_token{1.0};
};

/** Join iff Gamma > theta_h * (1 + margin), with theta_h converted to token-worth. */
bool rational_decide(const RationalInputs& in);

/** Publicly announced bribe terms. */
struct BribeOffer {
    double accept_bribe_per_hour;
    double mining_bribe;
};

/**
 * Join decision for @p agent against the open offers; @p base carries the network
 * and reward parameters, the offer terms replace its bribe fields. False without
 * offers or for non-rational agents.
 */
bool rational_decide(const MinerAgent& agent, const RationalInputs& base, std::span<const BribeOffer> offers);

enum class AcceptOutcome { Accepted, Ignored };

struct AcceptDecision {
    AcceptOutcome outcome{AcceptOutcome::Ignored};
    /** The incoming block and any parked blocks it unblocked. */
    std::vector<BlockPtr> inserted;
    /** Acceptance claims for fork blocks this bribed agent inserted. */
    std::vector<Claim> claims;
};

/** Apply chain rules to an incoming block; a bribed agent also claims for fork blocks it inserts. */
AcceptDecision accept_block_policy(MinerAgent& agent, BlockPtr incoming);

} // namespace bribesim

#endif // BRIBESIM_AGENTS_H
