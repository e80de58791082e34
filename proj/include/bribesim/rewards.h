// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BRIBESIM_REWARDS_H
#define BRIBESIM_REWARDS_H

#include <bribesim/block_tree.h>
#include <bribesim/units.h>

#include <map>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace bribesim {

class RewardError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

struct RewardParams {
    /** Main block reward R. */
    EthAmount block_reward{EthAmount::from_nanos(2 * EthAmount::SCALE)};
    /** Nephew bonus per referenced uncle is block_reward / nephew_divisor. */
    int64_t nephew_divisor{32};
    /** Flat per-block fee credited with the main reward; zero in the default economy. */
    EthAmount tx_fee{};
    Height uncle_window{7};
    size_t max_uncles{2};
};

/** R as configured. */
EthAmount main_reward(const RewardParams& params = {});

/** (U_n + 8 - B_n) * R / 8. Throws RewardError unless 1 <= B_n - U_n <= window. */
EthAmount uncle_reward(Height uncle_height, Height including_height, EthAmount block_reward, Height window = 7);

/** n_uncles * R / divisor. Throws RewardError for more than max_uncles. */
EthAmount nephew_reward(size_t n_uncles, EthAmount block_reward, int64_t divisor = 32, size_t max_uncles = 2);

struct AgentBalance {
    EthAmount main;
    EthAmount uncle;
    EthAmount nephew;
    TokenAmount bribe_mining;
    TokenAmount bribe_accept;

    EthAmount eth_total() const { return main + uncle + nephew; }
    TokenAmount token_total() const { return bribe_mining + bribe_accept; }
};

/** Per-agent accrued rewards. Each block is settled at most once. */
class RewardLedger
{
public:
    explicit RewardLedger(RewardParams params = {}) : params_(params) {}

    const RewardParams& params() const { return params_; }

    /**
     * Credit main reward (plus fee) and nephew bonus to the block's miner and the
     * uncle reward to each referenced uncle's miner. Throws RewardError on double
     * settlement, genesis, or a block missing from @p tree.
     */
    void settle_block(const Block& block, const BlockTree& tree);

    /** Settle every block on the canonical chain of @p tree (genesis excluded). */
    void settle_canonical_chain(const BlockTree& tree);

    void credit_bribe_mining(AgentId agent, TokenAmount amount);
    void credit_bribe_accept(AgentId agent, TokenAmount amount);

    bool is_settled(const BlockId& id) const { return settled_.contains(id); }
    const std::map<AgentId, AgentBalance>& balances() const { return balances_; }
    AgentBalance balance(AgentId agent) const;
    EthAmount total_minted() const;

    /**
     * CSV export: agent_id,main,uncle,nephew,bribe_mining,bribe_accept,total where
     * total converts ETH to token-worth at @p eth_to_token.
     */
    void write_csv(std::ostream& out, double eth_to_token = 1.0) const;

private:
    RewardParams params_;
    std::map<AgentId, AgentBalance> balances_;
    std::unordered_set<BlockId> settled_;
};

} // namespace bribesim

#endif // BRIBESIM_REWARDS_H
