// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <bribesim/rewards.h>

#include <string>

namespace bribesim {

EthAmount main_reward(const RewardParams& params) { return params.block_reward; }

EthAmount uncle_reward(Height uncle_height, Height including_height, EthAmount block_reward, Height window)
{
    if (uncle_height >= including_height || including_height - uncle_height > window) {
        throw RewardError("uncle at height " + std::to_string(uncle_height) + " cannot be rewarded from height " +
                          std::to_string(including_height));
    }
    const auto distance = static_cast<int64_t>(including_height - uncle_height);
    // (U_n + 8 - B_n) * R / 8, exact in nanos whenever R is a multiple of 8 nanos.
    return EthAmount::from_nanos((8 - distance) * block_reward.nanos() / 8);
}

EthAmount nephew_reward(size_t n_uncles, EthAmount block_reward, int64_t divisor, size_t max_uncles)
{
    if (n_uncles > max_uncles) throw RewardError("a block references at most " + std::to_string(max_uncles) + " uncles");
    if (divisor <= 0) throw RewardError("nephew divisor must be positive");
    return EthAmount::from_nanos(static_cast<int64_t>(n_uncles) * (block_reward.nanos() / divisor));
}

void RewardLedger::settle_block(const Block& block, const BlockTree& tree)
{
    if (block.is_genesis()) throw RewardError("genesis carries no reward");
    if (!tree.contains(block.id())) throw RewardError("block " + block.id().short_hex() + " is not in the tree");
    if (settled_.contains(block.id())) throw RewardError("block " + block.id().short_hex() + " already settled");

    const auto n = block.uncle_refs().size();
    auto& miner = balances_[block.miner()];
    miner.main += params_.block_reward + params_.tx_fee;
    miner.nephew += nephew_reward(n, params_.block_reward, params_.nephew_divisor, params_.max_uncles);
    for (const auto& uid : block.uncle_refs()) {
        const Block& u = tree.get(uid);
        balances_[u.miner()].uncle += uncle_reward(u.height(), block.height(), params_.block_reward, params_.uncle_window);
    }
    settled_.insert(block.id());
}

void RewardLedger::settle_canonical_chain(const BlockTree& tree)
{
    for (const auto& b : tree.chain_segment(tree.genesis(), tree.canonical_head())) {
        if (!b->is_genesis()) settle_block(*b, tree);
    }
}

void RewardLedger::credit_bribe_mining(AgentId agent, TokenAmount amount)
{
    if (amount < TokenAmount{}) throw RewardError("negative bribe credit");
    balances_[agent].bribe_mining += amount;
}

void RewardLedger::credit_bribe_accept(AgentId agent, TokenAmount amount)
{
    if (amount < TokenAmount{}) throw RewardError("negative bribe credit");
    balances_[agent].bribe_accept += amount;
}

AgentBalance RewardLedger::balance(AgentId agent) const
{
    auto it = balances_.find(agent);
    return it == balances_.end() ? AgentBalance{} : it->second;
}

EthAmount RewardLedger::total_minted() const
{
    EthAmount total;
    for (const auto& [_, b] : balances_) total += b.eth_total();
    return total;
}

void RewardLedger::write_csv(std::ostream& out, double eth_to_token) const
{
    out << "agent_id,main,uncle,nephew,bribe_mining,bribe_accept,total\n";
    for (const auto& [id, b] : balances_) {
        const auto total = TokenAmount::from_double(b.eth_total().to_double() * eth_to_token) + b.token_total();
        out << id << ',' << b.main.to_string() << ',' << b.uncle.to_string() << ',' << b.nephew.to_string() << ','
            << b.bribe_mining.to_string() << ',' << b.bribe_accept.to_string() << ',' << total.to_string() << '\n';
    }
}

} // namespace bribesim
