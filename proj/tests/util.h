// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BRIBESIM_TEST_UTIL_H
#define BRIBESIM_TEST_UTIL_H

#include <bribesim/block.h>
#include <bribesim/block_tree.h>

#include <cstdint>
#include <random>
#include <vector>

namespace bribesim::test {

/** Build a child of @p parent. The nonce keeps otherwise identical siblings distinct. */
inline BlockPtr child(const Block& parent, AgentId miner, std::vector<BlockId> uncles = {}, uint64_t nonce = 0)
{
    BlockHeader h;
    h.parent_hash = parent.id();
    h.miner = miner;
    h.merkle_root = transactions_root({});
    h.timestamp = parent.timestamp() + 1.0;
    h.nonce = nonce;
    return std::make_shared<const Block>(h, std::move(uncles), std::vector<std::string>{}, parent.height() + 1);
}

/** Append a linear run of @p n blocks on top of @p from; returns the blocks in order. */
inline std::vector<BlockPtr> extend(BlockTree& tree, const BlockId& from, size_t n, AgentId miner, uint64_t nonce = 0)
{
    std::vector<BlockPtr> out;
    BlockId tip = from;
    for (size_t i = 0; i < n; ++i) {
        auto b = child(tree.get(tip), miner, {}, nonce);
        if (!tree.append(b)) throw std::logic_error("extend: append rejected");
        out.push_back(b);
        tip = b->id();
    }
    return out;
}

/** Small deterministic generator for hand-rolled property tests. */
class Gen
{
public:
    explicit Gen(uint64_t seed) : rng_(seed) {}
    uint64_t below(uint64_t n) { return std::uniform_int_distribution<uint64_t>(0, n - 1)(rng_); }
    bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }
    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/** Grow a forked tree with valid uncle references up to @p n blocks, miners drawn from [0, miners). */
inline BlockTree grow_random_tree(Gen& g, size_t n, AgentId miners = 5)
{
    BlockTree t;
    uint64_t nonce = 0;
    while (t.size() < n) {
        const auto& order = t.arrival_order();
        const BlockId parent = order[order.size() - 1 - g.below(std::min<size_t>(order.size(), 10))];
        std::vector<BlockId> uncles;
        for (const auto& e : t.eligible_uncles(parent)) {
            if (uncles.size() < t.params().max_uncles && g.chance(0.6)) uncles.push_back(e);
        }
        if (!t.append(child(t.get(parent), static_cast<AgentId>(g.below(miners)), uncles, ++nonce))) {
            throw std::logic_error("grow_random_tree: append rejected");
        }
    }
    return t;
}

} // namespace bribesim::test

#endif // BRIBESIM_TEST_UTIL_H
