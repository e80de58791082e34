// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <bribesim/block_tree.h>

#include <algorithm>

namespace bribesim {

std::string_view to_string(RejectReason r)
{
    switch (r) {
    case RejectReason::UnknownParent: return "unknown-parent";
    case RejectReason::DuplicateBlock: return "duplicate-block";
    case RejectReason::BadHeight: return "bad-height";
    case RejectReason::TimestampBeforeParent: return "timestamp-before-parent";
    case RejectReason::GasLimitExceeded: return "gas-limit-exceeded";
    case RejectReason::TooManyUncles: return "uncle-too-many";
    case RejectReason::DuplicateUncleInBlock: return "uncle-duplicate-in-block";
    case RejectReason::UnknownUncle: return "uncle-unknown";
    case RejectReason::UncleOutOfWindow: return "uncle-out-of-window";
    case RejectReason::UncleAlreadyReferenced: return "uncle-already-referenced";
    case RejectReason::UncleIsAncestor: return "uncle-is-ancestor";
    case RejectReason::UncleNotRelated: return "uncle-not-related";
    }
    return "unknown";
}

BlockTree::BlockTree(BlockPtr genesis, ChainParams params) : params_(params)
{
    if (!genesis || !genesis->is_genesis()) throw std::invalid_argument("block tree needs a height-0 genesis");
    genesis_ = genesis->id();
    head_ = genesis_;
    entries_.emplace(genesis_, Entry{std::move(genesis), 0, {}});
    order_.push_back(genesis_);
}

const BlockTree::Entry& BlockTree::entry(const BlockId& id) const
{
    auto it = entries_.find(id);
    if (it == entries_.end()) throw std::out_of_range("unknown block " + id.short_hex());
    return it->second;
}

const Block& BlockTree::get(const BlockId& id) const { return *entry(id).block; }
BlockPtr BlockTree::get_ptr(const BlockId& id) const { return entry(id).block; }
uint64_t BlockTree::arrival(const BlockId& id) const { return entry(id).arrival; }
const std::vector<BlockId>& BlockTree::children(const BlockId& id) const { return entry(id).children; }

std::optional<BlockId> BlockTree::ancestor_at(const BlockId& id, Height height) const
{
    const Entry* e = &entry(id);
    if (height > e->block->height()) return std::nullopt;
    while (e->block->height() > height) e = &entry(e->block->parent());
    return e->block->id();
}

bool BlockTree::is_ancestor_or_self(const BlockId& ancestor, const BlockId& descendant) const
{
    if (!contains(ancestor) || !contains(descendant)) return false;
    auto at = ancestor_at(descendant, get(ancestor).height());
    return at && *at == ancestor;
}

std::optional<RejectReason> BlockTree::check_uncles(const Block& block, const Entry& parent) const
{
    const auto& uncles = block.uncle_refs();
    if (uncles.size() > params_.max_uncles) return RejectReason::TooManyUncles;
    for (size_t i = 0; i < uncles.size(); ++i) {
        for (size_t j = 0; j < i; ++j) {
            if (uncles[i] == uncles[j]) return RejectReason::DuplicateUncleInBlock;
        }
    }
    const Height bn = block.height();
    for (const auto& uid : uncles) {
        auto it = entries_.find(uid);
        if (it == entries_.end()) return RejectReason::UnknownUncle;
        const Block& uncle = *it->second.block;
        const Height un = uncle.height();
        if (un >= bn || bn - un > params_.uncle_window) return RejectReason::UncleOutOfWindow;
        if (referenced_uncles_.contains(uid)) return RejectReason::UncleAlreadyReferenced;
        // Both walks are bounded by the window since un >= bn - window.
        if (ancestor_at(parent.block->id(), un) == uid) return RejectReason::UncleIsAncestor;
        if (ancestor_at(parent.block->id(), un - 1) != uncle.parent()) return RejectReason::UncleNotRelated;
    }
    return std::nullopt;
}

ValidationResult BlockTree::append(BlockPtr block)
{
    if (!block) throw std::invalid_argument("null block");
    if (entries_.contains(block->id())) return ValidationResult::rejected(RejectReason::DuplicateBlock);
    auto pit = entries_.find(block->parent());
    if (pit == entries_.end()) return ValidationResult::rejected(RejectReason::UnknownParent);
    const Entry& parent = pit->second;
    if (block->height() != parent.block->height() + 1) return ValidationResult::rejected(RejectReason::BadHeight);
    if (block->timestamp() < parent.block->timestamp()) {
        return ValidationResult::rejected(RejectReason::TimestampBeforeParent);
    }
    if (block->gas_used() > params_.gas_limit) return ValidationResult::rejected(RejectReason::GasLimitExceeded);
    if (auto r = check_uncles(*block, parent)) return ValidationResult::rejected(*r);

    const BlockId id = block->id();
    for (const auto& u : block->uncle_refs()) {
        referenced_uncles_.insert(u);
        referenced_uncles_by_.emplace(u, id);
    }
    pit->second.children.push_back(id);
    const Height h = block->height();
    entries_.emplace(id, Entry{std::move(block), order_.size(), {}});
    order_.push_back(id);
    if (h > get(head_).height()) head_ = id;
    return ValidationResult::accepted();
}

std::vector<BlockId> BlockTree::eligible_uncles(const BlockId& parent) const
{
    std::vector<BlockId> out;
    const Entry* below = &entry(parent); // path block one height above `at`
    for (Height k = 1; k <= params_.uncle_window; ++k) {
        if (below->block->is_genesis()) break;
        const Entry& at = entry(below->block->parent());
        for (const auto& c : at.children) {
            if (c == below->block->id() || referenced_uncles_.contains(c)) continue;
            out.push_back(c);
        }
        below = &at;
    }
    std::sort(out.begin(), out.end(), [this](const BlockId& a, const BlockId& b) {
        const Entry& ea = entry(a);
        const Entry& eb = entry(b);
        if (ea.block->height() != eb.block->height()) return ea.block->height() < eb.block->height();
        return ea.arrival < eb.arrival;
    });
    return out;
}

std::vector<BlockPtr> BlockTree::chain_segment(const BlockId& from, const BlockId& to) const
{
    if (!contains(from) || !contains(to) || !is_ancestor_or_self(from, to)) {
        throw NotAncestorError("block " + from.short_hex() + " is not an ancestor of " + to.short_hex());
    }
    std::vector<BlockPtr> out;
    const Entry* e = &entry(to);
    for (;;) {
        out.push_back(e->block);
        if (e->block->id() == from) break;
        e = &entry(e->block->parent());
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<BlockId> BlockTree::subtree(const BlockId& root) const
{
    std::vector<BlockId> out{root};
    for (size_t i = 0; i < out.size(); ++i) {
        const auto& kids = entry(out[i]).children;
        out.insert(out.end(), kids.begin(), kids.end());
    }
    std::sort(out.begin(), out.end(), [this](const BlockId& a, const BlockId& b) { return arrival(a) < arrival(b); });
    return out;
}

std::optional<BlockId> BlockTree::referencing_block(const BlockId& uncle) const
{
    auto it = referenced_uncles_by_.find(uncle);
    if (it == referenced_uncles_by_.end()) return std::nullopt;
    return it->second;
}

} // namespace bribesim
