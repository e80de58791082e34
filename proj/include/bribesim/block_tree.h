// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BRIBESIM_BLOCK_TREE_H
#define BRIBESIM_BLOCK_TREE_H

#include <bribesim/block.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace bribesim {

struct ChainParams {
    /** Maximum number of uncle references per block. */
    size_t max_uncles{2};
    /** Largest allowed B_n - U_n between a block and an uncle it references. */
    Height uncle_window{7};
    /** Gas budget per block; transactions are charged one gas per byte. */
    uint64_t gas_limit{8'000'000};
};

enum class RejectReason {
    UnknownParent,
    DuplicateBlock,
    BadHeight,
    TimestampBeforeParent,
    GasLimitExceeded,
    TooManyUncles,
    DuplicateUncleInBlock,
    UnknownUncle,
    UncleOutOfWindow,
    UncleAlreadyReferenced,
    UncleIsAncestor,
    UncleNotRelated,
};

std::string_view to_string(RejectReason r);

/** True for reasons that may resolve once more blocks arrive. */
constexpr bool is_missing_dependency(RejectReason r)
{
    return r == RejectReason::UnknownParent || r == RejectReason::UnknownUncle;
}

/** Outcome of append(): accepted, or rejected with a reason. */
class ValidationResult
{
public:
    static ValidationResult accepted() { return ValidationResult(std::nullopt); }
    static ValidationResult rejected(RejectReason r) { return ValidationResult(r); }

    bool is_accepted() const { return !reason_.has_value(); }
    explicit operator bool() const { return is_accepted(); }
    RejectReason reason() const { return reason_.value(); }

private:
    explicit ValidationResult(std::optional<RejectReason> r) : reason_(r) {}
    std::optional<RejectReason> reason_;
};

class NotAncestorError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * Block tree with longest-chain fork choice. Among equal-height tips the one that
 * arrived first wins, so the head only moves on a strictly higher block.
 *
 * Single writer; const member functions are safe to call concurrently.
 */
class BlockTree
{
public:
    explicit BlockTree(BlockPtr genesis = Block::genesis(), ChainParams params = {});

    const ChainParams& params() const { return params_; }

    /** Validate and insert. A rejected block leaves the tree unchanged. */
    ValidationResult append(BlockPtr block);

    const BlockId& genesis() const { return genesis_; }
    const BlockId& canonical_head() const { return head_; }
    const Block& head_block() const { return get(head_); }

    /**
     * Blocks that a child of @p parent may reference as uncles: unreferenced, not on
     * the child's ancestry, child of an ancestor, and 1 <= child_height - U_n <= window.
     * Ordered by height then arrival. The caller truncates to max_uncles.
     */
    std::vector<BlockId> eligible_uncles(const BlockId& parent) const;

    /** Blocks from @p from to @p to inclusive, lowest height first. Throws NotAncestorError. */
    std::vector<BlockPtr> chain_segment(const BlockId& from, const BlockId& to) const;

    bool contains(const BlockId& id) const { return entries_.contains(id); }
    const Block& get(const BlockId& id) const;
    BlockPtr get_ptr(const BlockId& id) const;
    /** Sequence number assigned at insertion; genesis is 0. */
    uint64_t arrival(const BlockId& id) const;
    const std::vector<BlockId>& children(const BlockId& id) const;

    /** True when @p ancestor lies on the parent path of @p descendant (or equals it). */
    bool is_ancestor_or_self(const BlockId& ancestor, const BlockId& descendant) const;
    /** Ancestor of @p id at the given height; nullopt if that height is above the block. */
    std::optional<BlockId> ancestor_at(const BlockId& id, Height height) const;

    /** @p root and every descendant, in arrival order. */
    std::vector<BlockId> subtree(const BlockId& root) const;

    const std::unordered_set<BlockId>& referenced_uncles() const { return referenced_uncles_; }
    /** Block that references @p uncle, if any. */
    std::optional<BlockId> referencing_block(const BlockId& uncle) const;

    size_t size() const { return entries_.size(); }
    /** All block ids in arrival order. */
    const std::vector<BlockId>& arrival_order() const { return order_; }

private:
    struct Entry {
        BlockPtr block;
        uint64_t arrival;
        std::vector<BlockId> children;
    };

    std::optional<RejectReason> check_uncles(const Block& block, const Entry& parent) const;
    const Entry& entry(const BlockId& id) const;

    ChainParams params_;
    BlockId genesis_;
    BlockId head_;
    std::unordered_map<BlockId, Entry> entries_;
    std::unordered_map<BlockId, BlockId> referenced_uncles_by_;
    std::unordered_set<BlockId> referenced_uncles_;
    std::vector<BlockId> order_;
};

} // namespace bribesim

#endif // BRIBESIM_BLOCK_TREE_H
