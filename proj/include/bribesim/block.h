// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BRIBESIM_BLOCK_H
#define BRIBESIM_BLOCK_H

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace bribesim {

using AgentId = uint32_t;
using Height = uint64_t;
/** Simulation time in seconds. */
using SimTime = double;

/** Miner field of the genesis header. */
constexpr AgentId NO_AGENT = 0xFFFFFFFFu;

/** 256-bit digest; used for block identifiers and merkle roots. */
class Hash256
{
public:
    static constexpr size_t SIZE = 32;

    constexpr Hash256() = default;
    explicit Hash256(std::span<const uint8_t, SIZE> bytes);

    /** SHA-256 of an arbitrary byte string. */
    static Hash256 digest(std::span<const uint8_t> data);

    const std::array<uint8_t, SIZE>& bytes() const { return bytes_; }
    bool is_null() const;
    std::string hex() const;
    /** First 8 hex digits, for logs. */
    std::string short_hex() const { return hex().substr(0, 8); }

    friend auto operator<=>(const Hash256&, const Hash256&) = default;

private:
    std::array<uint8_t, SIZE> bytes_{};
};

using BlockId = Hash256;

struct BlockHeader {
    BlockId parent_hash;
    AgentId miner{NO_AGENT};
    Hash256 merkle_root;
    SimTime timestamp{0.0};
    uint64_t difficulty{1};
    uint64_t nonce{0};
};

/**
 * Immutable block. The identifier is the SHA-256 of the canonical serialization
 * (header fields then the uncle list) and is computed once on construction.
 */
class Block
{
public:
    Block(BlockHeader header, std::vector<BlockId> uncle_refs, std::vector<std::string> transactions, Height height);

    /** The fixed genesis block: height 0, no miner, zero timestamp. */
    static std::shared_ptr<const Block> genesis();

    const BlockId& id() const { return id_; }
    const BlockHeader& header() const { return header_; }
    const BlockId& parent() const { return header_.parent_hash; }
    AgentId miner() const { return header_.miner; }
    SimTime timestamp() const { return header_.timestamp; }
    Height height() const { return height_; }
    const std::vector<BlockId>& uncle_refs() const { return uncle_refs_; }
    const std::vector<std::string>& transactions() const { return transactions_; }
    bool is_genesis() const { return height_ == 0; }

    /** Sum of transaction sizes; the gas model charges one unit per byte. */
    uint64_t gas_used() const;

private:
    BlockHeader header_;
    std::vector<BlockId> uncle_refs_;
    std::vector<std::string> transactions_;
    Height height_;
    BlockId id_;
};

using BlockPtr = std::shared_ptr<const Block>;

/**
 * Canonical encoding: every field is a little-endian u32 byte length followed by
 * the field bytes, in declaration order. Integers are little-endian, the timestamp
 * is its IEEE-754 bit pattern. The uncle list is a u32 count then one field per id.
 */
std::vector<uint8_t> serialize_header(const BlockHeader& header, std::span<const BlockId> uncle_refs);

/** Merkle-style commitment over the opaque transaction list. */
Hash256 transactions_root(std::span<const std::string> transactions);

} // namespace bribesim

template <>
struct std::hash<bribesim::Hash256> {
    size_t operator()(const bribesim::Hash256& h) const noexcept
    {
        size_t out = 0;
        for (size_t i = 0; i < sizeof(size_t); ++i) out = (out << 8) | h.bytes()[i];
        return out;
    }
};

#endif // BRIBESIM_BLOCK_H
