// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <bribesim/block.h>

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <stdexcept>

namespace bribesim {

namespace {

void put_u32(std::vector<uint8_t>& out, uint32_t v)
{
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_field(std::vector<uint8_t>& out, std::span<const uint8_t> bytes)
{
    put_u32(out, static_cast<uint32_t>(bytes.size()));
    out.insert(out.end(), bytes.begin(), bytes.end());
}

template <typename T>
void put_int_field(std::vector<uint8_t>& out, T v)
{
    std::array<uint8_t, sizeof(T)> le{};
    for (size_t i = 0; i < sizeof(T); ++i) le[i] = static_cast<uint8_t>(static_cast<uint64_t>(v) >> (8 * i));
    put_field(out, le);
}

} // namespace

Hash256::Hash256(std::span<const uint8_t, SIZE> bytes)
{
    std::copy(bytes.begin(), bytes.end(), bytes_.begin());
}

Hash256 Hash256::digest(std::span<const uint8_t> data)
{
    std::array<uint8_t, SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1 || len != SIZE) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    return Hash256(std::span<const uint8_t, SIZE>(md));
}

bool Hash256::is_null() const
{
    return std::all_of(bytes_.begin(), bytes_.end(), [](uint8_t b) { return b == 0; });
}

std::string Hash256::hex() const
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * SIZE);
    for (uint8_t b : bytes_) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

std::vector<uint8_t> serialize_header(const BlockHeader& header, std::span<const BlockId> uncle_refs)
{
    std::vector<uint8_t> out;
    out.reserve(4 * 8 + 2 * Hash256::SIZE + 8 * 4 + uncle_refs.size() * (4 + Hash256::SIZE));
    put_field(out, header.parent_hash.bytes());
    put_int_field(out, header.miner);
    put_field(out, header.merkle_root.bytes());
    put_int_field(out, std::bit_cast<uint64_t>(header.timestamp));
    put_int_field(out, header.difficulty);
    put_int_field(out, header.nonce);
    put_u32(out, static_cast<uint32_t>(uncle_refs.size()));
    for (const auto& u : uncle_refs) put_field(out, u.bytes());
    return out;
}

Hash256 transactions_root(std::span<const std::string> transactions)
{
    std::vector<uint8_t> buf;
    put_u32(buf, static_cast<uint32_t>(transactions.size()));
    for (const auto& tx : transactions) {
        put_field(buf, std::span(reinterpret_cast<const uint8_t*>(tx.data()), tx.size()));
    }
    return Hash256::digest(buf);
}

Block::Block(BlockHeader header, std::vector<BlockId> uncle_refs, std::vector<std::string> transactions, Height height)
    : header_(std::move(header)), uncle_refs_(std::move(uncle_refs)), transactions_(std::move(transactions)), height_(height)
{
    id_ = Hash256::digest(serialize_header(header_, uncle_refs_));
}

std::shared_ptr<const Block> Block::genesis()
{
    static const auto g = [] {
        BlockHeader header;
        header.merkle_root = transactions_root({});
        return std::make_shared<const Block>(header, std::vector<BlockId>{}, std::vector<std::string>{}, 0);
    }();
    return g;
}

uint64_t Block::gas_used() const
{
    uint64_t gas = 0;
    for (const auto& tx : transactions_) gas += tx.size();
    return gas;
}

} // namespace bribesim
