// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BRIBESIM_UNITS_H
#define BRIBESIM_UNITS_H

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace bribesim {

/** Unit tags. Victim-chain coin, cross-chain token-worth, and fiat are never mixed implicitly. */
struct Eth {
    static constexpr const char* symbol = "ETH";
};
struct TokenWorth {
    static constexpr const char* symbol = "TW";
};
struct Usd {
    static constexpr const char* symbol = "USD";
};

/**
 * Fixed-point amount with 10^-9 resolution. Ledgers and the escrow use this so that
 * conservation identities hold exactly.
 */
template <typename Unit>
class Amount
{
public:
    static constexpr int64_t SCALE = 1'000'000'000;

    constexpr Amount() = default;

    static constexpr Amount from_nanos(int64_t nanos) { return Amount(nanos); }

    /** Round to the nearest representable amount. */
    static Amount from_double(double value)
    {
        if (!std::isfinite(value)) throw std::invalid_argument("non-finite amount");
        return Amount(static_cast<int64_t>(std::llround(value * static_cast<double>(SCALE))));
    }

    constexpr int64_t nanos() const { return nanos_; }
    double to_double() const { return static_cast<double>(nanos_) / static_cast<double>(SCALE); }

    /** Decimal rendering with all nine fractional digits; locale independent. */
    std::string to_string() const
    {
        const bool neg = nanos_ < 0;
        const uint64_t mag = neg ? static_cast<uint64_t>(-(nanos_ + 1)) + 1 : static_cast<uint64_t>(nanos_);
        std::string frac = std::to_string(mag % SCALE);
        frac.insert(0, 9 - frac.size(), '0');
        return (neg ? "-" : "") + std::to_string(mag / SCALE) + "." + frac;
    }

    constexpr Amount& operator+=(Amount o) { nanos_ += o.nanos_; return *this; }
    constexpr Amount& operator-=(Amount o) { nanos_ -= o.nanos_; return *this; }
    friend constexpr Amount operator+(Amount a, Amount b) { return a += b; }
    friend constexpr Amount operator-(Amount a, Amount b) { return a -= b; }
    friend constexpr Amount operator*(Amount a, int64_t k) { return Amount(a.nanos_ * k); }
    friend constexpr Amount operator*(int64_t k, Amount a) { return Amount(a.nanos_ * k); }
    friend constexpr auto operator<=>(const Amount&, const Amount&) = default;

private:
    constexpr explicit Amount(int64_t nanos) : nanos_(nanos) {}
    int64_t nanos_{0};
};

/** Real-valued quantity for closed-form economics, tagged with the same units. */
template <typename Unit>
struct Quantity {
    double value{0.0};

    friend constexpr Quantity operator+(Quantity a, Quantity b) { return {a.value + b.value}; }
    friend constexpr Quantity operator-(Quantity a, Quantity b) { return {a.value - b.value}; }
    friend constexpr Quantity operator*(Quantity a, double k) { return {a.value * k}; }
    friend constexpr Quantity operator*(double k, Quantity a) { return {a.value * k}; }
    friend constexpr auto operator<=>(const Quantity&, const Quantity&) = default;
};

using EthAmount = Amount<Eth>;
using TokenAmount = Amount<TokenWorth>;

} // namespace bribesim

#endif // BRIBESIM_UNITS_H
