// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BRIBESIM_NETWORK_H
#define BRIBESIM_NETWORK_H

#include <bribesim/block.h>

#include <cstdint>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

namespace bribesim {

using Rng = std::mt19937_64;

/** Derives independent engines from one seed by label, so adding a consumer never shifts another's draws. */
class RngStreams
{
public:
    explicit RngStreams(uint64_t seed) : seed_(seed) {}
    Rng stream(std::string_view label) const;

private:
    uint64_t seed_;
};

/** Uniform in [0, 1) from the top 53 bits of one draw. */
double uniform01(Rng& rng);
double sample_exponential(Rng& rng, double mean);

struct FixedDelay {
    double seconds{0.5};
};
struct UniformDelay {
    double lo{0.0};
    double hi{1.0};
};
using DelayModel = std::variant<FixedDelay, UniformDelay>;

double sample_delay(const DelayModel& model, Rng& rng);

class TopologyError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/** Undirected peer graph over node indices 0..n-1; adjacency lists are sorted. */
class PeerGraph
{
public:
    explicit PeerGraph(size_t n) : adj_(n) {}

    size_t size() const { return adj_.size(); }
    const std::vector<size_t>& neighbors(size_t node) const { return adj_.at(node); }
    size_t degree(size_t node) const { return adj_.at(node).size(); }
    size_t max_degree() const;
    bool has_edge(size_t a, size_t b) const;
    bool is_connected() const;
    /** Edges (a, b) with a < b, sorted. */
    std::vector<std::pair<size_t, size_t>> edges() const;

    /** Adds a-b; returns false when it already exists or a == b. */
    bool add_edge(size_t a, size_t b);

private:
    std::vector<std::vector<size_t>> adj_;
};

/**
 * Random connected graph with every degree <= peer_degree. A degree-bounded random
 * spanning tree is grown first, then nodes are filled towards min(peer_degree, n-1)
 * neighbours. Deterministic in @p seed.
 */
PeerGraph build_topology(size_t n_nodes, size_t peer_degree, uint64_t seed);

struct Delivery {
    size_t node;
    SimTime time;
};

/**
 * Flood from @p origin: a node forwards on first receipt and each edge traversal adds
 * one delay sample, so a node's delivery time is its first-arrival time. Returns one
 * delivery per other reachable node, sorted by (time, node).
 */
std::vector<Delivery> propagate(size_t origin, SimTime found_at, const PeerGraph& graph, const DelayModel& delay, Rng& rng);

struct MiningDraw {
    /** Index of the finder; nullopt when the block falls to hash power outside the roster. */
    std::optional<size_t> finder;
    SimTime time;
};

/**
 * Next block of the network-wide Poisson process: gap ~ Exp(mean @p block_interval),
 * finder i with probability hash_powers[i] / network_hash_rate.
 */
MiningDraw schedule_mining(Rng& rng, std::span<const double> hash_powers, double network_hash_rate,
                           double block_interval, SimTime now);

enum class EventKind { BlockFound, DeliverBlock, ContractTick };
std::string_view to_string(EventKind k);

struct Event {
    SimTime time{0.0};
    uint64_t seq{0};
    EventKind kind{EventKind::BlockFound};
    /** Finder for BlockFound, recipient for DeliverBlock. */
    std::optional<size_t> agent;
    BlockPtr block;
};

/** Pops in (time, seq) order; seq is the push count, which breaks time ties. */
class EventQueue
{
public:
    void push(SimTime time, EventKind kind, std::optional<size_t> agent = std::nullopt, BlockPtr block = nullptr);
    Event pop();
    const Event& top() const { return heap_.top(); }
    bool empty() const { return heap_.empty(); }
    size_t size() const { return heap_.size(); }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const
        {
            return a.time != b.time ? a.time > b.time : a.seq > b.seq;
        }
    };
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    uint64_t next_seq_{0};
};

} // namespace bribesim

#endif // BRIBESIM_NETWORK_H
