// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <bribesim/network.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bribesim {

namespace {

uint64_t splitmix64(uint64_t& state)
{
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

uint64_t fnv1a(std::string_view s)
{
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

size_t uniform_index(Rng& rng, size_t n) { return static_cast<size_t>(uniform01(rng) * static_cast<double>(n)); }

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng)
{
    // Fisher-Yates on our own uniform draw; std::shuffle is not specified bit-for-bit.
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

} // namespace

Rng RngStreams::stream(std::string_view label) const
{
    uint64_t state = seed_ ^ fnv1a(label);
    std::seed_seq seq{splitmix64(state), splitmix64(state), splitmix64(state), splitmix64(state)};
    return Rng(seq);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double sample_exponential(Rng& rng, double mean) { return -mean * std::log1p(-uniform01(rng)); }

double sample_delay(const DelayModel& model, Rng& rng)
{
    if (const auto* f = std::get_if<FixedDelay>(&model)) return f->seconds;
    const auto& u = std::get<UniformDelay>(model);
    return u.lo + (u.hi - u.lo) * uniform01(rng);
}

size_t PeerGraph::max_degree() const
{
    size_t m = 0;
    for (const auto& a : adj_) m = std::max(m, a.size());
    return m;
}

bool PeerGraph::has_edge(size_t a, size_t b) const
{
    const auto& n = adj_.at(a);
    return std::binary_search(n.begin(), n.end(), b);
}

bool PeerGraph::add_edge(size_t a, size_t b)
{
    if (a == b || has_edge(a, b)) return false;
    for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
        auto& n = adj_.at(x);
        n.insert(std::lower_bound(n.begin(), n.end(), y), y);
    }
    return true;
}

bool PeerGraph::is_connected() const
{
    if (adj_.empty()) return true;
    std::vector<bool> seen(adj_.size());
    std::vector<size_t> stack{0};
    seen[0] = true;
    size_t count = 1;
    while (!stack.empty()) {
        const size_t u = stack.back();
        stack.pop_back();
        for (size_t v : adj_[u]) {
            if (!seen[v]) {
                seen[v] = true;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == adj_.size();
}

std::vector<std::pair<size_t, size_t>> PeerGraph::edges() const
{
    std::vector<std::pair<size_t, size_t>> out;
    for (size_t a = 0; a < adj_.size(); ++a) {
        for (size_t b : adj_[a]) {
            if (a < b) out.emplace_back(a, b);
        }
    }
    return out;
}

PeerGraph build_topology(size_t n_nodes, size_t peer_degree, uint64_t seed)
{
    if (n_nodes < 2) throw TopologyError("a peer graph needs at least two nodes");
    if (peer_degree < 1) throw TopologyError("peer degree must be at least 1");
    if (peer_degree == 1 && n_nodes > 2) throw TopologyError("degree 1 cannot connect more than two nodes");

    Rng rng = RngStreams(seed).stream("topology");
    PeerGraph g(n_nodes);
    std::vector<size_t> order(n_nodes);
    std::iota(order.begin(), order.end(), 0);
    shuffle(order, rng);

    // Spanning tree: a tree always has a leaf, so an open attachment point exists for degree >= 2.
    for (size_t i = 1; i < n_nodes; ++i) {
        std::vector<size_t> open;
        for (size_t j = 0; j < i; ++j) {
            if (g.degree(order[j]) < peer_degree) open.push_back(order[j]);
        }
        g.add_edge(order[i], open[uniform_index(rng, open.size())]);
    }

    const size_t target = std::min(peer_degree, n_nodes - 1);
    for (size_t u : order) {
        if (g.degree(u) >= target) continue;
        std::vector<size_t> candidates;
        for (size_t v = 0; v < n_nodes; ++v) {
            if (v != u && !g.has_edge(u, v) && g.degree(v) < peer_degree) candidates.push_back(v);
        }
        shuffle(candidates, rng);
        for (size_t v : candidates) {
            if (g.degree(u) >= target) break;
            if (g.degree(v) < peer_degree) g.add_edge(u, v);
        }
    }
    return g;
}

std::vector<Delivery> propagate(size_t origin, SimTime found_at, const PeerGraph& graph, const DelayModel& delay, Rng& rng)
{
    const size_t n = graph.size();
    if (origin >= n) throw std::out_of_range("propagation origin outside the peer graph");
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<bool> done(n, false);
    using Item = std::pair<double, size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> frontier;
    best[origin] = found_at;
    frontier.emplace(found_at, origin);
    while (!frontier.empty()) {
        auto [t, u] = frontier.top();
        frontier.pop();
        if (done[u]) continue;
        done[u] = true;
        for (size_t v : graph.neighbors(u)) {
            if (done[v]) continue;
            const double arrive = t + sample_delay(delay, rng);
            if (arrive < best[v]) {
                best[v] = arrive;
                frontier.emplace(arrive, v);
            }
        }
    }
    std::vector<Delivery> out;
    for (size_t v = 0; v < n; ++v) {
        if (v != origin && done[v]) out.push_back({v, best[v]});
    }
    std::sort(out.begin(), out.end(), [](const Delivery& a, const Delivery& b) {
        return a.time != b.time ? a.time < b.time : a.node < b.node;
    });
    return out;
}

MiningDraw schedule_mining(Rng& rng, std::span<const double> hash_powers, double network_hash_rate,
                           double block_interval, SimTime now)
{
    if (hash_powers.empty()) throw std::invalid_argument("no miners to schedule");
    const double total = std::accumulate(hash_powers.begin(), hash_powers.end(), 0.0);
    if (!(network_hash_rate > 0.0) || network_hash_rate < total * (1.0 - 1e-12)) {
        throw std::invalid_argument("network hash rate must cover the roster");
    }
    MiningDraw draw{std::nullopt, now + sample_exponential(rng, block_interval)};
    double pick = uniform01(rng) * network_hash_rate;
    for (size_t i = 0; i < hash_powers.size(); ++i) {
        if (pick < hash_powers[i]) {
            draw.finder = i;
            return draw;
        }
        pick -= hash_powers[i];
    }
    // Rounding residue when the roster is the whole network.
    if (network_hash_rate <= total) draw.finder = hash_powers.size() - 1;
    return draw;
}

std::string_view to_string(EventKind k)
{
    switch (k) {
    case EventKind::BlockFound: return "block-found";
    case EventKind::DeliverBlock: return "deliver-block";
    case EventKind::ContractTick: return "contract-tick";
    }
    return "unknown";
}

void EventQueue::push(SimTime time, EventKind kind, std::optional<size_t> agent, BlockPtr block)
{
    heap_.push(Event{time, next_seq_++, kind, agent, std::move(block)});
}

Event EventQueue::pop()
{
    Event e = heap_.top();
    heap_.pop();
    return e;
}

} // namespace bribesim
