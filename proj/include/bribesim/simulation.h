// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BRIBESIM_SIMULATION_H
#define BRIBESIM_SIMULATION_H

#include <bribesim/agents.h>
#include <bribesim/block_tree.h>
#include <bribesim/bribe_contract.h>
#include <bribesim/network.h>
#include <bribesim/rewards.h>

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bribesim {

class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/** Raised when a module invariant fails during or at the end of a run. */
class InvariantError : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

struct ContractScenario {
    std::string id{"bribe-1"};
    std::string creator_address{"briber"};
    /** When the briber announces the offer; rational agents decide then. */
    SimTime activation_time{0.0};
    /** Window length from activation. */
    SimTime window{21'600.0};
    /** The fork branches off this many blocks below the canonical head at activation. */
    Height fork_depth{6};
    Height confirmation_depth{7};
    /** Escrow deposit gamma, token-worth. */
    double deposit{110'000.0};
};

struct SimConfig {
    /** phi, seconds. */
    double block_interval{15.0};
    /** beta, MH/s; unset means the roster total. Any excess is mined by an implicit honest agent. */
    std::optional<double> network_hash_rate;
    size_t peer_degree{25};
    DelayModel delay{FixedDelay{0.5}};
    double duration{3600.0};
    uint64_t seed{0};

    double block_reward{2.0};
    int64_t nephew_divisor{32};
    double tx_fee{0.0};
    /** tau_h, token-worth per hour for accepting fork blocks. */
    double accept_bribe_per_hour{0.002};
    /** mu_m, token-worth per fork block mined. */
    double mining_bribe{3.0};
    /** epsilon in the join rule. */
    double join_margin{0.0};
    double eth_to_token{1.0};

    Height selfish_release_lead{1};
    double contract_tick{15.0};
    ChainParams chain{};

    std::vector<AgentSpec> agents;
    std::optional<ContractScenario> contract;
};

/** Throws ConfigError describing the first violated constraint. */
void validate(const SimConfig& config);

/** Roster actually simulated: sorted by id, plus the implicit agent when beta exceeds the roster. */
std::vector<AgentSpec> effective_roster(const SimConfig& config);

double effective_network_hash_rate(const SimConfig& config);

struct AgentStats {
    AgentSpec spec;
    bool implicit{false};
    uint64_t blocks_found{0};
    uint64_t main_blocks{0};
    uint64_t uncle_blocks{0};
    uint64_t lost_blocks{0};
    uint64_t unpublished_blocks{0};
    bool joined_bribery{false};
};

struct EventRecord {
    SimTime time;
    uint64_t seq;
    EventKind kind;
    std::optional<AgentId> agent;
    std::optional<BlockId> block;
};

enum class BlockBranch { Main, Uncle, Lost };
std::string_view to_string(BlockBranch b);

struct SimTrace {
    SimConfig config;
    BlockTree tree;
    RewardLedger ledger;
    std::optional<BribeContract> contract;
    std::vector<AgentStats> agents;
    std::vector<EventRecord> events;

    uint64_t blocks_found{0};
    uint64_t claims_rejected{0};
    bool offer_made{false};
    std::optional<BlockId> fork_parent;
    std::optional<SimTime> fork_won_at;

    BlockBranch branch_of(const BlockId& id) const;
    /** Branch of every block in arrival order, computed in one pass. */
    std::vector<BlockBranch> branches() const;

    /** id,height,parent,miner,timestamp,n_uncles,branch; arrival order. */
    void write_blocks_csv(std::ostream& out) const;
    /** time,seq,kind,agent,block_id. */
    void write_events_csv(std::ostream& out) const;
    /** Settlement CSV; header only when no contract was created. */
    void write_settlement_csv(std::ostream& out) const;
    void write_summary(std::ostream& out) const;
};

/** Run a full simulation. Pure function of @p config. */
SimTrace run(const SimConfig& config);

} // namespace bribesim

#endif // BRIBESIM_SIMULATION_H
