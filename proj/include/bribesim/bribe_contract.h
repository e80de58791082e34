// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BRIBESIM_BRIBE_CONTRACT_H
#define BRIBESIM_BRIBE_CONTRACT_H

#include <bribesim/block_tree.h>
#include <bribesim/units.h>

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace bribesim {

enum class ContractState { Proposed, Funded, Active, Terminated };
enum class ClaimRole { Mined, Accepted };
enum class TerminationReason { ForkWon, Expired };

std::string_view to_string(ContractState s);
std::string_view to_string(ClaimRole r);
std::string_view to_string(TerminationReason r);

enum class ContractErrc {
    NonPositiveRate,
    MissingForkRoot,
    InvalidWindow,
    DuplicateProposal,
    UnknownContract,
    WrongState,
    ZeroDeposit,
    UnregisteredBribee,
    MalformedSegment,
    UnknownClaim,
};

class ContractError : public std::runtime_error
{
public:
    ContractError(ContractErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ContractErrc code() const { return code_; }

private:
    ContractErrc code_;
};

struct ContractParams {
    std::string id;
    /** Creator's account on the paying chain; refunds go here. */
    std::string creator_address;
    /** Paid per verified block mined on the fork. */
    TokenAmount mining_bribe;
    /** Paid per verified (bribee, block) acceptance of a fork block. */
    TokenAmount accept_bribe;
    /** First block of the fork branch on the victim chain. */
    BlockId fork_root;
    SimTime window_start{0.0};
    SimTime window_end{0.0};
    /** A claimed block may sit at most this many blocks behind the committed tip. */
    Height confirmation_depth{7};
};

struct Claim {
    AgentId bribee{};
    ClaimRole role{ClaimRole::Mined};
    /** Chain from the fork root to the committed tip, root first. */
    std::vector<BlockPtr> segment;
    BlockId claimed_block;
};

struct Payout {
    AgentId bribee{};
    std::string payout_address;
    ClaimRole role{ClaimRole::Mined};
    BlockId block;
    TokenAmount amount;
    SimTime time{0.0};
};

enum class ClaimRejection { NotInSegment, OutsideConfirmationWindow, NotMiner, Duplicate, EscrowExhausted };
std::string_view to_string(ClaimRejection r);

struct VerifyOutcome {
    std::optional<Payout> payout;
    std::optional<ClaimRejection> rejection;

    bool paid() const { return payout.has_value(); }
};

struct SettlementReport {
    TerminationReason reason{TerminationReason::Expired};
    SimTime time{0.0};
    TokenAmount total_paid_mined;
    TokenAmount total_paid_accept;
    TokenAmount refund;
};

using ClaimId = uint64_t;

/**
 * Cross-chain bribe contract. Lifecycle is Proposed -> Funded -> Active -> Terminated;
 * the deposit stays locked until termination. The contract acts as a perfect oracle
 * over the victim chain: segments are checked through their content-hash links.
 *
 * Invariant: total_paid() + remaining_escrow() == deposit() at all times.
 */
class BribeContract
{
public:
    explicit BribeContract(ContractParams params);

    const ContractParams& params() const { return params_; }
    ContractState state() const { return state_; }

    void deposit(TokenAmount amount);
    void activate();

    /** Bind a victim-chain miner to a payout address; re-registration overwrites. */
    void register_bribee(AgentId bribee, std::string payout_address);
    bool is_registered(AgentId bribee) const { return bribees_.contains(bribee); }

    /** Queue a claim after checking the segment is anchored at the fork root and hash-linked. */
    ClaimId commit_proof(Claim claim);
    VerifyOutcome verify_claim(ClaimId id, SimTime now);

    /**
     * Terminate if the fork is canonical in @p tree or the window has ended; returns
     * nullopt otherwise. Unspent escrow is refunded to the creator.
     */
    std::optional<SettlementReport> terminate(const BlockTree& tree, SimTime now);

    TokenAmount deposit_amount() const { return deposit_; }
    TokenAmount total_paid() const { return paid_mined_ + paid_accept_; }
    TokenAmount total_paid(ClaimRole role) const { return role == ClaimRole::Mined ? paid_mined_ : paid_accept_; }
    TokenAmount remaining_escrow() const { return deposit_ - total_paid(); }
    const std::vector<Payout>& payouts() const { return payouts_; }
    const std::optional<SettlementReport>& report() const { return report_; }
    size_t pending_claims() const { return pending_.size(); }

    /** (bribee, block, role) triples that have been paid. */
    std::set<std::tuple<AgentId, BlockId, ClaimRole>> paid_claims() const;

    /** CSV: bribee,role,block_id,amount,sim_time. */
    void write_settlement_csv(std::ostream& out) const;
    /** key=value lines: reason, total_paid_mined, total_paid_accept, refund. */
    void write_summary(std::ostream& out) const;

private:
    void require_state(ContractState s, std::string_view op) const;

    ContractParams params_;
    ContractState state_{ContractState::Proposed};
    TokenAmount deposit_;
    TokenAmount paid_mined_;
    TokenAmount paid_accept_;
    std::map<AgentId, std::string> bribees_;
    std::map<ClaimId, Claim> pending_;
    ClaimId next_claim_{1};
    std::set<std::tuple<AgentId, BlockId, ClaimRole>> paid_keys_;
    std::vector<Payout> payouts_;
    std::optional<SettlementReport> report_;
};

/** Contracts on the paying chain, keyed by proposal id. */
class ContractRegistry
{
public:
    BribeContract& propose(ContractParams params);
    BribeContract& get(const std::string& id);
    const std::map<std::string, BribeContract>& contracts() const { return contracts_; }

private:
    std::map<std::string, BribeContract> contracts_;
};

} // namespace bribesim

#endif // BRIBESIM_BRIBE_CONTRACT_H
