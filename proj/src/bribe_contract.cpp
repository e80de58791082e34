// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <bribesim/bribe_contract.h>

#include <algorithm>
#include <cstdio>

namespace bribesim {

std::string_view to_string(ContractState s)
{
    switch (s) {
    case ContractState::Proposed: return "proposed";
    case ContractState::Funded: return "funded";
    case ContractState::Active: return "active";
    case ContractState::Terminated: return "terminated";
    }
    return "unknown";
}

std::string_view to_string(ClaimRole r) { return r == ClaimRole::Mined ? "mined" : "accepted"; }

std::string_view to_string(TerminationReason r) { return r == TerminationReason::ForkWon ? "fork-won" : "expired"; }

std::string_view to_string(ClaimRejection r)
{
    switch (r) {
    case ClaimRejection::NotInSegment: return "not-in-segment";
    case ClaimRejection::OutsideConfirmationWindow: return "outside-confirmation-window";
    case ClaimRejection::NotMiner: return "not-miner";
    case ClaimRejection::Duplicate: return "duplicate";
    case ClaimRejection::EscrowExhausted: return "escrow-exhausted";
    }
    return "unknown";
}

BribeContract::BribeContract(ContractParams params) : params_(std::move(params))
{
    if (params_.mining_bribe <= TokenAmount{} || params_.accept_bribe <= TokenAmount{}) {
        throw ContractError(ContractErrc::NonPositiveRate, "bribe rates must be positive");
    }
    if (params_.fork_root.is_null()) throw ContractError(ContractErrc::MissingForkRoot, "fork root is required");
    if (!(params_.window_end > params_.window_start)) {
        throw ContractError(ContractErrc::InvalidWindow, "contract window must have positive length");
    }
}

void BribeContract::require_state(ContractState s, std::string_view op) const
{
    if (state_ != s) {
        throw ContractError(ContractErrc::WrongState, std::string(op) + " requires state " + std::string(to_string(s)) +
                                                          ", contract is " + std::string(to_string(state_)));
    }
}

void BribeContract::deposit(TokenAmount amount)
{
    require_state(ContractState::Proposed, "deposit");
    if (amount <= TokenAmount{}) throw ContractError(ContractErrc::ZeroDeposit, "deposit must be positive");
    deposit_ = amount;
    state_ = ContractState::Funded;
}

void BribeContract::activate()
{
    require_state(ContractState::Funded, "activate");
    state_ = ContractState::Active;
}

void BribeContract::register_bribee(AgentId bribee, std::string payout_address)
{
    if (state_ == ContractState::Terminated) throw ContractError(ContractErrc::WrongState, "contract is terminated");
    bribees_[bribee] = std::move(payout_address);
}

ClaimId BribeContract::commit_proof(Claim claim)
{
    require_state(ContractState::Active, "commit_proof");
    if (!is_registered(claim.bribee)) {
        throw ContractError(ContractErrc::UnregisteredBribee, "agent " + std::to_string(claim.bribee) + " is not a bribee");
    }
    const auto& seg = claim.segment;
    if (seg.empty() || !seg.front() || seg.front()->id() != params_.fork_root) {
        throw ContractError(ContractErrc::MalformedSegment, "segment must start at the fork root");
    }
    for (size_t i = 1; i < seg.size(); ++i) {
        if (!seg[i] || seg[i]->parent() != seg[i - 1]->id() || seg[i]->height() != seg[i - 1]->height() + 1) {
            throw ContractError(ContractErrc::MalformedSegment, "segment parent link broken at position " + std::to_string(i));
        }
    }
    const ClaimId id = next_claim_++;
    pending_.emplace(id, std::move(claim));
    return id;
}

VerifyOutcome BribeContract::verify_claim(ClaimId id, SimTime now)
{
    auto it = pending_.find(id);
    if (it == pending_.end()) throw ContractError(ContractErrc::UnknownClaim, "no pending claim " + std::to_string(id));
    require_state(ContractState::Active, "verify_claim");
    const Claim claim = std::move(it->second);
    pending_.erase(it);

    auto reject = [](ClaimRejection r) { return VerifyOutcome{std::nullopt, r}; };
    const auto& seg = claim.segment;
    auto pos = std::find_if(seg.begin(), seg.end(), [&](const BlockPtr& b) { return b->id() == claim.claimed_block; });
    if (pos == seg.end()) return reject(ClaimRejection::NotInSegment);
    if (seg.back()->height() - (*pos)->height() > params_.confirmation_depth) {
        return reject(ClaimRejection::OutsideConfirmationWindow);
    }
    if (claim.role == ClaimRole::Mined && (*pos)->miner() != claim.bribee) return reject(ClaimRejection::NotMiner);

    auto key = std::make_tuple(claim.bribee, claim.claimed_block, claim.role);
    if (paid_keys_.contains(key)) return reject(ClaimRejection::Duplicate);
    const TokenAmount amount = claim.role == ClaimRole::Mined ? params_.mining_bribe : params_.accept_bribe;
    if (remaining_escrow() < amount) return reject(ClaimRejection::EscrowExhausted);

    paid_keys_.insert(key);
    (claim.role == ClaimRole::Mined ? paid_mined_ : paid_accept_) += amount;
    Payout p{claim.bribee, bribees_.at(claim.bribee), claim.role, claim.claimed_block, amount, now};
    payouts_.push_back(p);
    return VerifyOutcome{std::move(p), std::nullopt};
}

std::optional<SettlementReport> BribeContract::terminate(const BlockTree& tree, SimTime now)
{
    require_state(ContractState::Active, "terminate");
    std::optional<TerminationReason> reason;
    if (tree.contains(params_.fork_root) && tree.is_ancestor_or_self(params_.fork_root, tree.canonical_head())) {
        reason = TerminationReason::ForkWon;
    } else if (now >= params_.window_end) {
        reason = TerminationReason::Expired;
    }
    if (!reason) return std::nullopt;
    pending_.clear();
    state_ = ContractState::Terminated;
    report_ = SettlementReport{*reason, now, paid_mined_, paid_accept_, remaining_escrow()};
    return report_;
}

std::set<std::tuple<AgentId, BlockId, ClaimRole>> BribeContract::paid_claims() const { return paid_keys_; }

void BribeContract::write_settlement_csv(std::ostream& out) const
{
    out << "bribee,role,block_id,amount,sim_time\n";
    char time_buf[32];
    for (const auto& p : payouts_) {
        std::snprintf(time_buf, sizeof(time_buf), "%.6f", p.time);
        out << p.bribee << ',' << to_string(p.role) << ',' << p.block.hex() << ',' << p.amount.to_string() << ','
            << time_buf << '\n';
    }
}

void BribeContract::write_summary(std::ostream& out) const
{
    out << "contract_id=" << params_.id << '\n';
    out << "state=" << to_string(state_) << '\n';
    out << "fork_root=" << params_.fork_root.hex() << '\n';
    out << "deposit=" << deposit_.to_string() << '\n';
    if (report_) {
        char time_buf[32];
        std::snprintf(time_buf, sizeof(time_buf), "%.6f", report_->time);
        out << "reason=" << to_string(report_->reason) << '\n';
        out << "terminated_at=" << time_buf << '\n';
    } else {
        out << "reason=none\n";
    }
    out << "total_paid_mined=" << paid_mined_.to_string() << '\n';
    out << "total_paid_accept=" << paid_accept_.to_string() << '\n';
    out << "refund=" << (report_ ? report_->refund : TokenAmount{}).to_string() << '\n';
}

BribeContract& ContractRegistry::propose(ContractParams params)
{
    if (contracts_.contains(params.id)) {
        throw ContractError(ContractErrc::DuplicateProposal, "contract id '" + params.id + "' already exists");
    }
    std::string id = params.id;
    BribeContract contract(std::move(params));
    return contracts_.emplace(std::move(id), std::move(contract)).first->second;
}

BribeContract& ContractRegistry::get(const std::string& id)
{
    auto it = contracts_.find(id);
    if (it == contracts_.end()) throw ContractError(ContractErrc::UnknownContract, "no contract '" + id + "'");
    return it->second;
}

} // namespace bribesim
