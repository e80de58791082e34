// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <bribesim/simulation.h>

#include <bribesim/economics.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <tuple>
#include <unordered_set>

namespace bribesim {

namespace {

std::string fmt_time(double t)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", t);
    return buf;
}

bool positive(double v) { return v > 0.0 && std::isfinite(v); }

RewardParams reward_params(const SimConfig& c)
{
    RewardParams p;
    p.block_reward = EthAmount::from_double(c.block_reward);
    p.nephew_divisor = c.nephew_divisor;
    p.tx_fee = EthAmount::from_double(c.tx_fee);
    p.uncle_window = c.chain.uncle_window;
    p.max_uncles = c.chain.max_uncles;
    return p;
}

class Engine
{
public:
    explicit Engine(const SimConfig& config)
        : cfg_(config), roster_(effective_roster(config)), beta_(effective_network_hash_rate(config)),
          streams_(config.seed), mining_rng_(streams_.stream("mining")), delay_rng_(streams_.stream("delay")),
          topology_(roster_.size() >= 2 ? build_topology(roster_.size(), config.peer_degree, config.seed) : PeerGraph(1)),
          trace_{config, BlockTree(Block::genesis(), config.chain), RewardLedger(reward_params(config)), std::nullopt, {}, {}, 0, 0, false, std::nullopt, std::nullopt}
    {
        for (const auto& spec : roster_) {
            agents_.emplace_back(spec, cfg_.chain);
            hash_powers_.push_back(spec.hash_power_mhs);
            AgentStats s;
            s.spec = spec;
            s.implicit = trace_.agents.size() >= cfg_.agents.size();
            trace_.agents.push_back(s);
        }
        for (size_t i = 0; i < agents_.size(); ++i) {
            for (size_t j : topology_.neighbors(i)) agents_[i].peers.push_back(agents_[j].id());
        }
    }

    SimTrace run()
    {
        if (cfg_.duration > 0.0) schedule_next_block(0.0);
        if (cfg_.contract && cfg_.contract->activation_time <= cfg_.duration) {
            queue_.push(cfg_.contract->activation_time, EventKind::ContractTick);
        }
        while (!queue_.empty() && queue_.top().time <= cfg_.duration) {
            Event e = queue_.pop();
            log(e);
            switch (e.kind) {
            case EventKind::BlockFound: on_block_found(*e.agent, e.time); break;
            case EventKind::DeliverBlock: on_deliver(*e.agent, e.block, e.time); break;
            case EventKind::ContractTick: on_contract_tick(e.time); break;
            }
        }
        finish();
        return std::move(trace_);
    }

private:
    void log(const Event& e)
    {
        EventRecord r{e.time, e.seq, e.kind, std::nullopt, std::nullopt};
        if (e.agent) r.agent = agents_[*e.agent].id();
        if (e.block) {
            r.block = e.block->id();
            if (e.block->timestamp() > e.time) throw InvariantError("delivery precedes block discovery");
        }
        trace_.events.push_back(r);
    }

    void schedule_next_block(SimTime now)
    {
        auto draw = schedule_mining(mining_rng_, hash_powers_, beta_, cfg_.block_interval, now);
        // effective_roster covers beta, so a finder always exists.
        queue_.push(draw.time, EventKind::BlockFound, draw.finder.value_or(agents_.size() - 1));
    }

    BlockPtr make_block(const MinerAgent& agent, const BlockId& parent_id, SimTime now)
    {
        const Block& parent = agent.view().get(parent_id);
        std::vector<BlockId> uncles;
        for (const auto& u : agent.view().eligible_uncles(parent_id)) {
            if (uncles.size() == cfg_.chain.max_uncles) break;
            if (referenced_anywhere_.contains(u) || !trace_.tree.contains(u)) continue;
            uncles.push_back(u);
        }
        BlockHeader h;
        h.parent_hash = parent_id;
        h.miner = agent.id();
        h.merkle_root = empty_root_;
        h.timestamp = now;
        h.difficulty = 1;
        h.nonce = nonce_++;
        for (const auto& u : uncles) referenced_anywhere_.insert(u);
        return std::make_shared<const Block>(h, std::move(uncles), std::vector<std::string>{}, parent.height() + 1);
    }

    void publish(size_t origin, const BlockPtr& block, SimTime now)
    {
        auto r = trace_.tree.append(block);
        if (!r) throw InvariantError("published block rejected by the network tree: " + std::string(to_string(r.reason())));
        for (const auto& d : propagate(origin, now, topology_, cfg_.delay, delay_rng_)) {
            queue_.push(d.time, EventKind::DeliverBlock, d.node, block);
        }
    }

    void on_block_found(size_t i, SimTime now)
    {
        MinerAgent& agent = agents_[i];
        const MiningDecision decision = mining_decision(agent);
        BlockPtr block = make_block(agent, decision.target, now);
        agent.add_own_block(block);
        ++trace_.blocks_found;
        ++trace_.agents[i].blocks_found;

        if (!decision.broadcast_immediately) {
            selfish_decide(agent, FoundBlock{block}, cfg_.selfish_release_lead);
        } else {
            publish(i, block, now);
        }

        if (agent.bribed()) on_bribed_block(i, block, now);
        schedule_next_block(now);
    }

    void on_bribed_block(size_t i, const BlockPtr& block, SimTime now)
    {
        MinerAgent& agent = agents_[i];
        if (!contract_ && agent.fork_parent() && block->parent() == *agent.fork_parent()) anchor_contract(block, now);
        if (contract_ && contract_->state() == ContractState::Active && agent.in_fork(block->id())) {
            pending_.push_back(Claim{agent.id(), ClaimRole::Mined,
                                     agent.view().chain_segment(*agent.fork_root(), block->id()), block->id()});
        }
    }

    void anchor_contract(const BlockPtr& root, SimTime now)
    {
        const auto& sc = *cfg_.contract;
        ContractParams p;
        p.id = sc.id;
        p.creator_address = sc.creator_address;
        p.mining_bribe = TokenAmount::from_double(cfg_.mining_bribe);
        p.accept_bribe = TokenAmount::from_double(economics::accept_bribe_per_block(cfg_.accept_bribe_per_hour, cfg_.block_interval));
        p.fork_root = root->id();
        p.window_start = sc.activation_time;
        p.window_end = sc.activation_time + sc.window;
        p.confirmation_depth = sc.confirmation_depth;
        contract_ = &registry_.propose(p);
        contract_->deposit(TokenAmount::from_double(sc.deposit));
        contract_->activate();
        for (auto& a : agents_) {
            if (!a.bribed()) continue;
            contract_->register_bribee(a.id(), "xchain:" + std::to_string(a.id()));
            a.set_fork_root(root->id());
        }
        (void)now;
    }

    void on_deliver(size_t j, const BlockPtr& block, SimTime now)
    {
        MinerAgent& agent = agents_[j];
        AcceptDecision d = accept_block_policy(agent, block);
        if (contract_ && contract_->state() == ContractState::Active) {
            for (auto& c : d.claims) pending_.push_back(std::move(c));
        }
        if (agent.strategy() != Strategy::Selfish) return;
        for (const auto& b : d.inserted) {
            SelfishAction action = selfish_decide(agent, PublicBlock{b}, cfg_.selfish_release_lead);
            for (const auto& out : action.blocks) publish(j, out, now);
        }
    }

    void make_offer(SimTime now)
    {
        trace_.offer_made = true;
        const Block& head = trace_.tree.head_block();
        const Height h = head.height() >= cfg_.contract->fork_depth ? head.height() - cfg_.contract->fork_depth : 0;
        const BlockId fork_parent = *trace_.tree.ancestor_at(head.id(), h);
        trace_.fork_parent = fork_parent;

        const RationalInputs base{0.0, beta_, cfg_.block_interval, cfg_.block_reward, cfg_.accept_bribe_per_hour,
                                  cfg_.mining_bribe, cfg_.join_margin, cfg_.eth_to_token};
        const BribeOffer offer{cfg_.accept_bribe_per_hour, cfg_.mining_bribe};
        for (size_t i = 0; i < agents_.size(); ++i) {
            if (rational_decide(agents_[i], base, std::span(&offer, 1))) {
                agents_[i].join_bribery(fork_parent);
                trace_.agents[i].joined_bribery = true;
            }
        }
        (void)now;
    }

    void process_claims(SimTime now)
    {
        std::sort(pending_.begin(), pending_.end(), [](const Claim& a, const Claim& b) {
            return std::tie(a.bribee, a.claimed_block, a.role) < std::tie(b.bribee, b.claimed_block, b.role);
        });
        for (auto& claim : pending_) {
            try {
                const ClaimId id = contract_->commit_proof(std::move(claim));
                VerifyOutcome v = contract_->verify_claim(id, now);
                if (!v.payout) {
                    ++trace_.claims_rejected;
                    continue;
                }
                if (v.payout->role == ClaimRole::Mined) {
                    trace_.ledger.credit_bribe_mining(v.payout->bribee, v.payout->amount);
                } else {
                    trace_.ledger.credit_bribe_accept(v.payout->bribee, v.payout->amount);
                }
            } catch (const ContractError&) {
                ++trace_.claims_rejected;
            }
        }
        pending_.clear();
    }

    void end_bribery()
    {
        for (auto& a : agents_) a.leave_bribery();
    }

    void on_contract_tick(SimTime now)
    {
        const auto& sc = *cfg_.contract;
        if (!trace_.offer_made) make_offer(now);
        const SimTime window_end = sc.activation_time + sc.window;

        if (contract_ && contract_->state() == ContractState::Active) {
            process_claims(now);
            if (auto report = contract_->terminate(trace_.tree, now)) {
                if (report->reason == TerminationReason::ForkWon) trace_.fork_won_at = now;
                end_bribery();
                return;
            }
        } else if (!contract_ && now >= window_end) {
            end_bribery();
            return;
        }
        queue_.push(now + cfg_.contract_tick, EventKind::ContractTick);
    }

    void finish()
    {
        if (contract_ && contract_->state() == ContractState::Active) {
            process_claims(cfg_.duration);
            if (auto report = contract_->terminate(trace_.tree, cfg_.duration)) {
                if (report->reason == TerminationReason::ForkWon) trace_.fork_won_at = cfg_.duration;
            }
        }
        trace_.ledger.settle_canonical_chain(trace_.tree);
        if (contract_) trace_.contract = *contract_;

        std::unordered_map<AgentId, size_t> index;
        for (size_t i = 0; i < agents_.size(); ++i) {
            index[agents_[i].id()] = i;
            trace_.agents[i].unpublished_blocks = agents_[i].private_blocks().size();
        }
        const auto branches = trace_.branches();
        const auto& order = trace_.tree.arrival_order();
        for (size_t k = 0; k < order.size(); ++k) {
            const Block& b = trace_.tree.get(order[k]);
            if (b.is_genesis()) continue;
            auto& s = trace_.agents[index.at(b.miner())];
            switch (branches[k]) {
            case BlockBranch::Main: ++s.main_blocks; break;
            case BlockBranch::Uncle: ++s.uncle_blocks; break;
            case BlockBranch::Lost: ++s.lost_blocks; break;
            }
        }
        check_invariants();
    }

    void check_invariants() const
    {
        if (trace_.contract) {
            const auto& c = *trace_.contract;
            if (c.total_paid() + c.remaining_escrow() != c.deposit_amount()) throw InvariantError("escrow not conserved");
            if (c.paid_claims().size() != c.payouts().size()) throw InvariantError("a claim was paid twice");
            const auto fork = trace_.tree.subtree(c.params().fork_root);
            const std::unordered_set<BlockId> in_fork(fork.begin(), fork.end());
            for (const auto& p : c.payouts()) {
                if (!in_fork.contains(p.block)) {
                    throw InvariantError("payout for a block outside the fork branch");
                }
            }
        }
        uint64_t published = trace_.tree.size() - 1;
        uint64_t unpublished = 0;
        for (const auto& s : trace_.agents) unpublished += s.unpublished_blocks;
        if (published + unpublished != trace_.blocks_found) throw InvariantError("block accounting mismatch");
        for (const auto& b : trace_.ledger.balances()) {
            if (b.second.main < EthAmount{} || b.second.uncle < EthAmount{} || b.second.nephew < EthAmount{}) {
                throw InvariantError("negative balance");
            }
        }
    }

    const SimConfig& cfg_;
    std::vector<AgentSpec> roster_;
    double beta_;
    RngStreams streams_;
    Rng mining_rng_;
    Rng delay_rng_;
    PeerGraph topology_;
    SimTrace trace_;

    std::vector<MinerAgent> agents_;
    std::vector<double> hash_powers_;
    EventQueue queue_;
    std::unordered_set<BlockId> referenced_anywhere_;
    Hash256 empty_root_ = transactions_root({});
    uint64_t nonce_{0};

    ContractRegistry registry_;
    BribeContract* contract_{nullptr};
    std::vector<Claim> pending_;
};

} // namespace

std::string_view to_string(BlockBranch b)
{
    switch (b) {
    case BlockBranch::Main: return "main";
    case BlockBranch::Uncle: return "uncle";
    case BlockBranch::Lost: return "lost";
    }
    return "unknown";
}

void validate(const SimConfig& c)
{
    if (!positive(c.block_interval)) throw ConfigError("block_interval must be positive");
    if (!(c.duration >= 0.0) || !std::isfinite(c.duration)) throw ConfigError("duration must be non-negative");
    if (c.peer_degree < 1) throw ConfigError("peer_degree must be at least 1");
    if (c.agents.empty()) throw ConfigError("at least one agent is required");
    std::set<AgentId> ids;
    double total = 0.0;
    for (const auto& a : c.agents) {
        if (!positive(a.hash_power_mhs)) throw ConfigError("agent " + std::to_string(a.id) + ": hash_power must be positive");
        if (a.id == NO_AGENT) throw ConfigError("agent id reserved");
        if (!ids.insert(a.id).second) throw ConfigError("duplicate agent id " + std::to_string(a.id));
        total += a.hash_power_mhs;
    }
    if (c.network_hash_rate) {
        if (!positive(*c.network_hash_rate)) throw ConfigError("network_hash_rate must be positive");
        if (*c.network_hash_rate < total * (1.0 - 1e-12)) throw ConfigError("network_hash_rate is below the roster total");
    }
    if (const auto* f = std::get_if<FixedDelay>(&c.delay)) {
        if (!(f->seconds >= 0.0)) throw ConfigError("delay must be non-negative");
    } else {
        const auto& u = std::get<UniformDelay>(c.delay);
        if (!(u.lo >= 0.0) || !(u.hi >= u.lo)) throw ConfigError("uniform delay needs 0 <= lo <= hi");
    }
    if (!(c.block_reward >= 0.0)) throw ConfigError("block_reward must be non-negative");
    if (c.nephew_divisor <= 0) throw ConfigError("nephew_divisor must be positive");
    if (!(c.tx_fee >= 0.0)) throw ConfigError("tx_fee must be non-negative");
    if (!(c.accept_bribe_per_hour >= 0.0)) throw ConfigError("accept_bribe_per_hour must be non-negative");
    if (!(c.join_margin >= 0.0)) throw ConfigError("join_margin must be non-negative");
    if (!positive(c.eth_to_token)) throw ConfigError("eth_to_token must be positive");
    if (c.selfish_release_lead < 1) throw ConfigError("selfish release_lead must be at least 1");
    if (c.chain.uncle_window < 1 || c.chain.uncle_window > 7) throw ConfigError("uncle_window must be in [1, 7]");
    if (c.contract) {
        const auto& k = *c.contract;
        if (!positive(c.mining_bribe)) throw ConfigError("mining_bribe must be positive");
        if (!positive(c.accept_bribe_per_hour)) throw ConfigError("accept_bribe_per_hour must be positive with a contract");
        if (!positive(k.deposit)) throw ConfigError("contract deposit must be positive");
        if (!positive(k.window)) throw ConfigError("contract window must be positive");
        if (!(k.activation_time >= 0.0)) throw ConfigError("contract activation_time must be non-negative");
        if (!positive(c.contract_tick)) throw ConfigError("contract_tick must be positive");
        if (k.id.empty()) throw ConfigError("contract id must be non-empty");
    }
}

std::vector<AgentSpec> effective_roster(const SimConfig& c)
{
    std::vector<AgentSpec> roster = c.agents;
    std::sort(roster.begin(), roster.end(), [](const AgentSpec& a, const AgentSpec& b) { return a.id < b.id; });
    const double total = std::accumulate(roster.begin(), roster.end(), 0.0,
                                         [](double s, const AgentSpec& a) { return s + a.hash_power_mhs; });
    if (c.network_hash_rate && *c.network_hash_rate > total * (1.0 + 1e-12)) {
        const AgentId next = roster.empty() ? 0 : roster.back().id + 1;
        roster.push_back(AgentSpec{next, Strategy::Honest, *c.network_hash_rate - total});
    }
    return roster;
}

double effective_network_hash_rate(const SimConfig& c)
{
    const auto roster = effective_roster(c);
    return std::accumulate(roster.begin(), roster.end(), 0.0,
                           [](double s, const AgentSpec& a) { return s + a.hash_power_mhs; });
}

SimTrace run(const SimConfig& config)
{
    validate(config);
    return Engine(config).run();
}

BlockBranch SimTrace::branch_of(const BlockId& id) const
{
    if (tree.is_ancestor_or_self(id, tree.canonical_head())) return BlockBranch::Main;
    if (auto by = tree.referencing_block(id); by && tree.is_ancestor_or_self(*by, tree.canonical_head())) {
        return BlockBranch::Uncle;
    }
    return BlockBranch::Lost;
}

std::vector<BlockBranch> SimTrace::branches() const
{
    std::unordered_set<BlockId> canonical;
    for (const auto& b : tree.chain_segment(tree.genesis(), tree.canonical_head())) canonical.insert(b->id());
    std::vector<BlockBranch> out;
    out.reserve(tree.size());
    for (const auto& id : tree.arrival_order()) {
        if (canonical.contains(id)) {
            out.push_back(BlockBranch::Main);
        } else if (auto by = tree.referencing_block(id); by && canonical.contains(*by)) {
            out.push_back(BlockBranch::Uncle);
        } else {
            out.push_back(BlockBranch::Lost);
        }
    }
    return out;
}

void SimTrace::write_blocks_csv(std::ostream& out) const
{
    const auto all = branches();
    const auto& order = tree.arrival_order();
    out << "id,height,parent,miner,timestamp,n_uncles,branch\n";
    for (size_t k = 0; k < order.size(); ++k) {
        const BlockId& id = order[k];
        const Block& b = tree.get(id);
        const BlockBranch branch = all[k];
        out << id.hex() << ',' << b.height() << ',' << (b.is_genesis() ? std::string() : b.parent().hex()) << ','
            << (b.miner() == NO_AGENT ? std::string() : std::to_string(b.miner())) << ',' << fmt_time(b.timestamp())
            << ',' << b.uncle_refs().size() << ',' << to_string(branch) << '\n';
    }
}

void SimTrace::write_events_csv(std::ostream& out) const
{
    out << "time,seq,kind,agent,block_id\n";
    for (const auto& e : events) {
        out << fmt_time(e.time) << ',' << e.seq << ',' << to_string(e.kind) << ','
            << (e.agent ? std::to_string(*e.agent) : std::string()) << ',' << (e.block ? e.block->hex() : std::string())
            << '\n';
    }
}

void SimTrace::write_settlement_csv(std::ostream& out) const
{
    if (contract) {
        contract->write_settlement_csv(out);
    } else {
        out << "bribee,role,block_id,amount,sim_time\n";
    }
}

void SimTrace::write_summary(std::ostream& out) const
{
    out << "seed=" << config.seed << '\n';
    out << "duration=" << fmt_time(config.duration) << '\n';
    out << "block_interval=" << fmt_time(config.block_interval) << '\n';
    out << "blocks_found=" << blocks_found << '\n';
    out << "blocks_published=" << tree.size() - 1 << '\n';
    out << "canonical_height=" << tree.head_block().height() << '\n';
    out << "canonical_head=" << tree.canonical_head().hex() << '\n';
    out << "eth_minted=" << ledger.total_minted().to_string() << '\n';
    out << "offer_made=" << (offer_made ? "true" : "false") << '\n';
    out << "fork_parent=" << (fork_parent ? fork_parent->hex() : std::string()) << '\n';
    out << "fork_won=" << (fork_won_at ? "true" : "false") << '\n';
    out << "fork_won_at=" << (fork_won_at ? fmt_time(*fork_won_at) : std::string()) << '\n';
    out << "claims_rejected=" << claims_rejected << '\n';
    if (contract) {
        out << "[contract]\n";
        contract->write_summary(out);
    }
    out << "[agents]\n";
    out << "id,strategy,hash_power_mhs,implicit,joined_bribery,blocks_found,main,uncle,lost,unpublished\n";
    for (const auto& a : agents) {
        char hp[40];
        std::snprintf(hp, sizeof(hp), "%.6f", a.spec.hash_power_mhs);
        out << a.spec.id << ',' << to_string(a.spec.strategy) << ',' << hp << ',' << (a.implicit ? 1 : 0) << ','
            << (a.joined_bribery ? 1 : 0) << ',' << a.blocks_found << ',' << a.main_blocks << ',' << a.uncle_blocks
            << ',' << a.lost_blocks << ',' << a.unpublished_blocks << '\n';
    }
}

} // namespace bribesim
