// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <bribesim/scenario.h>

#include <bribesim/economics.h>

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace bribesim {

namespace {

class MapReader
{
public:
    MapReader(const YAML::Node& node, std::string path, const std::string& source)
        : node_(node), path_(std::move(path)), source_(source)
    {
        if (!node_.IsMap()) fail(node_, path_.empty() ? "<root>" : path_, "expected a mapping");
    }

    [[noreturn]] void fail(const YAML::Node& at, const std::string& field, const std::string& msg) const
    {
        const auto mark = at.Mark();
        throw ScenarioParseError(source_, mark.line + 1, mark.column + 1, field, msg);
    }

    std::string field(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

    bool has(const char* key) const { return static_cast<bool>(node_[key]); }

    YAML::Node child(const char* key)
    {
        used_.insert(key);
        return node_[key];
    }

    template <typename T>
    std::optional<T> opt(const char* key)
    {
        YAML::Node n = child(key);
        if (!n || n.IsNull()) return std::nullopt;
        return convert<T>(n, field(key));
    }

    template <typename T>
    void read(const char* key, T& out)
    {
        if (auto v = opt<T>(key)) out = *v;
    }

    template <typename T>
    T req(const char* key)
    {
        auto v = opt<T>(key);
        if (!v) fail(node_, field(key), "required field is missing");
        return *v;
    }

    template <typename T>
    T convert(const YAML::Node& n, const std::string& f) const
    {
        if (!n.IsScalar()) fail(n, f, "expected a scalar value");
        try {
            return n.as<T>();
        } catch (const YAML::Exception&) {
            fail(n, f, "value '" + n.Scalar() + "' has the wrong type");
        }
    }

    /** Reject keys that were never read. */
    void finish() const
    {
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!used_.contains(key)) fail(kv.first, field(key.c_str()), "unknown field");
        }
    }

    const YAML::Node& node() const { return node_; }
    const std::string& source() const { return source_; }

private:
    YAML::Node node_;
    std::string path_;
    const std::string& source_;
    std::set<std::string> used_;
};

DelayModel read_delay(MapReader& r)
{
    const auto model = r.req<std::string>("model");
    if (model == "fixed") {
        FixedDelay d;
        r.read("seconds", d.seconds);
        r.finish();
        return d;
    }
    if (model == "uniform") {
        UniformDelay d{r.req<double>("lo"), r.req<double>("hi")};
        r.finish();
        return d;
    }
    r.fail(r.node()["model"], r.field("model"), "expected 'fixed' or 'uniform'");
}

void read_agents(const YAML::Node& list, const std::string& source, std::vector<AgentSpec>& out)
{
    if (!list.IsSequence()) {
        const auto m = list.Mark();
        throw ScenarioParseError(source, m.line + 1, m.column + 1, "agents", "expected a list");
    }
    for (size_t i = 0; i < list.size(); ++i) {
        MapReader a(list[i], "agents[" + std::to_string(i) + "]", source);
        const auto strategy_name = a.req<std::string>("strategy");
        const auto strategy = parse_strategy(strategy_name);
        if (!strategy) a.fail(list[i]["strategy"], a.field("strategy"), "unknown strategy '" + strategy_name + "'");
        const double hash_power = a.req<double>("hash_power");
        const auto count = a.opt<uint32_t>("count").value_or(1);
        const auto first = a.opt<AgentId>("id").value_or(static_cast<AgentId>(out.size()));
        a.finish();
        for (uint32_t k = 0; k < count; ++k) out.push_back(AgentSpec{first + k, *strategy, hash_power});
    }
}

std::string fmt(double v, int precision)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

void write_file(const std::filesystem::path& path, const auto& writer)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    writer(out);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

} // namespace

ScenarioParseError::ScenarioParseError(const std::string& source, int line, int column, const std::string& field,
                                       const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                         (field.empty() ? "" : field + ": ") + message),
      line_(line), column_(column), field_(field)
{
}

Scenario parse_scenario(std::string_view text, const std::string& source)
{
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw ScenarioParseError(source, e.mark.line + 1, e.mark.column + 1, "", e.msg);
    }
    MapReader r(root, "", source);

    const int schema = r.req<int>("schema");
    if (schema != SCENARIO_SCHEMA_VERSION) {
        r.fail(root["schema"], "schema", "unsupported schema version " + std::to_string(schema));
    }

    Scenario sc;
    sc.name = r.req<std::string>("name");
    sc.sim.seed = r.req<uint64_t>("seed");
    sc.outputs = r.opt<std::string>("outputs").value_or("out/" + sc.name);

    if (r.has("sim")) {
        MapReader s(r.child("sim"), "sim", source);
        s.read("block_interval", sc.sim.block_interval);
        s.read("duration", sc.sim.duration);
        s.read("peer_degree", sc.sim.peer_degree);
        sc.sim.network_hash_rate = s.opt<double>("network_hash_rate");
        s.read("contract_tick", sc.sim.contract_tick);
        if (s.has("delay")) {
            MapReader d(s.child("delay"), "sim.delay", source);
            sc.sim.delay = read_delay(d);
        }
        s.finish();
    } else {
        r.child("sim");
    }

    if (r.has("chain")) {
        MapReader c(r.child("chain"), "chain", source);
        c.read("max_uncles", sc.sim.chain.max_uncles);
        c.read("uncle_window", sc.sim.chain.uncle_window);
        c.read("gas_limit", sc.sim.chain.gas_limit);
        c.finish();
    }

    if (r.has("economy")) {
        MapReader e(r.child("economy"), "economy", source);
        e.read("block_reward", sc.sim.block_reward);
        e.read("nephew_divisor", sc.sim.nephew_divisor);
        e.read("tx_fee", sc.sim.tx_fee);
        e.read("accept_bribe_per_hour", sc.sim.accept_bribe_per_hour);
        e.read("mining_bribe", sc.sim.mining_bribe);
        e.read("join_margin", sc.sim.join_margin);
        e.read("eth_to_token", sc.sim.eth_to_token);
        e.finish();
    }

    if (r.has("selfish")) {
        MapReader s(r.child("selfish"), "selfish", source);
        s.read("release_lead", sc.sim.selfish_release_lead);
        s.finish();
    }

    if (!r.has("agents")) r.fail(root, "agents", "required field is missing");
    read_agents(r.child("agents"), source, sc.sim.agents);

    if (r.has("contract")) {
        MapReader c(r.child("contract"), "contract", source);
        ContractScenario k;
        c.read("id", k.id);
        c.read("creator_address", k.creator_address);
        c.read("activation_time", k.activation_time);
        c.read("window", k.window);
        c.read("fork_depth", k.fork_depth);
        c.read("confirmation_depth", k.confirmation_depth);
        c.read("deposit", k.deposit);
        c.finish();
        sc.sim.contract = k;
    }

    if (r.has("economics")) {
        MapReader e(r.child("economics"), "economics", source);
        e.read("alpha_min", sc.economics.alpha_min);
        e.read("alpha_max", sc.economics.alpha_max);
        e.read("alpha_step", sc.economics.alpha_step);
        sc.economics.network_hash_rate = e.opt<double>("network_hash_rate");
        e.finish();
    }

    if (r.has("sweep")) {
        MapReader s(r.child("sweep"), "sweep", source);
        if (s.has("seeds")) {
            YAML::Node seeds = s.child("seeds");
            if (!seeds.IsSequence()) s.fail(seeds, "sweep.seeds", "expected a list");
            for (size_t i = 0; i < seeds.size(); ++i) {
                sc.sweep.seeds.push_back(s.convert<uint64_t>(seeds[i], "sweep.seeds[" + std::to_string(i) + "]"));
            }
        }
        if (auto runs = s.opt<uint32_t>("runs")) {
            for (uint32_t i = 0; i < *runs; ++i) sc.sweep.seeds.push_back(sc.sim.seed + i);
        }
        s.read("threads", sc.sweep.threads);
        s.finish();
    }
    if (sc.sweep.seeds.empty()) sc.sweep.seeds.push_back(sc.sim.seed);

    r.finish();
    validate(sc);
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioParseError(path.string(), 0, 0, "", "cannot read file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path.string());
}

void validate(const Scenario& sc)
{
    if (sc.name.empty() || !std::all_of(sc.name.begin(), sc.name.end(), [](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
        }) || sc.name == "." || sc.name == "..") {
        throw ConfigError("scenario name must be non-empty and use only [A-Za-z0-9._-]");
    }
    if (!(sc.economics.alpha_step > 0.0)) throw ConfigError("economics.alpha_step must be positive");
    if (!(sc.economics.alpha_min > 0.0)) throw ConfigError("economics.alpha_min must be positive");
    if (sc.economics.network_hash_rate && !(*sc.economics.network_hash_rate >= sc.economics.alpha_max)) {
        throw ConfigError("economics.network_hash_rate must be at least alpha_max");
    }
    validate(sc.sim);
}

void write_economics_sweep(const Scenario& sc, std::ostream& out)
{
    economics::SweepParams p;
    p.network_hash_rate_mhs = sc.economics.network_hash_rate.value_or(
        economics::default_network_hash_rate(sc.sim.block_reward > 0.0 ? sc.sim.block_reward : 2.0, sc.sim.block_interval));
    p.block_reward = sc.sim.block_reward;
    p.block_interval = sc.sim.block_interval;
    p.accept_bribe_per_hour = sc.sim.accept_bribe_per_hour;
    p.mining_bribe = sc.sim.mining_bribe;
    const auto alphas = economics::alpha_grid(sc.economics.alpha_min, sc.economics.alpha_max, sc.economics.alpha_step);
    economics::write_sweep_csv(out, economics::sweep_hourly_rewards(alphas, p));
}

void write_run_outputs(const Scenario& sc, const SimTrace& trace, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    write_file(dir / "blocks.csv", [&](std::ostream& o) { trace.write_blocks_csv(o); });
    write_file(dir / "events.csv", [&](std::ostream& o) { trace.write_events_csv(o); });
    write_file(dir / "ledger.csv", [&](std::ostream& o) { trace.ledger.write_csv(o, trace.config.eth_to_token); });
    write_file(dir / "contract_settlement.csv", [&](std::ostream& o) { trace.write_settlement_csv(o); });
    write_file(dir / "economics_sweep.csv", [&](std::ostream& o) { write_economics_sweep(sc, o); });
    write_file(dir / "summary.txt", [&](std::ostream& o) {
        o << "scenario=" << sc.name << '\n';
        trace.write_summary(o);
    });
}

std::vector<SweepRun> run_sweep(const Scenario& sc)
{
    const auto& seeds = sc.sweep.seeds;
    std::vector<std::optional<SimTrace>> results(seeds.size());
    std::vector<std::exception_ptr> errors(seeds.size());
    std::atomic<size_t> next{0};
    size_t workers = sc.sweep.threads ? sc.sweep.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, seeds.size());

    auto work = [&] {
        for (size_t i = next++; i < seeds.size(); i = next++) {
            try {
                SimConfig cfg = sc.sim;
                cfg.seed = seeds[i];
                results[i] = run(cfg);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    std::vector<SweepRun> out;
    for (size_t i = 0; i < seeds.size(); ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.push_back(SweepRun{seeds[i], std::move(*results[i])});
    }
    return out;
}

void write_sweep_summary(std::ostream& out, const std::vector<SweepRun>& runs)
{
    out << "seed,blocks_found,canonical_height,fork_won,fork_won_at,paid_mined,paid_accept,claims_rejected\n";
    for (const auto& r : runs) {
        const auto& t = r.trace;
        out << r.seed << ',' << t.blocks_found << ',' << t.tree.head_block().height() << ',' << (t.fork_won_at ? 1 : 0)
            << ',' << (t.fork_won_at ? fmt(*t.fork_won_at, 6) : std::string()) << ','
            << (t.contract ? t.contract->total_paid(ClaimRole::Mined) : TokenAmount{}).to_string() << ','
            << (t.contract ? t.contract->total_paid(ClaimRole::Accepted) : TokenAmount{}).to_string() << ','
            << t.claims_rejected << '\n';
    }
}

} // namespace bribesim
