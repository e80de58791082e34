// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <bribesim/scenario.h>

#include <boost/test/unit_test.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace bribesim;
namespace fs = std::filesystem;

namespace {

const char* MINIMAL = R"(schema: 1
name: tiny
seed: 3
agents:
  - {strategy: honest, hash_power: 10}
)";

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("bribesim-test-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int cli(const std::string& args)
{
    const std::string cmd = std::string(BRIBESIM_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ScenarioParseError parse_error(const std::string& text)
{
    try {
        parse_scenario(text, "t.yaml");
    } catch (const ScenarioParseError& e) {
        return e;
    }
    BOOST_FAIL("expected a parse error");
    throw std::logic_error("unreachable");
}

} // namespace

BOOST_AUTO_TEST_SUITE(scenario_tests)

BOOST_AUTO_TEST_CASE(minimal_scenario_defaults)
{
    const auto sc = parse_scenario(MINIMAL);
    BOOST_CHECK_EQUAL(sc.name, "tiny");
    BOOST_CHECK_EQUAL(sc.sim.seed, 3u);
    BOOST_CHECK_EQUAL(sc.sim.block_interval, 15.0);
    BOOST_REQUIRE_EQUAL(sc.sim.agents.size(), 1u);
    BOOST_CHECK_EQUAL(sc.sim.agents[0].id, 0u);
    BOOST_CHECK(!sc.sim.contract);
    BOOST_CHECK_EQUAL(sc.outputs.string(), "out/tiny");
    BOOST_REQUIRE_EQUAL(sc.sweep.seeds.size(), 1u);
    BOOST_CHECK_EQUAL(sc.sweep.seeds[0], 3u);
}

BOOST_AUTO_TEST_CASE(full_scenario_fields)
{
    const auto sc = parse_scenario(R"(schema: 1
name: full
seed: 99
outputs: results/full
sim: {block_interval: 12, duration: 100, peer_degree: 8, network_hash_rate: 5000, contract_tick: 30,
      delay: {model: uniform, lo: 0.1, hi: 0.9}}
chain: {max_uncles: 1, uncle_window: 6, gas_limit: 1000}
economy: {block_reward: 3, nephew_divisor: 16, tx_fee: 0.1, accept_bribe_per_hour: 0.004,
          mining_bribe: 5, join_margin: 0.1, eth_to_token: 2}
selfish: {release_lead: 2}
agents:
  - {id: 10, strategy: rational, hash_power: 100, count: 3}
  - {strategy: selfish, hash_power: 50}
contract: {id: c1, creator_address: me, activation_time: 60, window: 600, fork_depth: 2,
           confirmation_depth: 5, deposit: 500}
economics: {alpha_min: 5, alpha_max: 50, alpha_step: 5, network_hash_rate: 10000}
sweep: {seeds: [1, 2], runs: 2, threads: 2}
)");
    BOOST_CHECK_EQUAL(sc.sim.block_interval, 12.0);
    BOOST_CHECK(std::holds_alternative<UniformDelay>(sc.sim.delay));
    BOOST_CHECK_EQUAL(sc.sim.chain.max_uncles, 1u);
    BOOST_CHECK_EQUAL(sc.sim.nephew_divisor, 16);
    BOOST_CHECK_EQUAL(sc.sim.selfish_release_lead, 2u);
    BOOST_REQUIRE_EQUAL(sc.sim.agents.size(), 4u);
    BOOST_CHECK_EQUAL(sc.sim.agents[2].id, 12u);
    BOOST_CHECK_EQUAL(sc.sim.agents[3].id, 3u);
    BOOST_REQUIRE(sc.sim.contract);
    BOOST_CHECK_EQUAL(sc.sim.contract->confirmation_depth, 5u);
    BOOST_CHECK_EQUAL(sc.economics.alpha_step, 5.0);
    const std::vector<uint64_t> seeds{1, 2, 99, 100};
    BOOST_CHECK(sc.sweep.seeds == seeds);
    BOOST_CHECK_EQUAL(sc.sweep.threads, 2u);
}

BOOST_AUTO_TEST_CASE(parse_error_diagnostics)
{
    {
        const auto e = parse_error("schema: 1\nname: x\nseed: 1\nagents: []\nbogus: 2\n");
        BOOST_CHECK_EQUAL(e.line(), 5);
        BOOST_CHECK_EQUAL(e.field(), "bogus");
    }
    {
        const auto e = parse_error("schema: 1\nname: x\nagents:\n  - {strategy: honest, hash_power: 1}\n");
        BOOST_CHECK_EQUAL(e.field(), "seed");
    }
    {
        const auto e = parse_error("schema: 1\nname: x\nseed: 1\nsim:\n  duration: soon\nagents: []\n");
        BOOST_CHECK_EQUAL(e.line(), 5);
        BOOST_CHECK_EQUAL(e.column(), 13);
        BOOST_CHECK_EQUAL(e.field(), "sim.duration");
        BOOST_CHECK_NE(std::string(e.what()).find("t.yaml:5:13"), std::string::npos);
    }
    {
        const auto e = parse_error("schema: 2\nname: x\nseed: 1\nagents: []\n");
        BOOST_CHECK_EQUAL(e.field(), "schema");
    }
    {
        const auto e = parse_error("schema: 1\nname: x\nseed: 1\nagents:\n  - {strategy: lazy, hash_power: 1}\n");
        BOOST_CHECK_EQUAL(e.field(), "agents[0].strategy");
    }
    {
        const auto e = parse_error("schema: 1\nname: [x\n");
        BOOST_CHECK_EQUAL(e.line(), 3);
    }
    {
        const auto e = parse_error("schema: 1\nname: x\nseed: -4\nagents: []\n");
        BOOST_CHECK_EQUAL(e.field(), "seed");
    }
}

BOOST_AUTO_TEST_CASE(semantic_errors_are_config_errors)
{
    BOOST_CHECK_THROW(parse_scenario("schema: 1\nname: ../x\nseed: 1\nagents:\n  - {strategy: honest, hash_power: 1}\n"),
                      ConfigError);
    BOOST_CHECK_THROW(parse_scenario("schema: 1\nname: x\nseed: 1\nagents: []\n"), ConfigError);
    BOOST_CHECK_THROW(parse_scenario("schema: 1\nname: x\nseed: 1\nagents:\n  - {strategy: honest, hash_power: -1}\n"),
                      ConfigError);
}

BOOST_AUTO_TEST_CASE(bundled_scenarios_validate)
{
    for (const auto& entry : fs::directory_iterator(SCENARIO_DIR)) {
        if (entry.path().extension() != ".yaml") continue;
        BOOST_TEST_CONTEXT(entry.path().filename().string())
        {
            const auto sc = load_scenario(entry.path());
            BOOST_CHECK_EQUAL(sc.name, entry.path().stem().string());
        }
    }
}

BOOST_AUTO_TEST_CASE(bribery_six_hour_block_count)
{
    const auto sc = load_scenario(fs::path(SCENARIO_DIR) / "bribery-6h.yaml");
    BOOST_CHECK_EQUAL(sc.sim.accept_bribe_per_hour, 0.002);
    BOOST_CHECK_EQUAL(sc.sim.mining_bribe, 3.0);
    BOOST_CHECK_EQUAL(sc.sim.duration, 6 * 3600.0);
    const auto t = run(sc.sim);
    BOOST_CHECK_LE(std::abs(static_cast<double>(t.blocks_found) - 1440.0), 3.0 * std::sqrt(1440.0));
    for (const auto& a : t.agents) {
        if (a.spec.strategy == Strategy::Rational) BOOST_CHECK(a.joined_bribery);
    }
}

BOOST_AUTO_TEST_CASE(run_outputs_and_sweep_order)
{
    auto sc = parse_scenario(MINIMAL);
    sc.sim.duration = 600;
    sc.sweep.seeds = {5, 1, 3};
    sc.sweep.threads = 3;
    const auto dir = scratch("outputs");
    write_run_outputs(sc, run(sc.sim), dir);
    for (const char* f : {"blocks.csv", "events.csv", "ledger.csv", "contract_settlement.csv", "economics_sweep.csv", "summary.txt"}) {
        BOOST_CHECK(fs::exists(dir / f));
    }
    BOOST_CHECK(slurp(dir / "economics_sweep.csv").starts_with("alpha_mhs,theta_h_eth,gamma_tokenworth\n"));

    const auto runs = run_sweep(sc);
    BOOST_REQUIRE_EQUAL(runs.size(), 3u);
    BOOST_CHECK_EQUAL(runs[0].seed, 5u);
    BOOST_CHECK_EQUAL(runs[2].seed, 3u);
    SimConfig c = sc.sim;
    c.seed = 1;
    BOOST_CHECK_EQUAL(runs[1].trace.blocks_found, run(c).blocks_found);
    std::ostringstream summary;
    write_sweep_summary(summary, runs);
    const std::string text = summary.str();
    BOOST_CHECK_EQUAL(std::count(text.begin(), text.end(), '\n'), 4);
}

BOOST_AUTO_TEST_CASE(cli_exit_codes)
{
    const auto dir = scratch("cli");
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream(dir / name) << text;
        return (dir / name).string();
    };
    const auto good = write("good.yaml", MINIMAL);
    const auto bad_syntax = write("bad.yaml", "schema: 1\nname: [oops\n");
    const auto bad_value = write("invalid.yaml", "schema: 1\nname: x\nseed: 1\nsim: {block_interval: 0}\n"
                                                 "agents:\n  - {strategy: honest, hash_power: 1}\n");

    BOOST_CHECK_EQUAL(cli("validate " + good), 0);
    BOOST_CHECK_EQUAL(cli("validate " + bad_syntax), 2);
    BOOST_CHECK_EQUAL(cli("run " + bad_syntax), 2);
    BOOST_CHECK_EQUAL(cli("validate " + bad_value), 3);
    BOOST_CHECK_EQUAL(cli("validate " + (dir / "missing.yaml").string()), 2);
    BOOST_CHECK_EQUAL(cli("frobnicate"), 2);
    BOOST_CHECK_EQUAL(cli("run " + good + " --quiet --out " + (dir / "run").string()), 0);
    BOOST_CHECK(fs::exists(dir / "run" / "ledger.csv"));
    BOOST_CHECK_EQUAL(cli("table2 --out " + (dir / "t2").string()), 0);
    BOOST_CHECK(slurp(dir / "t2" / "table2.csv").starts_with("n_bribees,usd_1h,usd_3h,usd_6h\n"));
    BOOST_CHECK_EQUAL(cli("sweep " + good + " --quiet --seed 8 --out " + (dir / "sw").string()), 0);
    BOOST_CHECK(fs::exists(dir / "sw" / "seed-8" / "blocks.csv"));
    BOOST_CHECK(fs::exists(dir / "sw" / "sweep_summary.csv"));
}

BOOST_AUTO_TEST_CASE(cli_outputs_are_byte_identical)
{
    const auto dir = scratch("determinism");
    const auto cfg = (fs::path(SCENARIO_DIR) / "bribery-6h.yaml").string();
    BOOST_REQUIRE_EQUAL(cli("run " + cfg + " --quiet --out " + (dir / "a").string()), 0);
    BOOST_REQUIRE_EQUAL(cli("run " + cfg + " --quiet --out " + (dir / "b").string()), 0);
    for (const char* f : {"blocks.csv", "events.csv", "ledger.csv", "contract_settlement.csv", "economics_sweep.csv", "summary.txt"}) {
        BOOST_CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    }
}

BOOST_AUTO_TEST_SUITE_END()
