// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <bribesim/economics.h>
#include <bribesim/scenario.h>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using namespace bribesim;

namespace {

enum ExitCode : int {
    EXIT_OK = 0,
    EXIT_PARSE = 2,
    EXIT_VALIDATION = 3,
    EXIT_INVARIANT = 4,
};

struct Options {
    std::string config;
    std::optional<std::string> out;
    std::optional<uint64_t> seed;
    bool quiet{false};
};

Scenario load(const Options& opt)
{
    Scenario sc = load_scenario(opt.config);
    if (opt.seed) {
        // A seed override also shifts a single-seed sweep so `sweep --seed` stays meaningful.
        if (sc.sweep.seeds.size() == 1 && sc.sweep.seeds.front() == sc.sim.seed) sc.sweep.seeds.front() = *opt.seed;
        sc.sim.seed = *opt.seed;
    }
    if (opt.out) sc.outputs = *opt.out;
    return sc;
}

int cmd_run(const Options& opt)
{
    const Scenario sc = load(opt);
    const SimTrace trace = run(sc.sim);
    write_run_outputs(sc, trace, sc.outputs);
    if (!opt.quiet) {
        std::cout << sc.name << ": " << trace.blocks_found << " blocks, canonical height "
                  << trace.tree.head_block().height();
        if (trace.contract) {
            const auto& report = trace.contract->report();
            std::cout << ", contract " << (report ? std::string(to_string(report->reason)) : "open");
        }
        std::cout << " -> " << sc.outputs.string() << '\n';
    }
    return EXIT_OK;
}

int cmd_sweep(const Options& opt)
{
    const Scenario sc = load(opt);
    const auto runs = run_sweep(sc);
    std::filesystem::create_directories(sc.outputs);
    for (const auto& r : runs) {
        write_run_outputs(sc, r.trace, sc.outputs / ("seed-" + std::to_string(r.seed)));
    }
    std::ofstream summary(sc.outputs / "sweep_summary.csv", std::ios::binary | std::ios::trunc);
    write_sweep_summary(summary, runs);
    if (!summary) throw std::runtime_error("failed writing sweep summary");
    if (!opt.quiet) std::cout << sc.name << ": " << runs.size() << " runs -> " << sc.outputs.string() << '\n';
    return EXIT_OK;
}

int cmd_table2(const Options& opt)
{
    const auto& cal = economics::default_cost_calibration();
    const auto grid = economics::emit_table2(cal.model);
    if (!opt.out) {
        economics::write_table2_csv(std::cout, grid);
        return EXIT_OK;
    }
    std::filesystem::create_directories(*opt.out);
    const auto path = std::filesystem::path(*opt.out) / "table2.csv";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    economics::write_table2_csv(out, grid);
    if (!out) throw std::runtime_error("failed writing " + path.string());
    if (!opt.quiet) std::cout << "table2 -> " << path.string() << '\n';
    return EXIT_OK;
}

int cmd_validate(const Options& opt)
{
    const Scenario sc = load(opt);
    if (!opt.quiet) std::cout << sc.name << ": ok\n";
    return EXIT_OK;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Discrete-event PoW simulator with uncle rewards and a cross-chain bribery contract"};
    app.require_subcommand(1);

    Options opt;
    app.add_flag("--quiet", opt.quiet, "Suppress progress output");

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config) sub->add_option("config", opt.config, "Scenario file (YAML)")->required();
        sub->add_option("--out", opt.out, "Override the output directory");
        sub->add_option("--seed", opt.seed, "Override the scenario seed");
        sub->add_flag("--quiet", opt.quiet, "Suppress progress output");
    };
    auto* run_cmd = app.add_subcommand("run", "Run one simulation and write reports");
    auto* sweep_cmd = app.add_subcommand("sweep", "Run the scenario for every sweep seed");
    auto* table2_cmd = app.add_subcommand("table2", "Print the calibrated attack-cost grid");
    auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a scenario");
    add_common(run_cmd, true);
    add_common(sweep_cmd, true);
    add_common(table2_cmd, false);
    add_common(validate_cmd, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? EXIT_OK : EXIT_PARSE;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(opt);
        if (sweep_cmd->parsed()) return cmd_sweep(opt);
        if (table2_cmd->parsed()) return cmd_table2(opt);
        return cmd_validate(opt);
    } catch (const ScenarioParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return EXIT_PARSE;
    } catch (const ConfigError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return EXIT_VALIDATION;
    } catch (const InvariantError& e) {
        std::cerr << "invariant breach: " << e.what() << '\n';
        return EXIT_INVARIANT;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
