// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BRIBESIM_SCENARIO_H
#define BRIBESIM_SCENARIO_H

#include <bribesim/simulation.h>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bribesim {

constexpr int SCENARIO_SCHEMA_VERSION = 1;

/** Malformed scenario text: syntax, unknown or missing keys, wrong value types. */
class ScenarioParseError : public std::runtime_error
{
public:
    ScenarioParseError(const std::string& source, int line, int column, const std::string& field, const std::string& message);

    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& field() const { return field_; }

private:
    int line_;
    int column_;
    std::string field_;
};

struct EconomicsSettings {
    double alpha_min{10.0};
    double alpha_max{400.0};
    double alpha_step{10.0};
    /** Defaults to the calibrated network hash rate. */
    std::optional<double> network_hash_rate;
};

struct SweepSettings {
    std::vector<uint64_t> seeds;
    /** 0 picks std::thread::hardware_concurrency(). */
    size_t threads{0};
};

struct Scenario {
    std::string name;
    SimConfig sim;
    std::filesystem::path outputs;
    EconomicsSettings economics;
    SweepSettings sweep;
};

/**
 * Parse a YAML scenario. Structural problems throw ScenarioParseError with the line,
 * column and field path; semantic constraint violations throw ConfigError.
 */
Scenario parse_scenario(std::string_view text, const std::string& source = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path);

/** Semantic checks beyond SimConfig validation (name, economics grid). Throws ConfigError. */
void validate(const Scenario& scenario);

/**
 * Write blocks.csv, events.csv, ledger.csv, contract_settlement.csv,
 * economics_sweep.csv and summary.txt into @p dir, creating it if needed.
 */
void write_run_outputs(const Scenario& scenario, const SimTrace& trace, const std::filesystem::path& dir);

void write_economics_sweep(const Scenario& scenario, std::ostream& out);

struct SweepRun {
    uint64_t seed;
    SimTrace trace;
};

/** Run the scenario once per sweep seed on worker threads; results are in seed-list order. */
std::vector<SweepRun> run_sweep(const Scenario& scenario);

/** seed,blocks_found,canonical_height,fork_won,fork_won_at,paid_mined,paid_accept,claims_rejected */
void write_sweep_summary(std::ostream& out, const std::vector<SweepRun>& runs);

} // namespace bribesim

#endif // BRIBESIM_SCENARIO_H
