// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BRIBESIM_ECONOMICS_H
#define BRIBESIM_ECONOMICS_H

#include <bribesim/units.h>

#include <array>
#include <ostream>
#include <span>
#include <vector>

namespace bribesim::economics {

constexpr double SECONDS_PER_HOUR = 3600.0;

/** Anchor used to back-solve the default network hash rate: 400 MH/s earns 0.0014 ETH/h. */
constexpr double ANCHOR_ALPHA_MHS = 400.0;
constexpr double ANCHOR_HOURLY_ETH = 0.0014;

/** Network hash rate (MH/s) at which @p alpha_mhs earns @p hourly_eth per hour. */
double calibrate_network_hash_rate(double alpha_mhs, double hourly_eth, double block_reward, double block_interval);

/** 400 * R * (3600/phi) / 0.0014 MH/s; about 1.3714e8 for R = 2, phi = 15. */
double default_network_hash_rate(double block_reward = 2.0, double block_interval = 15.0);

/** theta_h = (alpha/beta) * R * 3600/phi. */
Quantity<Eth> honest_hourly_reward(double alpha_mhs, double beta_mhs, double block_reward, double block_interval);

/** Gamma = tau_h + (alpha/beta) * mu_m * 3600/phi. */
Quantity<TokenWorth> bribed_hourly_reward(double accept_bribe_per_hour, double alpha_mhs, double beta_mhs,
                                          double mining_bribe, double block_interval);

/** Expected block count in @p hours at mean interval @p block_interval seconds. */
double blocks_in_window(double hours, double block_interval);

/** Per-block acceptance bribe that pays tau_h per hour: tau_h * phi / 3600. */
double accept_bribe_per_block(double accept_bribe_per_hour, double block_interval);

/** Affine briber cost: hours * (intercept + slope * n_bribees). */
struct CostModel {
    double slope_usd_per_bribee_hour{0.0};
    double intercept_usd_per_hour{0.0};
};

Quantity<Usd> attack_cost(double n_bribees, double hours, const CostModel& model);

struct CostCell {
    double n_bribees;
    double hours;
    double usd;
};

/** The published attack-cost table: five bribee counts by 1, 3 and 6 hours. */
std::span<const CostCell> published_attack_costs();

struct CostCalibration {
    CostModel model;
    /** max |fit - cell| / cell over the calibration table. */
    double max_relative_residual{0.0};
};

/**
 * Least-squares fit of usd/hours = intercept + slope * n over every cell. Throws
 * std::invalid_argument when fewer than two distinct bribee counts are present.
 */
CostCalibration calibrate_cost_params(std::span<const CostCell> table);

/** Calibration of the published table; computed once. */
const CostCalibration& default_cost_calibration();

struct HourlyRewardRow {
    double alpha_mhs;
    Quantity<Eth> honest;
    Quantity<TokenWorth> bribed;
};

struct SweepParams {
    double network_hash_rate_mhs{default_network_hash_rate()};
    double block_reward{2.0};
    double block_interval{15.0};
    double accept_bribe_per_hour{0.002};
    double mining_bribe{3.0};
};

/** Evenly spaced grid [lo, hi] with the given step; empty when lo > hi. */
std::vector<double> alpha_grid(double lo, double hi, double step);

std::vector<HourlyRewardRow> sweep_hourly_rewards(std::span<const double> alphas, const SweepParams& params);

/** CSV: alpha_mhs,theta_h_eth,gamma_tokenworth. */
void write_sweep_csv(std::ostream& out, std::span<const HourlyRewardRow> rows);

/** Grid for n in {10k..50k} and T in {1,3,6} h, row-major by n. */
std::vector<CostCell> emit_table2(const CostModel& model);

/** CSV in the table's layout: n_bribees,usd_1h,usd_3h,usd_6h. */
void write_table2_csv(std::ostream& out, std::span<const CostCell> grid);

/** Long-form CSV: n_bribees,hours,usd. */
void write_cost_csv(std::ostream& out, std::span<const CostCell> cells);

} // namespace bribesim::economics

#endif // BRIBESIM_ECONOMICS_H
