// Copyright (c) 2026 The bribesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <bribesim/economics.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace bribesim::economics {

namespace {

void require_positive(double v, const char* name)
{
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be positive");
}

void require_share(double alpha, double beta)
{
    require_positive(alpha, "alpha");
    require_positive(beta, "beta");
    if (alpha > beta) throw std::invalid_argument("alpha cannot exceed the network hash rate");
}

std::string fmt(double v, int precision)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

constexpr std::array<CostCell, 15> PUBLISHED_COSTS{{
    {10'000, 1, 100'400}, {10'000, 3, 301'300}, {10'000, 6, 602'500},
    {20'000, 1, 102'200}, {20'000, 3, 306'600}, {20'000, 6, 613'300},
    {30'000, 1, 104'000}, {30'000, 3, 312'000}, {30'000, 6, 624'000},
    {40'000, 1, 105'800}, {40'000, 3, 317'300}, {40'000, 6, 634'700},
    {50'000, 1, 108'000}, {50'000, 3, 324'000}, {50'000, 6, 648'000},
}};

} // namespace

double calibrate_network_hash_rate(double alpha_mhs, double hourly_eth, double block_reward, double block_interval)
{
    require_positive(alpha_mhs, "alpha");
    require_positive(hourly_eth, "hourly reward");
    require_positive(block_reward, "block reward");
    require_positive(block_interval, "block interval");
    return alpha_mhs * block_reward * (SECONDS_PER_HOUR / block_interval) / hourly_eth;
}

double default_network_hash_rate(double block_reward, double block_interval)
{
    return calibrate_network_hash_rate(ANCHOR_ALPHA_MHS, ANCHOR_HOURLY_ETH, block_reward, block_interval);
}

Quantity<Eth> honest_hourly_reward(double alpha_mhs, double beta_mhs, double block_reward, double block_interval)
{
    require_share(alpha_mhs, beta_mhs);
    require_positive(block_reward, "block reward");
    require_positive(block_interval, "block interval");
    return {alpha_mhs / beta_mhs * block_reward * (SECONDS_PER_HOUR / block_interval)};
}

Quantity<TokenWorth> bribed_hourly_reward(double accept_bribe_per_hour, double alpha_mhs, double beta_mhs,
                                          double mining_bribe, double block_interval)
{
    require_share(alpha_mhs, beta_mhs);
    require_positive(mining_bribe, "mining bribe");
    require_positive(block_interval, "block interval");
    if (accept_bribe_per_hour < 0.0) throw std::invalid_argument("acceptance bribe cannot be negative");
    return {accept_bribe_per_hour + alpha_mhs / beta_mhs * mining_bribe * (SECONDS_PER_HOUR / block_interval)};
}

double blocks_in_window(double hours, double block_interval)
{
    require_positive(hours, "hours");
    require_positive(block_interval, "block interval");
    return hours * SECONDS_PER_HOUR / block_interval;
}

double accept_bribe_per_block(double accept_bribe_per_hour, double block_interval)
{
    require_positive(block_interval, "block interval");
    return accept_bribe_per_hour * block_interval / SECONDS_PER_HOUR;
}

Quantity<Usd> attack_cost(double n_bribees, double hours, const CostModel& model)
{
    if (n_bribees < 0.0) throw std::invalid_argument("bribee count cannot be negative");
    require_positive(hours, "hours");
    if (model.slope_usd_per_bribee_hour < 0.0 || model.intercept_usd_per_hour < 0.0) {
        throw std::invalid_argument("cost parameters cannot be negative");
    }
    return {hours * (model.intercept_usd_per_hour + model.slope_usd_per_bribee_hour * n_bribees)};
}

std::span<const CostCell> published_attack_costs() { return PUBLISHED_COSTS; }

CostCalibration calibrate_cost_params(std::span<const CostCell> table)
{
    std::set<double> distinct;
    for (const auto& c : table) {
        require_positive(c.hours, "hours");
        distinct.insert(c.n_bribees);
    }
    if (distinct.size() < 2) throw std::invalid_argument("cost table needs at least two distinct bribee counts");

    // Ordinary least squares on (n, usd per hour).
    const double m = static_cast<double>(table.size());
    double sx = 0, sy = 0;
    for (const auto& c : table) {
        sx += c.n_bribees;
        sy += c.usd / c.hours;
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (const auto& c : table) {
        sxx += (c.n_bribees - mx) * (c.n_bribees - mx);
        sxy += (c.n_bribees - mx) * (c.usd / c.hours - my);
    }
    CostCalibration out;
    out.model.slope_usd_per_bribee_hour = sxy / sxx;
    out.model.intercept_usd_per_hour = my - out.model.slope_usd_per_bribee_hour * mx;
    for (const auto& c : table) {
        const double fit = c.hours * (out.model.intercept_usd_per_hour + out.model.slope_usd_per_bribee_hour * c.n_bribees);
        out.max_relative_residual = std::max(out.max_relative_residual, std::abs(fit - c.usd) / std::abs(c.usd));
    }
    return out;
}

const CostCalibration& default_cost_calibration()
{
    static const CostCalibration calibration = calibrate_cost_params(published_attack_costs());
    return calibration;
}

std::vector<double> alpha_grid(double lo, double hi, double step)
{
    std::vector<double> out;
    if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
    for (long i = 0;; ++i) {
        const double a = lo + static_cast<double>(i) * step;
        if (a > hi + 1e-9 * step) break;
        out.push_back(a);
    }
    return out;
}

std::vector<HourlyRewardRow> sweep_hourly_rewards(std::span<const double> alphas, const SweepParams& p)
{
    std::vector<HourlyRewardRow> rows;
    rows.reserve(alphas.size());
    for (double a : alphas) {
        rows.push_back({a, honest_hourly_reward(a, p.network_hash_rate_mhs, p.block_reward, p.block_interval),
                        bribed_hourly_reward(p.accept_bribe_per_hour, a, p.network_hash_rate_mhs, p.mining_bribe,
                                             p.block_interval)});
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const HourlyRewardRow> rows)
{
    out << "alpha_mhs,theta_h_eth,gamma_tokenworth\n";
    for (const auto& r : rows) {
        out << fmt(r.alpha_mhs, 3) << ',' << fmt(r.honest.value, 12) << ',' << fmt(r.bribed.value, 12) << '\n';
    }
}

std::vector<CostCell> emit_table2(const CostModel& model)
{
    std::vector<CostCell> grid;
    for (double n : {10'000.0, 20'000.0, 30'000.0, 40'000.0, 50'000.0}) {
        for (double h : {1.0, 3.0, 6.0}) grid.push_back({n, h, attack_cost(n, h, model).value});
    }
    return grid;
}

void write_table2_csv(std::ostream& out, std::span<const CostCell> grid)
{
    std::map<double, std::map<double, double>> by_n;
    for (const auto& c : grid) by_n[c.n_bribees][c.hours] = c.usd;
    out << "n_bribees,usd_1h,usd_3h,usd_6h\n";
    for (const auto& [n, cols] : by_n) {
        out << fmt(n, 0);
        for (double h : {1.0, 3.0, 6.0}) {
            auto it = cols.find(h);
            out << ',' << (it == cols.end() ? std::string() : fmt(it->second, 2));
        }
        out << '\n';
    }
}

void write_cost_csv(std::ostream& out, std::span<const CostCell> cells)
{
    out << "n_bribees,hours,usd\n";
    for (const auto& c : cells) out << fmt(c.n_bribees, 0) << ',' << fmt(c.hours, 3) << ',' << fmt(c.usd, 2) << '\n';
}

} // namespace bribesim::economics
