#pragma once

#include <span>
#include <string>
#include <vector>

namespace mfgstop {

/// Demand D_t = d(t) + beta (z - z0), split into peak and off-peak blocks.
struct DemandModel {
    std::vector<double> baseline;  // d(t), GW, t = 0..T
    std::vector<double> seasonal;  // lambda_t, t = 0..T
    double beta = 0.0;             // GW per currency/tonCO2
    double peak_ratio = 1.0;       // r_d
    double peak_share = 65.0 / 168.0;  // c_p

    double offpeak_share() const { return 1.0 - peak_share; }
    double peak_factor() const { return peak_ratio / (peak_ratio * peak_share + offpeak_share()); }
    double offpeak_factor() const { return 1.0 / (peak_ratio * peak_share + offpeak_share()); }

    void validate(int horizon) const;
};

struct SupplySpec {
    double conventional_capacity = 0.0;     // I_C, GW
    double renewable_capacity = 0.0;        // I_R, GW (enterable)
    double renewable_base_capacity = 0.0;   // I_R^b, GW
    double baseline_capacity = 0.0;         // S^b(p_max), GW
    double p_max = 0.0;                     // currency/MWh
    double c_max = 0.0;                     // currency/MWh
    double emission_intensity = 0.0;        // beta-tilde, tonCO2/MWh

    double baseline_supply(double p) const { return baseline_capacity * p / p_max; }

    void validate() const;

    bool operator==(const SupplySpec&) const = default;
};

struct PricePair {
    double peak = 0.0;
    double offpeak = 0.0;

    bool operator==(const PricePair&) const = default;
};

struct DemandPair {
    double peak;
    double offpeak;
};

/// Fraction of capacity used at margin y (price minus unit cost).
double utilization(double y, double c_max);

/// Integral of utilization from 0 to x.
double gain(double x, double c_max);

DemandPair demand_peak_offpeak(const DemandModel& model, int t, double z, double z0);

/// I_C * sum_x utilization(p - x - beta_tilde z) m(x) + S^b(p).
double conventional_supply(const SupplySpec& spec, double z, std::span<const double> cost_grid,
                           std::span<const double> m, double p);

/// (I_R^b + I_R) E_eta[R] - I_R sum_x x mbar(x).
double renewable_supply(const SupplySpec& spec, std::span<const double> factor_grid,
                        std::span<const double> eta, std::span<const double> mbar);

/// Merit-order price: smallest p with conventional supply covering the
/// residual demand (d - renewable)^+, capped at p_max.
double clearing_price(const SupplySpec& spec, double z, double demand, double renewable,
                      std::span<const double> cost_grid, std::span<const double> m);

/// Warning text when baseline supply at p_max cannot cover the largest
/// demand; empty when the condition holds.
std::string check_price_cap_assumption(const DemandModel& demand, const SupplySpec& supply,
                                       double z0, double z_max);

}  // namespace mfgstop
