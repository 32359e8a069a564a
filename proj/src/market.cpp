#include "mfgstop/market.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mfgstop/detail/merit_curves.hpp"
#include "mfgstop/error.hpp"
#include "mfgstop/kernels.hpp"

namespace mfgstop {

void DemandModel::validate(int horizon) const {
    const auto need = static_cast<std::size_t>(horizon) + 1;
    if (baseline.size() < need) {
        fail(ErrorCategory::config,
             fmt::format("demand: baseline has {} entries, need {}", baseline.size(), need));
    }
    if (seasonal.size() < need) {
        fail(ErrorCategory::config,
             fmt::format("demand: seasonal factors have {} entries, need {}", seasonal.size(), need));
    }
    for (double l : seasonal) {
        if (!(l > 0.0)) fail(ErrorCategory::config, "demand: seasonal factor must be positive");
    }
    if (!(peak_ratio >= 1.0)) fail(ErrorCategory::config, "demand: peak ratio below 1");
    if (!(peak_share > 0.0 && peak_share < 1.0)) {
        fail(ErrorCategory::config, "demand: peak share outside (0,1)");
    }
}

void SupplySpec::validate() const {
    if (!(conventional_capacity > 0.0 && renewable_capacity > 0.0 &&
          renewable_base_capacity > 0.0 && baseline_capacity > 0.0)) {
        fail(ErrorCategory::config, "supply: capacities must be positive");
    }
    if (!(p_max > 0.0)) fail(ErrorCategory::config, "supply: p_max must be positive");
    if (!(c_max > 0.0)) fail(ErrorCategory::config, "supply: c_max must be positive");
    if (!(emission_intensity >= 0.0)) {
        fail(ErrorCategory::config, "supply: emission intensity must be nonnegative");
    }
}

double utilization(double y, double c_max) { return detail::alpha_bar(y, c_max); }

double gain(double x, double c_max) { return detail::gain(x, c_max); }

DemandPair demand_peak_offpeak(const DemandModel& model, int t, double z, double z0) {
    const auto ti = static_cast<std::size_t>(t);
    const double d = model.baseline[ti] + model.beta * (z - z0);
    if (d < 0.0) fail(ErrorCategory::model, fmt::format("demand: negative demand {} at t={}", d, t));
    const double ld = model.seasonal[ti] * d;
    return {model.peak_factor() * ld, model.offpeak_factor() * ld};
}

double conventional_supply(const SupplySpec& spec, double z, std::span<const double> cost_grid,
                           std::span<const double> m, double p) {
    const double shift = p - spec.emission_intensity * z;
    return spec.conventional_capacity * kernels::utilization_dot(cost_grid, m, shift, spec.c_max) +
           spec.baseline_supply(p);
}

double renewable_supply(const SupplySpec& spec, std::span<const double> factor_grid,
                        std::span<const double> eta, std::span<const double> mbar) {
    return (spec.renewable_base_capacity + spec.renewable_capacity) *
               kernels::dot(factor_grid, eta) -
           spec.renewable_capacity * kernels::dot(factor_grid, mbar);
}

double clearing_price(const SupplySpec& spec, double z, double demand, double renewable,
                      std::span<const double> cost_grid, std::span<const double> m) {
    const double residual = std::max(demand - renewable, 0.0);
    if (residual == 0.0) return 0.0;
    auto supply = [&](double p) { return conventional_supply(spec, z, cost_grid, m, p); };

    // Below the cap, baseline supply alone covers the residual at hi (up to
    // rounding), so only the cap itself needs checking.
    const double cover = residual * spec.p_max / spec.baseline_capacity;
    double hi = spec.p_max;
    if (cover < spec.p_max) {
        hi = cover;
    } else if (supply(hi) < residual) {
        return spec.p_max;
    }
    double lo = 0.0;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (supply(mid) >= residual) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::string check_price_cap_assumption(const DemandModel& demand, const SupplySpec& supply,
                                       double z0, double z_max) {
    const double d_max = *std::max_element(demand.baseline.begin(), demand.baseline.end());
    const double l_max = *std::max_element(demand.seasonal.begin(), demand.seasonal.end());
    const double need = demand.peak_factor() * l_max * (d_max + demand.beta * (z_max - z0));
    const double have = supply.baseline_supply(supply.p_max);
    if (have >= need) return {};
    return fmt::format(
        "baseline supply at the price cap ({:.4g} GW) is below the largest peak demand "
        "({:.4g} GW); prices may saturate at p_max",
        have, need);
}

}  // namespace mfgstop
