#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mfgstop/fictitious_play.hpp"
#include "mfgstop/lp_core.hpp"
#include "mfgstop/scenario_tree.hpp"

namespace mfgstop {

struct ConventionalConfig {
    double cost_intercept = 33.4;  // long-run mean cost is this minus beta_tilde * z0
    double k = 0.5;
    double stdev = 11.0;
    double min = 0.0;
    double max = 70.0;

    bool operator==(const ConventionalConfig&) const = default;
};

struct RenewableConfig {
    double theta = 0.43;
    double k = 0.5;
    double stdev = 0.044;
    double min = 0.3;
    double max = 0.6;

    bool operator==(const RenewableConfig&) const = default;
};

struct DemandConfig {
    std::vector<double> baseline;  // d(t), GW, t = 0..T
    std::array<double, 4> quarterly{1.10, 0.93, 0.91, 1.06};
    double peak_ratio = 1.29;
    double beta = 0.015;
    double peak_share = 65.0 / 168.0;

    bool operator==(const DemandConfig&) const = default;
};

// Reward constants; discounting and the time step come from RunConfig.
struct RewardConfig {
    double unit_factor = 8.76;  // currency/MWh over a year of one kW -> currency/kW/yr
    double conventional_fixed_cost = 30.0;
    double conventional_scrap_value = 0.0;
    double conventional_depreciation = 0.0;
    double renewable_fixed_cost = 17.21;
    double renewable_investment = 1377.0;
    double renewable_depreciation = 0.069314718055994531;  // ln 2 / 10

    bool operator==(const RewardConfig&) const = default;
};

struct SolverConfig {
    int iterations = 200;
    std::string best_response = "dp";  // dp | lp
    std::string lp_solver = "staircase";
    int cross_check_every = 10;
    std::string init = "never";
    std::uint64_t seed = 0;
    bool early_exit = false;
    double early_exit_ratio = 1e-4;

    bool operator==(const SolverConfig&) const = default;
};

struct RunConfig {
    std::string name = "custom";
    double years = 18.0;  // T0
    int steps = 72;       // T
    double dt = 0.25;
    double discount_rate = 0.086;
    ScenarioSpec scenario;
    ConventionalConfig conventional;
    RenewableConfig renewable;
    DemandConfig demand;
    SupplySpec supply{35.9, 47.0, 35.6, 12.1, 150.0, 0.5, 0.429};
    RewardConfig rewards;
    SolverConfig solver;
    std::string output_dir = "out";

    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

/// Flat demand with mild linear growth; stands in for an external projection.
std::vector<double> placeholder_demand(int steps, double dt);

/// Reference parameters with the given scenario setting (1 or 2).
RunConfig preset(int setting);

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

RunConfig load_config(const std::string& path);
std::string dump_config(const RunConfig& c);

/// FNV-1a of the canonical JSON dump.
std::string config_hash(const RunConfig& c);

DiffusionParams conventional_params(const RunConfig& c);
DiffusionParams renewable_params(const RunConfig& c);
FPOptions fp_options(const RunConfig& c);

/// Builds tree, chains and market primitives. Records assumption warnings.
GameModel build_model(const RunConfig& c, std::vector<std::string>* warnings = nullptr);

/// Same model with the common noise replaced by a fixed carbon path.
GameModel build_model_on_path(const RunConfig& c, const std::vector<double>& path,
                              std::vector<std::string>* warnings = nullptr);

}  // namespace mfgstop
