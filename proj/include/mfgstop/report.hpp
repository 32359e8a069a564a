#pragma once

#include <string>
#include <vector>

#include "mfgstop/config.hpp"
#include "mfgstop/fictitious_play.hpp"
#include "mfgstop/lp_core.hpp"

namespace mfgstop {

struct NodeCapacity {
    double conventional_gw = 0.0;
    double renewable_gw = 0.0;
};

struct CurvePoint {
    double conventional_gw = 0.0;
    double renewable_gw = 0.0;
    double peak = 0.0;
    double offpeak = 0.0;
};

struct Curves {
    std::vector<CurvePoint> expectation;  // t = 0..T-1
    std::vector<CurvePoint> along_min;    // conditional on the lowest carbon path
    std::vector<CurvePoint> along_max;    // conditional on the highest carbon path
};

struct RunReport {
    RunConfig config;
    CommonNoiseTree tree;
    MeanFieldProfile equilibrium;
    std::vector<PricePair> prices;          // per node, t < T
    std::vector<NodeCapacity> capacities;   // per node, t < T
    Curves curves;
    FPState fp;
    std::vector<std::string> warnings;
    std::string kernels;
    double seconds_build = 0.0;
    double seconds_solve = 0.0;
};

/// Installed capacities I_C |m(u)| and I_R^b + I_R (1 - |mbar(u)|) per node.
std::vector<NodeCapacity> installed_capacities(const GameModel& model,
                                               const MeanFieldProfile& profile);

Curves build_curves(const CommonNoiseTree& tree, const std::vector<NodeCapacity>& caps,
                    const std::vector<PricePair>& prices);

/// "min", "max", "min+max" when the node lies on the extreme carbon paths.
std::string leaf_tag(const CommonNoiseTree& tree, std::size_t node);

RunReport run_experiment(const RunConfig& config, const FPProgress& progress = {});

/// Same pipeline with the carbon price fixed to path with probability one.
RunReport deterministic_baseline(const RunConfig& config, const std::vector<double>& path,
                                 const FPProgress& progress = {});

/// The all-stay / all-jump carbon paths of the scenario tree.
std::vector<double> lowest_carbon_path(const RunConfig& config);
std::vector<double> highest_carbon_path(const RunConfig& config);

/// Reads one carbon level per line (or comma/whitespace separated).
std::vector<double> read_carbon_path(const std::string& path);

/// Writes capacities.csv, prices.csv, exploitability.csv, curves.csv,
/// config.json and metadata.json into dir.
void emit(const RunReport& report, const std::string& dir);

}  // namespace mfgstop
