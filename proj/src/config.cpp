#include "mfgstop/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mfgstop/error.hpp"

namespace mfgstop {

const char* category_name(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::config: return "config";
        case ErrorCategory::model: return "model";
        case ErrorCategory::solver: return "solver";
        case ErrorCategory::io: return "io";
    }
    return "unknown";
}

using nlohmann::json;

void RunConfig::validate() const {
    if (steps < 1) fail(ErrorCategory::config, "steps must be at least 1");
    if (!(dt > 0.0)) fail(ErrorCategory::config, "dt must be positive");
    if (std::abs(steps * dt - years) > 1e-12) {
        fail(ErrorCategory::config,
             fmt::format("steps * dt = {} differs from years = {}", steps * dt, years));
    }
    if (scenario.horizon != steps) {
        fail(ErrorCategory::config,
             fmt::format("scenario horizon {} differs from steps {}", scenario.horizon, steps));
    }
    scenario.validate();
    if (!(discount_rate >= 0.0)) fail(ErrorCategory::config, "discount rate must be nonnegative");
    if (demand.baseline.size() != static_cast<std::size_t>(steps) + 1) {
        fail(ErrorCategory::config, fmt::format("demand baseline needs {} entries, has {}",
                                                steps + 1, demand.baseline.size()));
    }
    supply.validate();
    if (!(rewards.unit_factor > 0.0)) fail(ErrorCategory::config, "unit factor must be positive");
    if (solver.iterations < 1) fail(ErrorCategory::config, "iterations must be at least 1");
    if (solver.best_response != "dp" && solver.best_response != "lp") {
        fail(ErrorCategory::config,
             fmt::format("best_response must be dp or lp, got '{}'", solver.best_response));
    }
    if (solver.cross_check_every < 0) fail(ErrorCategory::config, "cross_check_every must be >= 0");
    parse_initial_profile(solver.init);
}

std::vector<double> placeholder_demand(int steps, double dt) {
    std::vector<double> d(static_cast<std::size_t>(steps) + 1);
    for (int t = 0; t <= steps; ++t) d[static_cast<std::size_t>(t)] = 33.0 + 0.15 * t * dt;
    return d;
}

RunConfig preset(int setting) {
    RunConfig c;
    c.name = fmt::format("setting{}", setting);
    ScenarioSpec& s = c.scenario;
    s.carbon_grid = {50, 75, 100, 125, 150, 175, 200};
    s.z0 = 50;
    s.adjustment_dates = {10, 20, 30, 40, 50, 60};
    s.horizon = c.steps;
    if (setting == 1) {
        s.scenarios = {"low", "high"};
        s.prior = {0.5, 0.5};
        s.stay_prob = {std::vector<double>(6, 0.9), std::vector<double>(6, 0.1)};
    } else if (setting == 2) {
        s.scenarios = {"single"};
        s.prior = {1.0};
        s.stay_prob = {std::vector<double>(6, 0.5)};
    } else {
        fail(ErrorCategory::config, fmt::format("unknown setting {}", setting));
    }
    c.demand.baseline = placeholder_demand(c.steps, c.dt);
    return c;
}

void to_json(json& j, const RunConfig& c) {
    j = json{
        {"name", c.name},
        {"years", c.years},
        {"steps", c.steps},
        {"dt", c.dt},
        {"discount_rate", c.discount_rate},
        {"scenario", c.scenario},
        {"conventional",
         {{"cost_intercept", c.conventional.cost_intercept},
          {"k", c.conventional.k},
          {"std", c.conventional.stdev},
          {"min", c.conventional.min},
          {"max", c.conventional.max}}},
        {"renewable",
         {{"theta", c.renewable.theta},
          {"k", c.renewable.k},
          {"std", c.renewable.stdev},
          {"min", c.renewable.min},
          {"max", c.renewable.max}}},
        {"demand",
         {{"baseline", c.demand.baseline},
          {"quarterly", c.demand.quarterly},
          {"peak_ratio", c.demand.peak_ratio},
          {"beta", c.demand.beta},
          {"peak_share", c.demand.peak_share}}},
        {"supply",
         {{"conventional_capacity", c.supply.conventional_capacity},
          {"renewable_capacity", c.supply.renewable_capacity},
          {"renewable_base_capacity", c.supply.renewable_base_capacity},
          {"baseline_capacity", c.supply.baseline_capacity},
          {"p_max", c.supply.p_max},
          {"c_max", c.supply.c_max},
          {"emission_intensity", c.supply.emission_intensity}}},
        {"rewards",
         {{"unit_factor", c.rewards.unit_factor},
          {"conventional_fixed_cost", c.rewards.conventional_fixed_cost},
          {"conventional_scrap_value", c.rewards.conventional_scrap_value},
          {"conventional_depreciation", c.rewards.conventional_depreciation},
          {"renewable_fixed_cost", c.rewards.renewable_fixed_cost},
          {"renewable_investment", c.rewards.renewable_investment},
          {"renewable_depreciation", c.rewards.renewable_depreciation}}},
        {"solver",
         {{"iterations", c.solver.iterations},
          {"best_response", c.solver.best_response},
          {"lp_solver", c.solver.lp_solver},
          {"cross_check_every", c.solver.cross_check_every},
          {"init", c.solver.init},
          {"seed", c.solver.seed},
          {"early_exit", c.solver.early_exit},
          {"early_exit_ratio", c.solver.early_exit_ratio}}},
        {"output_dir", c.output_dir},
    };
}

namespace {

// Reads key into out when present, keeping the default otherwise.
template <typename T>
void opt(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) it->get_to(out);
}

}  // namespace

void from_json(const json& j, RunConfig& c) {
    opt(j, "name", c.name);
    opt(j, "years", c.years);
    opt(j, "steps", c.steps);
    opt(j, "dt", c.dt);
    opt(j, "discount_rate", c.discount_rate);
    j.at("scenario").get_to(c.scenario);
    if (auto it = j.find("conventional"); it != j.end()) {
        opt(*it, "cost_intercept", c.conventional.cost_intercept);
        opt(*it, "k", c.conventional.k);
        opt(*it, "std", c.conventional.stdev);
        opt(*it, "min", c.conventional.min);
        opt(*it, "max", c.conventional.max);
    }
    if (auto it = j.find("renewable"); it != j.end()) {
        opt(*it, "theta", c.renewable.theta);
        opt(*it, "k", c.renewable.k);
        opt(*it, "std", c.renewable.stdev);
        opt(*it, "min", c.renewable.min);
        opt(*it, "max", c.renewable.max);
    }
    if (auto it = j.find("demand"); it != j.end()) {
        opt(*it, "baseline", c.demand.baseline);
        opt(*it, "quarterly", c.demand.quarterly);
        opt(*it, "peak_ratio", c.demand.peak_ratio);
        opt(*it, "beta", c.demand.beta);
        opt(*it, "peak_share", c.demand.peak_share);
    }
    if (auto it = j.find("supply"); it != j.end()) {
        opt(*it, "conventional_capacity", c.supply.conventional_capacity);
        opt(*it, "renewable_capacity", c.supply.renewable_capacity);
        opt(*it, "renewable_base_capacity", c.supply.renewable_base_capacity);
        opt(*it, "baseline_capacity", c.supply.baseline_capacity);
        opt(*it, "p_max", c.supply.p_max);
        opt(*it, "c_max", c.supply.c_max);
        opt(*it, "emission_intensity", c.supply.emission_intensity);
    }
    if (auto it = j.find("rewards"); it != j.end()) {
        opt(*it, "unit_factor", c.rewards.unit_factor);
        opt(*it, "conventional_fixed_cost", c.rewards.conventional_fixed_cost);
        opt(*it, "conventional_scrap_value", c.rewards.conventional_scrap_value);
        opt(*it, "conventional_depreciation", c.rewards.conventional_depreciation);
        opt(*it, "renewable_fixed_cost", c.rewards.renewable_fixed_cost);
        opt(*it, "renewable_investment", c.rewards.renewable_investment);
        opt(*it, "renewable_depreciation", c.rewards.renewable_depreciation);
    }
    if (auto it = j.find("solver"); it != j.end()) {
        opt(*it, "iterations", c.solver.iterations);
        opt(*it, "best_response", c.solver.best_response);
        opt(*it, "lp_solver", c.solver.lp_solver);
        opt(*it, "cross_check_every", c.solver.cross_check_every);
        opt(*it, "init", c.solver.init);
        opt(*it, "seed", c.solver.seed);
        opt(*it, "early_exit", c.solver.early_exit);
        opt(*it, "early_exit_ratio", c.solver.early_exit_ratio);
    }
    opt(j, "output_dir", c.output_dir);
    if (c.demand.baseline.empty()) c.demand.baseline = placeholder_demand(c.steps, c.dt);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCategory::io, fmt::format("cannot open config '{}'", path));
    RunConfig c;
    try {
        c = json::parse(in).get<RunConfig>();
    } catch (const json::exception& e) {
        fail(ErrorCategory::config, fmt::format("config '{}': {}", path, e.what()));
    }
    c.validate();
    return c;
}

std::string dump_config(const RunConfig& c) { return json(c).dump(2) + "\n"; }

std::string config_hash(const RunConfig& c) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : json(c).dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

DiffusionParams conventional_params(const RunConfig& c) {
    DiffusionParams p;
    p.kind = DiffusionKind::cir;
    p.k = c.conventional.k;
    p.theta = c.conventional.cost_intercept - c.supply.emission_intensity * c.scenario.z0;
    p.delta = DiffusionParams::delta_from_std(p.kind, p.k, p.theta, c.conventional.stdev);
    p.min = c.conventional.min;
    p.max = c.conventional.max;
    p.dt = c.dt;
    return p;
}

DiffusionParams renewable_params(const RunConfig& c) {
    DiffusionParams p;
    p.kind = DiffusionKind::jacobi;
    p.k = c.renewable.k;
    p.theta = c.renewable.theta;
    p.delta = DiffusionParams::delta_from_std(p.kind, p.k, p.theta, c.renewable.stdev);
    p.min = c.renewable.min;
    p.max = c.renewable.max;
    p.dt = c.dt;
    return p;
}

FPOptions fp_options(const RunConfig& c) {
    FPOptions o;
    o.iterations = c.solver.iterations;
    o.use_lp = c.solver.best_response == "lp";
    o.lp_solver = c.solver.lp_solver;
    o.cross_check_every = c.solver.cross_check_every;
    o.init = parse_initial_profile(c.solver.init);
    o.seed = c.solver.seed;
    o.early_exit = c.solver.early_exit;
    o.early_exit_ratio = c.solver.early_exit_ratio;
    o.lp_work_dir = c.output_dir + "/lp";
    return o;
}

namespace {

GameModel assemble_model(const RunConfig& c, CommonNoiseTree tree,
                         std::vector<std::string>* warnings) {
    c.validate();
    GameModel m;
    m.tree = std::move(tree);
    m.conventional = build_chain(conventional_params(c));
    m.renewable = build_chain(renewable_params(c));
    m.demand.baseline = c.demand.baseline;
    m.demand.seasonal.resize(static_cast<std::size_t>(c.steps) + 1);
    for (int t = 0; t <= c.steps; ++t) {
        m.demand.seasonal[static_cast<std::size_t>(t)] = c.demand.quarterly[static_cast<std::size_t>(t % 4)];
    }
    m.demand.beta = c.demand.beta;
    m.demand.peak_ratio = c.demand.peak_ratio;
    m.demand.peak_share = c.demand.peak_share;
    m.demand.validate(c.steps);
    m.supply = c.supply;
    m.rewards.discount_rate = c.discount_rate;
    m.rewards.dt = c.dt;
    m.rewards.unit_factor = c.rewards.unit_factor;
    m.rewards.conventional_fixed_cost = c.rewards.conventional_fixed_cost;
    m.rewards.conventional_scrap_value = c.rewards.conventional_scrap_value;
    m.rewards.conventional_depreciation = c.rewards.conventional_depreciation;
    m.rewards.renewable_fixed_cost = c.rewards.renewable_fixed_cost;
    m.rewards.renewable_investment = c.rewards.renewable_investment;
    m.rewards.renewable_depreciation = c.rewards.renewable_depreciation;
    attach_renewable_law(m);
    if (warnings != nullptr) {
        const auto& grid = c.scenario.carbon_grid;
        auto w = check_price_cap_assumption(m.demand, m.supply, c.scenario.z0, grid.back());
        if (!w.empty()) warnings->push_back(std::move(w));
    }
    return m;
}

}  // namespace

GameModel build_model(const RunConfig& c, std::vector<std::string>* warnings) {
    return assemble_model(c, build_tree(c.scenario), warnings);
}

GameModel build_model_on_path(const RunConfig& c, const std::vector<double>& path,
                              std::vector<std::string>* warnings) {
    if (path.size() != static_cast<std::size_t>(c.steps) + 1) {
        fail(ErrorCategory::config,
             fmt::format("carbon path has {} entries, need {}", path.size(), c.steps + 1));
    }
    if (path.front() != c.scenario.z0) fail(ErrorCategory::config, "carbon path must start at z0");
    return assemble_model(c, single_path_tree(path), warnings);
}

}  // namespace mfgstop
