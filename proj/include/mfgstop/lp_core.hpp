#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mfgstop/lp_problem.hpp"
#include "mfgstop/market.hpp"
#include "mfgstop/occupation.hpp"
#include "mfgstop/scenario_tree.hpp"
#include "mfgstop/state_chains.hpp"

namespace mfgstop {

enum class Population { conventional, renewable };

const char* population_name(Population p);

struct RewardParams {
    double discount_rate = 0.0;  // rho, 1/yr
    double dt = 0.0;             // years per step
    double unit_factor = 1.0;    // currency/MWh of margin -> currency/kW/yr
    double conventional_fixed_cost = 0.0;   // kappa_C, currency/kW/yr
    double conventional_scrap_value = 0.0;  // K_C, currency/kW
    double conventional_depreciation = 0.0; // gamma_C, 1/yr
    double renewable_fixed_cost = 0.0;      // kappa_R, currency/kW/yr
    double renewable_investment = 0.0;      // K_R, currency/kW
    double renewable_depreciation = 0.0;    // gamma_R, 1/yr
};

// Everything the two stopping problems share: common noise, state chains,
// market primitives and reward constants.
struct GameModel {
    CommonNoiseTree tree;
    GridChain conventional;
    GridChain renewable;
    DemandModel demand;
    SupplySpec supply;
    RewardParams rewards;
    std::vector<std::vector<double>> renewable_law;  // law of R_t, t = 0..T

    const GridChain& chain(Population p) const {
        return p == Population::conventional ? conventional : renewable;
    }
    int horizon() const { return tree.horizon(); }
    double horizon_years() const { return horizon() * rewards.dt; }
};

/// Fills renewable_law from the renewable chain.
void attach_renewable_law(GameModel& model);

/// Peak/off-peak clearing prices for every non-leaf node under the profile.
std::vector<PricePair> compute_prices(const GameModel& model, const MeanFieldProfile& profile);

struct RewardTables {
    std::size_t states = 0;
    std::vector<double> f;  // [node * states + x], zero on leaves
    std::vector<double> g;  // [node * states + x]
    std::vector<PricePair> prices;

    double f_at(std::size_t node, std::size_t x) const { return f[node * states + x]; }
    double g_at(std::size_t node, std::size_t x) const { return g[node * states + x]; }
};

double conventional_stop_reward(const RewardParams& r, int t);
double renewable_stop_reward(const RewardParams& r, int t, double horizon_years);

RewardTables build_reward_tables(const GameModel& model, const std::vector<PricePair>& prices,
                                 Population population);

/// sum_u p(u) [f(u) . m(u) + g(u) . mu(u)].
double evaluate_gamma(const RewardTables& tables, const OccupationPair& occ,
                      const CommonNoiseTree& tree);

struct DPResult {
    double value = 0.0;
    StoppingRule rule;
    std::vector<double> v;  // [node * states + x]
};

/// Backward induction on (x, u). Ties go to stopping unless prefer_continue.
DPResult best_response_dp(const RewardTables& tables, const GridChain& chain,
                          const CommonNoiseTree& tree, bool prefer_continue = false);

// Equality-form LP over (m, mu) with one row per (node, x).
struct OccupationLP {
    LPProblem lp;
    std::size_t states = 0;
    std::vector<std::int64_t> m_col;   // [node * states + x] or -1 on leaves
    std::vector<std::int64_t> mu_col;  // [node * states + x]
};

OccupationLP assemble_constraints(const GridChain& chain, const CommonNoiseTree& tree,
                                  std::size_t max_variables = 10'000'000);

/// Objective coefficients p(u) f and p(u) g.
void set_objective(OccupationLP& problem, const RewardTables& tables, const CommonNoiseTree& tree);

std::vector<double> occupation_to_columns(const OccupationLP& problem, const OccupationPair& occ);
OccupationPair columns_to_occupation(const OccupationLP& problem, const std::vector<double>& x,
                                     std::size_t nodes);

struct LPResult {
    double value = 0.0;
    OccupationPair occupation;
    std::size_t iterations = 0;
    double residual = 0.0;
};

LPResult best_response_lp(OccupationLP& problem, const RewardTables& tables,
                          const CommonNoiseTree& tree, const LPSolver& solver);

struct Exploitability {
    double conventional = 0.0;
    double renewable = 0.0;
    double gamma_conventional = 0.0;
    double gamma_renewable = 0.0;
    double br_conventional = 0.0;
    double br_renewable = 0.0;

    double max() const { return conventional > renewable ? conventional : renewable; }
};

/// Best-response value (by DP) minus the value of the profile's own occupation.
Exploitability exploitability(const GameModel& model, const MeanFieldProfile& profile);

}  // namespace mfgstop
