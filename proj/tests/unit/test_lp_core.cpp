#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mfgstop/config.hpp"
#include "mfgstop/error.hpp"
#include "mfgstop/fictitious_play.hpp"
#include "mfgstop/lp_core.hpp"
#include "oracle_values.hpp"
#include "small_instance.hpp"

namespace {

using namespace mfgstop;
using mfgstop::testing::SmallInstance;

double relative(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

SmallInstance two_state_one_step() {
    SmallInstance inst;
    ScenarioSpec spec;
    spec.carbon_grid = {1.0};
    spec.z0 = 1.0;
    spec.scenarios = {"only"};
    spec.prior = {1.0};
    spec.stay_prob = {{}};
    spec.horizon = 1;
    inst.tree = build_tree(spec);
    inst.chain.grid = {0.0, 1.0};
    inst.chain.transition = {0.3, 0.7, 0.6, 0.4};
    inst.chain.initial = {0.25, 0.75};
    inst.tables.states = 2;
    inst.tables.f.assign(4, 0.0);
    inst.tables.g.assign(4, 0.0);
    return inst;
}

TEST(OccupationLP, OneStepTwoStateShape) {
    const auto inst = two_state_one_step();
    const auto prob = assemble_constraints(inst.chain, inst.tree);
    EXPECT_EQ(prob.lp.rows, 4U);
    EXPECT_EQ(prob.lp.cols, 6U);

    const auto occ = forward_occupation(immediate_stop_rule(inst.tree, 2), inst.chain, inst.tree);
    EXPECT_EQ(occ.mu[0], 0.25);
    EXPECT_EQ(occ.mu[1], 0.75);
    EXPECT_LE(row_residual(prob.lp, occupation_to_columns(prob, occ)), 1e-15);
}

TEST(OccupationLP, RowSumIsTheMassIdentity) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const auto inst = mfgstop::testing::random_instance(rng);
        const auto prob = assemble_constraints(inst.chain, inst.tree);
        std::vector<double> col(prob.lp.cols, 0.0);
        for (const auto& e : prob.lp.entries) col[e.col] += e.value;
        double rhs = 0.0;
        for (double r : prob.lp.rhs) rhs += r;
        EXPECT_NEAR(rhs, 1.0, 1e-15);
        for (const auto& node : inst.tree.nodes()) {
            for (std::size_t x = 0; x < prob.states; ++x) {
                const std::size_t k = node.id * prob.states + x;
                if (prob.m_col[k] >= 0) {
                    EXPECT_NEAR(col[static_cast<std::size_t>(prob.m_col[k])], 0.0, 1e-15);
                }
                EXPECT_NEAR(col[static_cast<std::size_t>(prob.mu_col[k])], node.prob, 1e-15);
            }
        }
    }
}

TEST(OccupationLP, ForwardOccupationsAreFeasible) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const auto inst = mfgstop::testing::random_instance(rng);
        const auto prob = assemble_constraints(inst.chain, inst.tree);
        const auto rule = mfgstop::testing::random_rule(rng, inst.tree, prob.states);
        const auto occ = forward_occupation(rule, inst.chain, inst.tree);
        EXPECT_LE(row_residual(prob.lp, occupation_to_columns(prob, occ)), 1e-12);
        EXPECT_LE(constraint_residual(occ, inst.chain, inst.tree), 1e-12);
        EXPECT_LE(flow_identity_error(occ, inst.tree), 1e-12);
        EXPECT_LE(total_mass_error(occ, inst.tree), 1e-12);
    }
}

TEST(OccupationLP, ConvexCombinationsStayFeasible) {
    std::mt19937_64 rng(23);
    const auto inst = mfgstop::testing::random_instance(rng);
    const std::size_t n = inst.chain.size();
    const auto a = forward_occupation(mfgstop::testing::random_rule(rng, inst.tree, n), inst.chain, inst.tree);
    const auto b = forward_occupation(mfgstop::testing::random_rule(rng, inst.tree, n), inst.chain, inst.tree);
    for (double w : {0.0, 0.1, 0.5, 0.93, 1.0}) {
        OccupationPair c(n, inst.tree.node_count());
        for (std::size_t k = 0; k < c.m.size(); ++k) {
            c.m[k] = w * a.m[k] + (1 - w) * b.m[k];
            c.mu[k] = w * a.mu[k] + (1 - w) * b.mu[k];
        }
        EXPECT_LE(constraint_residual(c, inst.chain, inst.tree), 1e-12);
    }
}

TEST(OccupationLP, NeverStopFollowsTheMarginalLaw) {
    const GameModel model = build_model(preset(2));
    const auto& chain = model.renewable;
    const auto occ = forward_occupation(never_stop_rule(model.tree, chain.size()), chain, model.tree);
    for (const auto& node : model.tree.nodes()) {
        const auto law = marginal_law(chain, node.time);
        const auto got = node.time == model.horizon() ? occ.mu_at(node.id) : occ.m_at(node.id);
        for (std::size_t x = 0; x < chain.size(); ++x) EXPECT_NEAR(got[x], law[x], 1e-14);
    }
}

TEST(OccupationLP, ClampRejectsLargeNegatives) {
    OccupationPair occ(2, 1);
    occ.mu = {-1e-13, 0.5};
    clamp_negatives(occ);
    EXPECT_EQ(occ.mu[0], 0.0);
    occ.mu[1] = -1e-6;
    EXPECT_THROW(clamp_negatives(occ), MfgError);
}

TEST(BestResponse, ImmediateStopWhenStoppingRewardDecreases) {
    std::mt19937_64 rng(8);
    auto inst = mfgstop::testing::random_instance(rng);
    std::fill(inst.tables.f.begin(), inst.tables.f.end(), 0.0);
    for (const auto& node : inst.tree.nodes()) {
        for (std::size_t x = 0; x < inst.tables.states; ++x) {
            inst.tables.g[node.id * inst.tables.states + x] = 5.0 - node.time;
        }
    }
    const auto dp = best_response_dp(inst.tables, inst.chain, inst.tree);
    EXPECT_DOUBLE_EQ(dp.value, 5.0);
    for (std::size_t x = 0; x < inst.tables.states; ++x) EXPECT_TRUE(dp.rule.stops(inst.tree.root().id, x));
}

TEST(BestResponse, NeverStopWhenRunningRewardIsPositive) {
    std::mt19937_64 rng(9);
    auto inst = mfgstop::testing::random_instance(rng);
    const double c = 0.25;
    for (const auto& node : inst.tree.nodes()) {
        for (std::size_t x = 0; x < inst.tables.states; ++x) {
            const std::size_t k = node.id * inst.tables.states + x;
            inst.tables.f[k] = node.time < inst.tree.horizon() ? c : 0.0;
            inst.tables.g[k] = 0.0;
        }
    }
    const auto dp = best_response_dp(inst.tables, inst.chain, inst.tree);
    EXPECT_NEAR(dp.value, c * inst.tree.horizon(), 1e-14);
    const auto occ = forward_occupation(dp.rule, inst.chain, inst.tree);
    EXPECT_NEAR(evaluate_gamma(inst.tables, occ, inst.tree), c * inst.tree.horizon(), 1e-14);
}

TEST(BestResponse, ZeroStoppingRewardDominatesLosses) {
    std::mt19937_64 rng(10);
    auto inst = mfgstop::testing::random_instance(rng);
    for (double& f : inst.tables.f) f = -std::abs(f);
    std::fill(inst.tables.g.begin(), inst.tables.g.end(), 0.0);
    const auto prob_dp = best_response_dp(inst.tables, inst.chain, inst.tree);
    EXPECT_EQ(prob_dp.value, 0.0);
    auto prob = assemble_constraints(inst.chain, inst.tree);
    EXPECT_NEAR(best_response_lp(prob, inst.tables, inst.tree, DenseSimplex()).value, 0.0, 1e-12);
}

TEST(BestResponse, GammaMatchesPolicyEvaluation) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const auto inst = mfgstop::testing::random_instance(rng);
        const auto rule = mfgstop::testing::random_rule(rng, inst.tree, inst.chain.size());
        const auto occ = forward_occupation(rule, inst.chain, inst.tree);
        EXPECT_NEAR(evaluate_gamma(inst.tables, occ, inst.tree),
                    mfgstop::testing::policy_value(inst, rule), 1e-13);
    }
}

TEST(BestResponse, ConstantRunningRewardCountsExpectedActiveTime) {
    std::mt19937_64 rng(13);
    auto inst = mfgstop::testing::random_instance(rng);
    const std::size_t n = inst.chain.size();
    std::fill(inst.tables.g.begin(), inst.tables.g.end(), 0.0);
    for (const auto& node : inst.tree.nodes()) {
        for (std::size_t x = 0; x < n; ++x) {
            inst.tables.f[node.id * n + x] = node.time < inst.tree.horizon() ? 1.0 : 0.0;
        }
    }
    const auto rule = mfgstop::testing::random_rule(rng, inst.tree, n);
    const auto occ = forward_occupation(rule, inst.chain, inst.tree);
    double active_time = 0.0;
    for (const auto& node : inst.tree.nodes()) {
        if (node.time == inst.tree.horizon()) continue;
        for (double m : occ.m_at(node.id)) active_time += node.prob * m;
    }
    EXPECT_NEAR(evaluate_gamma(inst.tables, occ, inst.tree), active_time, 1e-14);
    EXPECT_NEAR(mfgstop::testing::policy_value(inst, rule), active_time, 1e-14);
}

TEST(BestResponse, GammaIsLinear) {
    std::mt19937_64 rng(14);
    const auto inst = mfgstop::testing::random_instance(rng);
    const std::size_t n = inst.chain.size();
    const auto a = forward_occupation(mfgstop::testing::random_rule(rng, inst.tree, n), inst.chain, inst.tree);
    const auto b = forward_occupation(mfgstop::testing::random_rule(rng, inst.tree, n), inst.chain, inst.tree);
    OccupationPair c(n, inst.tree.node_count());
    for (std::size_t k = 0; k < c.m.size(); ++k) {
        c.m[k] = 0.5 * a.m[k] + 0.5 * b.m[k];
        c.mu[k] = 0.5 * a.mu[k] + 0.5 * b.mu[k];
    }
    EXPECT_NEAR(evaluate_gamma(inst.tables, c, inst.tree),
                0.5 * evaluate_gamma(inst.tables, a, inst.tree) + 0.5 * evaluate_gamma(inst.tables, b, inst.tree),
                1e-15);
}

TEST(BestResponse, DynamicProgrammingMatchesEnumerationAndBothLPs) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 15; ++trial) {
        const auto inst = mfgstop::testing::random_instance(rng, {3, 4, 14});
        const auto dp = best_response_dp(inst.tables, inst.chain, inst.tree);
        const double brute = mfgstop::testing::brute_force_value(inst);
        EXPECT_LE(relative(dp.value, brute), 1e-12);

        auto prob = assemble_constraints(inst.chain, inst.tree);
        const auto dense = best_response_lp(prob, inst.tables, inst.tree, DenseSimplex());
        const auto stair = best_response_lp(prob, inst.tables, inst.tree, StaircaseSimplex());
        EXPECT_LE(relative(dense.value, dp.value), 1e-10);
        EXPECT_LE(relative(stair.value, dp.value), 1e-10);
        EXPECT_LE(dense.residual, 1e-9);
        EXPECT_LE(stair.residual, 1e-9);
        EXPECT_LE(flow_identity_error(stair.occupation, inst.tree), 1e-9);
    }
}

TEST(BestResponse, TieBreakChangesRuleButNotValue) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        auto inst = mfgstop::testing::random_instance(rng);
        // Quantized rewards make exact ties common.
        for (double& f : inst.tables.f) f = std::round(f * 2.0) / 2.0;
        for (double& g : inst.tables.g) g = std::round(g * 2.0) / 2.0;
        for (std::size_t k = 0; k < inst.tables.f.size(); ++k) {
            if (k % 3 == 0) inst.tables.f[k] = 0.0;
        }
        const auto stop = best_response_dp(inst.tables, inst.chain, inst.tree, false);
        const auto cont = best_response_dp(inst.tables, inst.chain, inst.tree, true);
        EXPECT_EQ(stop.value, cont.value);
        EXPECT_EQ(stop.v, cont.v);
        const auto occ_s = forward_occupation(stop.rule, inst.chain, inst.tree);
        const auto occ_c = forward_occupation(cont.rule, inst.chain, inst.tree);
        EXPECT_NEAR(evaluate_gamma(inst.tables, occ_s, inst.tree), stop.value, 1e-12);
        EXPECT_NEAR(evaluate_gamma(inst.tables, occ_c, inst.tree), stop.value, 1e-12);
    }
}

TEST(BestResponse, OversizedProblemIsRefused) {
    const auto inst = two_state_one_step();
    EXPECT_THROW(assemble_constraints(inst.chain, inst.tree, 5), MfgError);
}

TEST(Rewards, StoppingRewardsAtTheEnds) {
    const GameModel model = build_model(preset(2));
    const auto& r = model.rewards;
    for (int t : {0, 17, 72}) EXPECT_EQ(conventional_stop_reward(r, t), 0.0);
    EXPECT_NEAR(renewable_stop_reward(r, 72, model.horizon_years()), 0.0, 1e-9);
    EXPECT_NEAR(renewable_stop_reward(r, 0, model.horizon_years()), oracle::renewable_g_t0, 1e-9);
}

TEST(Rewards, ConventionalRunningRewardAtZeroPrice) {
    const GameModel model = build_model(preset(2));
    std::vector<PricePair> prices(model.tree.node_count());
    const auto tab = build_reward_tables(model, prices, Population::conventional);
    const std::size_t node = model.tree.level(4)[0];
    for (std::size_t x = 0; x < tab.states; ++x) {
        EXPECT_NEAR(tab.f_at(node, x), oracle::conventional_f_zero_price_t4, 1e-12);
    }
    for (double g : tab.g) EXPECT_EQ(g, 0.0);
}

TEST(Rewards, ConventionalValueAtTheNeverStopProfileIsLocked) {
    // Regression value from the first verified run of the full instance.
    const GameModel model = build_model(preset(2));
    const auto profile = initial_profile(model, InitialProfile::never, 0);
    const auto prices = compute_prices(model, profile);
    const auto tab = build_reward_tables(model, prices, Population::conventional);
    const double v = best_response_dp(tab, model.conventional, model.tree).value;
    EXPECT_TRUE(std::isfinite(v));
    constexpr double locked = 35.923565838927416;
    EXPECT_NEAR(v, locked, 1e-9 * std::abs(locked));
}

TEST(Exploitability, ZeroAtABestResponseToAProfileIndependentGame) {
    std::mt19937_64 rng(41);
    const auto inst = mfgstop::testing::random_instance(rng);
    const auto dp = best_response_dp(inst.tables, inst.chain, inst.tree);
    const auto occ = forward_occupation(dp.rule, inst.chain, inst.tree);
    EXPECT_NEAR(dp.value - evaluate_gamma(inst.tables, occ, inst.tree), 0.0, 1e-12);
}

TEST(Exploitability, NonNegativeOnTheFullModel) {
    const GameModel model = build_model(preset(2));
    for (auto kind : {InitialProfile::never, InitialProfile::immediate, InitialProfile::uniform,
                      InitialProfile::random}) {
        const auto e = exploitability(model, initial_profile(model, kind, 5));
        EXPECT_GE(e.conventional, -1e-9);
        EXPECT_GE(e.renewable, -1e-9);
        EXPECT_GT(e.max(), 0.0);
    }
}

}  // namespace
