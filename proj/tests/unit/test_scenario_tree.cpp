#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mfgstop/config.hpp"
#include "mfgstop/error.hpp"
#include "mfgstop/scenario_tree.hpp"
#include "oracle_values.hpp"

namespace {

using namespace mfgstop;

const ScenarioSpec& setting(int s) {
    static const ScenarioSpec one = preset(1).scenario;
    static const ScenarioSpec two = preset(2).scenario;
    return s == 1 ? one : two;
}

const CommonNoiseTree& tree_for(int s) {
    static const CommonNoiseTree one = build_tree(setting(1));
    static const CommonNoiseTree two = build_tree(setting(2));
    return s == 1 ? one : two;
}

TEST(ScenarioTree, SettingTwoHasSixtyFourEquallyLikelyLeaves) {
    const auto& tree = tree_for(2);
    const auto& leaves = tree.level(tree.horizon());
    ASSERT_EQ(leaves.size(), 64U);
    for (std::size_t id : leaves) EXPECT_NEAR(tree.node(id).prob, oracle::leaf_setting2, 1e-15);
}

TEST(ScenarioTree, NoAdjustmentDatesGivesASinglePath) {
    ScenarioSpec spec = setting(2);
    spec.adjustment_dates.clear();
    spec.stay_prob = {{}};
    const auto tree = build_tree(spec);
    for (int t = 0; t <= tree.horizon(); ++t) {
        ASSERT_EQ(tree.level(t).size(), 1U);
        EXPECT_EQ(tree.node(tree.level(t)[0]).prob, 1.0);
    }
}

TEST(ScenarioTree, SettingOneLowestPathProbability) {
    const auto& tree = tree_for(1);
    EXPECT_NEAR(tree.node(tree.min_leaf()).prob, oracle::omega_min_setting1, 1e-15);
}

TEST(ScenarioTree, ExtremeLeavesFollowTheExtremeLevels) {
    const auto& tree = tree_for(2);
    const auto& hi = tree.node(tree.max_leaf());
    const auto& lo = tree.node(tree.min_leaf());
    EXPECT_EQ(carbon_at(tree.root(), 0), 50.0);
    EXPECT_EQ(carbon_at(hi, tree.horizon()), 200.0);
    for (int s = 0; s <= tree.horizon(); ++s) EXPECT_EQ(carbon_at(lo, s), 50.0);
    const std::vector<double> levels{50, 75, 100, 125, 150, 175, 200};
    std::vector<double> seen;
    for (int t : {0, 10, 20, 30, 40, 50, 60}) seen.push_back(carbon_at(hi, t));
    EXPECT_EQ(seen, levels);
}

TEST(ScenarioTree, PathProbabilityExamples) {
    EXPECT_EQ(path_probability(setting(1), {50.0}), 1.0);

    std::vector<double> stay_once(11, 50.0);
    EXPECT_NEAR(path_probability(setting(1), stay_once), oracle::stay_once_setting1, 1e-15);

    const auto& tree = tree_for(2);
    const auto& leaf = tree.node(tree.level(tree.horizon())[17]);
    EXPECT_NEAR(path_probability(setting(2), leaf.path), oracle::leaf_setting2, 1e-15);
}

TEST(ScenarioTree, PosteriorAfterOneObservation) {
    EXPECT_EQ(posterior(setting(1), {50.0}), setting(1).prior);

    std::vector<double> stay(11, 50.0);
    EXPECT_NEAR(posterior(setting(1), stay)[0], 0.9, 1e-12);

    std::vector<double> jump(10, 50.0);
    jump.push_back(75.0);
    EXPECT_NEAR(posterior(setting(1), jump)[0], 0.1, 1e-12);
}

TEST(ScenarioTree, ZeroProbabilityPathIsAnError) {
    std::vector<double> bad{50.0, 75.0};
    try {
        posterior(setting(1), bad);
        FAIL() << "expected an error";
    } catch (const MfgError& e) {
        EXPECT_EQ(e.category(), ErrorCategory::model);
    }
}

class TreeInvariants : public ::testing::TestWithParam<int> {};

TEST_P(TreeInvariants, LevelProbabilitiesSumToOne) {
    const auto& tree = tree_for(GetParam());
    for (int t = 0; t <= tree.horizon(); ++t) {
        double total = 0.0;
        for (std::size_t id : tree.level(t)) total += tree.node(id).prob;
        EXPECT_NEAR(total, 1.0, 1e-12) << "t=" << t;
    }
}

TEST_P(TreeInvariants, ChildProbabilitiesAreConsistent) {
    const auto& tree = tree_for(GetParam());
    for (const auto& node : tree.nodes()) {
        double out = 0.0;
        for (const auto& c : node.children) {
            out += c.prob;
            EXPECT_NEAR(tree.node(c.node).prob, node.prob * c.prob, 1e-15);
            EXPECT_EQ(tree.node(c.node).parent, node.id);
        }
        if (!node.children.empty()) {
            EXPECT_NEAR(out, 1.0, 1e-12);
        }
    }
}

TEST_P(TreeInvariants, ChildKernelIsPosteriorWeighted) {
    const auto& tree = tree_for(GetParam());
    const auto& spec = tree.spec();
    for (const auto& node : tree.nodes()) {
        for (const auto& c : node.children) {
            const double next = tree.node(c.node).carbon();
            double expect = 0.0;
            for (std::size_t s = 0; s < spec.scenarios.size(); ++s) {
                expect += node.posterior[s] * spec.kernel(node.time + 1, s, node.carbon(), next);
            }
            EXPECT_NEAR(c.prob, expect, 1e-12);
        }
    }
}

TEST_P(TreeInvariants, PathProbabilityMatchesNodeProbability) {
    const auto& tree = tree_for(GetParam());
    for (const auto& node : tree.nodes()) {
        EXPECT_NEAR(path_probability(tree.spec(), node.path), node.prob, 1e-15);
    }
}

TEST_P(TreeInvariants, WordsAreUniquePerLevel) {
    const auto& tree = tree_for(GetParam());
    for (int t = 0; t <= tree.horizon(); ++t) {
        std::set<std::string> words;
        for (std::size_t id : tree.level(t)) words.insert(tree.node(id).word);
        EXPECT_EQ(words.size(), tree.level(t).size());
    }
}

INSTANTIATE_TEST_SUITE_P(BothSettings, TreeInvariants, ::testing::Values(1, 2));

TEST(ScenarioTree, SingleScenarioPosteriorIsDegenerate) {
    for (const auto& node : tree_for(2).nodes()) {
        ASSERT_EQ(node.posterior.size(), 1U);
        EXPECT_EQ(node.posterior[0], 1.0);
    }
}

TEST(ScenarioTree, BayesIdentitiesOnSettingOne) {
    const auto& tree = tree_for(1);
    const auto& spec = tree.spec();
    for (const auto& node : tree.nodes()) {
        double total = std::accumulate(node.joint.begin(), node.joint.end(), 0.0);
        EXPECT_NEAR(total, node.prob, 1e-12);
        double post = 0.0;
        for (std::size_t s = 0; s < spec.scenarios.size(); ++s) {
            EXPECT_NEAR(node.posterior[s], node.joint[s] / node.prob, 1e-12);
            post += node.posterior[s];
        }
        EXPECT_NEAR(post, 1.0, 1e-12);
        const auto direct = posterior(spec, node.path);
        for (std::size_t s = 0; s < direct.size(); ++s) EXPECT_NEAR(direct[s], node.posterior[s], 1e-12);
    }
}

TEST(ScenarioTree, SinglePathTreeHasOneNodePerTime) {
    const std::vector<double> path{50, 50, 75, 75};
    const auto tree = single_path_tree(path);
    EXPECT_EQ(tree.horizon(), 3);
    for (int t = 0; t <= 3; ++t) {
        ASSERT_EQ(tree.level(t).size(), 1U);
        EXPECT_EQ(tree.node(tree.level(t)[0]).carbon(), path[static_cast<std::size_t>(t)]);
    }
}

TEST(ScenarioTree, AncestorWalksUpTheTree) {
    const auto& tree = tree_for(2);
    const std::size_t leaf = tree.max_leaf();
    for (int s = 0; s <= tree.horizon(); ++s) {
        const auto& a = tree.node(tree.ancestor(leaf, s));
        EXPECT_EQ(a.time, s);
        EXPECT_EQ(a.carbon(), carbon_at(tree.node(leaf), s));
    }
}

TEST(ScenarioTree, SpecValidationRejectsBadInput) {
    ScenarioSpec spec = setting(1);
    spec.prior = {0.7, 0.7};
    EXPECT_THROW(spec.validate(), MfgError);
    spec = setting(1);
    spec.adjustment_dates.back() = spec.horizon;
    EXPECT_THROW(spec.validate(), MfgError);
    spec = setting(1);
    spec.z0 = 60.0;
    EXPECT_THROW(spec.validate(), MfgError);
}

TEST(ScenarioTree, SpecJsonRoundTrip) {
    const nlohmann::json j = setting(1);
    EXPECT_EQ(j.get<ScenarioSpec>(), setting(1));
}

}  // namespace
