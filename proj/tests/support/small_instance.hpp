#pragma once

#include <cstddef>
#include <random>

#include "mfgstop/config.hpp"
#include "mfgstop/lp_core.hpp"

namespace mfgstop::testing {

// A stopping problem small enough to enumerate every pure Markovian rule.
struct SmallInstance {
    CommonNoiseTree tree;
    GridChain chain;
    RewardTables tables;
};

struct SmallInstanceLimits {
    std::size_t states = 3;
    int max_horizon = 4;
    std::size_t max_rule_bits = 18;  // non-leaf (node, state) pairs
};

/// Random tree (T >= 2 when allowed, one or two scenarios, one or two
/// adjustment dates), random
/// stochastic matrix with some zero entries, rewards uniform in [-1, 1].
SmallInstance random_instance(std::mt19937_64& rng, const SmallInstanceLimits& limits = {});

/// Rule with independent fair coin flips on non-leaf pairs.
StoppingRule random_rule(std::mt19937_64& rng, const CommonNoiseTree& tree, std::size_t states);

/// Value of a fixed rule by backward policy evaluation on (node, state).
double policy_value(const SmallInstance& inst, const StoppingRule& rule);

/// max over all 2^(non-leaf pairs) pure rules of policy_value.
double brute_force_value(const SmallInstance& inst);

/// Number of non-leaf (node, state) pairs.
std::size_t rule_bits(const CommonNoiseTree& tree, std::size_t states);

/// Preset parameters on a six-year horizon with three adjustment dates.
RunConfig reduced_config(int setting);

}  // namespace mfgstop::testing
