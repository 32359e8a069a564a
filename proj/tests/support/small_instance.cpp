#include "small_instance.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mfgstop::testing {

namespace {

ScenarioSpec random_spec(std::mt19937_64& rng, int horizon) {
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    ScenarioSpec spec;
    spec.horizon = horizon;
    spec.carbon_grid = {10.0, 20.0, 30.0};
    spec.z0 = 10.0;

    std::vector<int> candidates(static_cast<std::size_t>(std::max(horizon - 1, 0)));
    std::iota(candidates.begin(), candidates.end(), 1);
    std::shuffle(candidates.begin(), candidates.end(), rng);
    const auto dates = std::min<std::size_t>(candidates.size(), 1 + rng() % 2);
    spec.adjustment_dates.assign(candidates.begin(), candidates.begin() + static_cast<long>(dates));
    std::sort(spec.adjustment_dates.begin(), spec.adjustment_dates.end());

    const std::size_t scenarios = 1 + rng() % 2;
    for (std::size_t s = 0; s < scenarios; ++s) {
        spec.scenarios.push_back(s == 0 ? "a" : "b");
        std::vector<double> row;
        for (std::size_t j = 0; j < dates; ++j) row.push_back(unit(rng));
        spec.stay_prob.push_back(row);
    }
    if (scenarios == 1) {
        spec.prior = {1.0};
    } else {
        const double p = unit(rng);
        spec.prior = {p, 1.0 - p};
    }
    return spec;
}

GridChain random_chain(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    GridChain c;
    c.grid.resize(n);
    std::iota(c.grid.begin(), c.grid.end(), 0.0);
    c.transition.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            // Keep the diagonal positive so every row has mass.
            const double w = (i == j || unit(rng) > 0.3) ? unit(rng) + 0.05 : 0.0;
            c.transition[i * n + j] = w;
            total += w;
        }
        for (std::size_t j = 0; j < n; ++j) c.transition[i * n + j] /= total;
    }
    c.initial.resize(n);
    double total = 0.0;
    for (double& w : c.initial) total += (w = unit(rng) + 0.05);
    for (double& w : c.initial) w /= total;
    return c;
}

}  // namespace

std::size_t rule_bits(const CommonNoiseTree& tree, std::size_t states) {
    return (tree.node_count() - tree.level(tree.horizon()).size()) * states;
}

SmallInstance random_instance(std::mt19937_64& rng, const SmallInstanceLimits& limits) {
    std::uniform_real_distribution<double> reward(-1.0, 1.0);
    SmallInstance inst;
    do {
        const int horizon =
            limits.max_horizon < 2 ? 1 : 2 + static_cast<int>(rng() % static_cast<unsigned>(limits.max_horizon - 1));
        inst.tree = build_tree(random_spec(rng, horizon));
    } while (rule_bits(inst.tree, limits.states) > limits.max_rule_bits);

    inst.chain = random_chain(rng, limits.states);
    const std::size_t n = limits.states;
    inst.tables.states = n;
    inst.tables.f.assign(inst.tree.node_count() * n, 0.0);
    inst.tables.g.assign(inst.tree.node_count() * n, 0.0);
    for (const auto& node : inst.tree.nodes()) {
        for (std::size_t x = 0; x < n; ++x) {
            inst.tables.g[node.id * n + x] = reward(rng);
            if (node.time < inst.tree.horizon()) inst.tables.f[node.id * n + x] = reward(rng);
        }
    }
    return inst;
}

StoppingRule random_rule(std::mt19937_64& rng, const CommonNoiseTree& tree, std::size_t states) {
    StoppingRule rule{states, std::vector<std::uint8_t>(tree.node_count() * states, 1)};
    for (const auto& node : tree.nodes()) {
        if (node.time == tree.horizon()) continue;
        for (std::size_t x = 0; x < states; ++x) rule.stop[node.id * states + x] = rng() & 1U;
    }
    return rule;
}

double policy_value(const SmallInstance& inst, const StoppingRule& rule) {
    const auto& tree = inst.tree;
    const auto& P = inst.chain.transition;
    const std::size_t n = inst.chain.size();
    std::vector<double> v(tree.node_count() * n, 0.0);
    for (int t = tree.horizon(); t >= 0; --t) {
        for (std::size_t id : tree.level(t)) {
            for (std::size_t x = 0; x < n; ++x) {
                const std::size_t k = id * n + x;
                if (t == tree.horizon() || rule.stop[k]) {
                    v[k] = inst.tables.g[k];
                    continue;
                }
                double next = 0.0;
                for (const auto& c : tree.node(id).children) {
                    for (std::size_t y = 0; y < n; ++y) next += c.prob * P[x * n + y] * v[c.node * n + y];
                }
                v[k] = inst.tables.f[k] + next;
            }
        }
    }
    double value = 0.0;
    for (std::size_t x = 0; x < n; ++x) value += inst.chain.initial[x] * v[tree.root().id * n + x];
    return value;
}

double brute_force_value(const SmallInstance& inst) {
    const auto& tree = inst.tree;
    const std::size_t n = inst.chain.size();
    std::vector<std::size_t> slots;
    for (const auto& node : tree.nodes()) {
        if (node.time == tree.horizon()) continue;
        for (std::size_t x = 0; x < n; ++x) slots.push_back(node.id * n + x);
    }
    if (slots.size() > 24) throw std::invalid_argument("brute force: instance too large");

    StoppingRule rule{n, std::vector<std::uint8_t>(tree.node_count() * n, 1)};
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
        for (std::size_t b = 0; b < slots.size(); ++b) rule.stop[slots[b]] = (mask >> b) & 1U;
        best = std::max(best, policy_value(inst, rule));
    }
    return best;
}

RunConfig reduced_config(int setting) {
    RunConfig c = preset(setting);
    c.name = "reduced";
    c.steps = 24;
    c.years = c.steps * c.dt;
    c.scenario.horizon = c.steps;
    c.scenario.adjustment_dates = {6, 12, 18};
    for (auto& row : c.scenario.stay_prob) row.resize(3);
    c.scenario.carbon_grid.resize(4);
    c.demand.baseline = placeholder_demand(c.steps, c.dt);
    return c;
}

}  // namespace mfgstop::testing
