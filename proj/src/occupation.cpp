#include "mfgstop/occupation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "mfgstop/error.hpp"
#include "mfgstop/kernels.hpp"

namespace mfgstop {

namespace {

StoppingRule uniform_rule(const CommonNoiseTree& tree, std::size_t states, bool stop_all) {
    StoppingRule rule{states, std::vector<std::uint8_t>(tree.node_count() * states, 0)};
    const int T = tree.horizon();
    for (const auto& n : tree.nodes()) {
        if (stop_all || n.time == T) {
            std::fill_n(rule.stop.begin() + static_cast<std::ptrdiff_t>(n.id * states), states, 1);
        }
    }
    return rule;
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

StoppingRule never_stop_rule(const CommonNoiseTree& tree, std::size_t states) {
    return uniform_rule(tree, states, false);
}

StoppingRule immediate_stop_rule(const CommonNoiseTree& tree, std::size_t states) {
    return uniform_rule(tree, states, true);
}

OccupationPair forward_occupation(const StoppingRule& rule, const GridChain& chain,
                                  const CommonNoiseTree& tree) {
    const std::size_t n = chain.size();
    if (rule.states != n || rule.stop.size() != n * tree.node_count()) {
        fail(ErrorCategory::model, "forward_occupation: rule does not match chain and tree");
    }
    const int T = tree.horizon();
    OccupationPair occ(n, tree.node_count());
    // Active law entering each node, before the stopping decision.
    std::vector<double> incoming(n * tree.node_count(), 0.0);
    std::copy(chain.initial.begin(), chain.initial.end(),
              incoming.begin() + static_cast<std::ptrdiff_t>(tree.root().id * n));
    std::vector<double> pushed(n);

    for (int t = 0; t <= T; ++t) {
        for (std::size_t id : tree.level(t)) {
            const double* in = incoming.data() + id * n;
            auto m = occ.m_at(id);
            auto mu = occ.mu_at(id);
            for (std::size_t x = 0; x < n; ++x) {
                if (t == T || rule.stops(id, x)) {
                    mu[x] = in[x];
                } else {
                    m[x] = in[x];
                }
            }
            if (t == T) continue;
            kernels::vecmat(m, chain.transition, pushed);
            for (const auto& c : tree.node(id).children) {
                std::copy(pushed.begin(), pushed.end(),
                          incoming.begin() + static_cast<std::ptrdiff_t>(c.node * n));
            }
        }
    }
    return occ;
}

double flow_identity_error(const OccupationPair& occ, const CommonNoiseTree& tree) {
    std::vector<double> stopped(tree.node_count(), 0.0);
    double worst = 0.0;
    for (int t = 0; t <= tree.horizon(); ++t) {
        for (std::size_t id : tree.level(t)) {
            const auto& node = tree.node(id);
            const double before = t == 0 ? 0.0 : stopped[node.parent];
            stopped[id] = before + sum(occ.mu_at(id));
            const double active = t == tree.horizon() ? 0.0 : sum(occ.m_at(id));
            worst = std::max(worst, std::abs(1.0 - active - stopped[id]));
        }
    }
    return worst;
}

double total_mass_error(const OccupationPair& occ, const CommonNoiseTree& tree) {
    double total = 0.0;
    for (const auto& node : tree.nodes()) total += node.prob * sum(occ.mu_at(node.id));
    return std::abs(1.0 - total);
}

double constraint_residual(const OccupationPair& occ, const GridChain& chain,
                           const CommonNoiseTree& tree) {
    const std::size_t n = chain.size();
    std::vector<double> pushed(n);
    double worst = 0.0;
    for (const auto& node : tree.nodes()) {
        const auto m = occ.m_at(node.id);
        const auto mu = occ.mu_at(node.id);
        if (node.time == 0) {
            std::copy(chain.initial.begin(), chain.initial.end(), pushed.begin());
        } else {
            kernels::vecmat(occ.m_at(node.parent), chain.transition, pushed);
        }
        const bool leaf = node.time == tree.horizon();
        for (std::size_t x = 0; x < n; ++x) {
            const double lhs = node.prob * (mu[x] + (leaf ? 0.0 : m[x]));
            worst = std::max(worst, std::abs(lhs - node.prob * pushed[x]));
        }
    }
    return worst;
}

void clamp_negatives(OccupationPair& occ, double tol) {
    for (auto* v : {&occ.m, &occ.mu}) {
        for (double& e : *v) {
            if (e >= 0.0) continue;
            if (e < -tol) {
                fail(ErrorCategory::model, fmt::format("occupation entry {:.3e} below -{:.0e}", e, tol));
            }
            e = 0.0;
        }
    }
}

std::vector<double> active_mass(const OccupationPair& occ) {
    std::vector<double> out(occ.nodes);
    for (std::size_t id = 0; id < occ.nodes; ++id) out[id] = sum(occ.m_at(id));
    return out;
}

}  // namespace mfgstop
