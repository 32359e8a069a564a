#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mfgstop/scenario_tree.hpp"
#include "mfgstop/state_chains.hpp"

namespace mfgstop {

// Occupation measures of one population, conditional on the common-noise
// history: m(u) is the active mass and mu(u) the mass stopping at node u.
// Both are stored for every tree node; m is identically zero on the leaves
// (t = T), where it is not a decision variable.
struct OccupationPair {
    std::size_t states = 0;
    std::size_t nodes = 0;
    std::vector<double> m;
    std::vector<double> mu;

    OccupationPair() = default;
    OccupationPair(std::size_t states, std::size_t nodes)
        : states(states), nodes(nodes), m(states * nodes, 0.0), mu(states * nodes, 0.0) {}

    std::span<double> m_at(std::size_t node) { return {m.data() + node * states, states}; }
    std::span<const double> m_at(std::size_t node) const {
        return {m.data() + node * states, states};
    }
    std::span<double> mu_at(std::size_t node) { return {mu.data() + node * states, states}; }
    std::span<const double> mu_at(std::size_t node) const {
        return {mu.data() + node * states, states};
    }

    bool operator==(const OccupationPair&) const = default;
};

struct MeanFieldProfile {
    OccupationPair conventional;
    OccupationPair renewable;

    bool operator==(const MeanFieldProfile&) const = default;
};

/// stop[node * states + x] == 1 when the rule stops at (x, node). Leaves always stop.
struct StoppingRule {
    std::size_t states = 0;
    std::vector<std::uint8_t> stop;

    bool stops(std::size_t node, std::size_t x) const { return stop[node * states + x] != 0; }
};

StoppingRule never_stop_rule(const CommonNoiseTree& tree, std::size_t states);
StoppingRule immediate_stop_rule(const CommonNoiseTree& tree, std::size_t states);

/// Occupation generated by a pure rule: the active law at a node is the
/// parent's continuing mass pushed through the chain, split by the rule.
OccupationPair forward_occupation(const StoppingRule& rule, const GridChain& chain,
                                  const CommonNoiseTree& tree);

/// Largest |1 - |m_t(u)| - sum_{s<=t} |mu_s(anc_s(u))|| over all nodes.
double flow_identity_error(const OccupationPair& occ, const CommonNoiseTree& tree);

/// |1 - sum_t sum_u p_t(u) |mu_t(u)||.
double total_mass_error(const OccupationPair& occ, const CommonNoiseTree& tree);

/// Largest violation of the balance rows mu(u) + m(u) = m(parent) P
/// (initial law at the root), in the probability-weighted form.
double constraint_residual(const OccupationPair& occ, const GridChain& chain,
                           const CommonNoiseTree& tree);

/// Zeroes entries in [-tol, 0); throws on anything more negative.
void clamp_negatives(OccupationPair& occ, double tol = 1e-12);

/// Total active mass |m(u)| per node.
std::vector<double> active_mass(const OccupationPair& occ);

}  // namespace mfgstop
