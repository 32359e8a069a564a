#include "mfgstop/lp_core.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mfgstop/error.hpp"
#include "mfgstop/kernels.hpp"

namespace mfgstop {

const char* population_name(Population p) {
    return p == Population::conventional ? "conventional" : "renewable";
}

void attach_renewable_law(GameModel& model) {
    model.renewable_law.clear();
    std::vector<double> law = model.renewable.initial;
    for (int t = 0; t <= model.horizon(); ++t) {
        model.renewable_law.push_back(law);
        law = step_law(model.renewable, law);
    }
}

std::vector<PricePair> compute_prices(const GameModel& model, const MeanFieldProfile& profile) {
    const auto& tree = model.tree;
    const double z0 = tree.spec().z0;
    std::vector<PricePair> prices(tree.node_count());
    for (int t = 0; t < tree.horizon(); ++t) {
        const auto& eta = model.renewable_law[static_cast<std::size_t>(t)];
        for (std::size_t id : tree.level(t)) {
            const double z = tree.node(id).carbon();
            const DemandPair d = demand_peak_offpeak(model.demand, t, z, z0);
            const double ren = renewable_supply(model.supply, model.renewable.grid, eta,
                                                profile.renewable.m_at(id));
            const auto m = profile.conventional.m_at(id);
            prices[id].peak = clearing_price(model.supply, z, d.peak, ren, model.conventional.grid, m);
            prices[id].offpeak =
                clearing_price(model.supply, z, d.offpeak, ren, model.conventional.grid, m);
        }
    }
    return prices;
}

double conventional_stop_reward(const RewardParams& r, int t) {
    return r.conventional_scrap_value *
           std::exp(-(r.conventional_depreciation + r.discount_rate) * t * r.dt);
}

double renewable_stop_reward(const RewardParams& r, int t, double horizon_years) {
    const double K = r.renewable_investment;
    return K * std::exp(-r.discount_rate * horizon_years -
                        r.renewable_depreciation * (horizon_years - t * r.dt)) -
           K * std::exp(-r.discount_rate * t * r.dt);
}

RewardTables build_reward_tables(const GameModel& model, const std::vector<PricePair>& prices,
                                 Population population) {
    const auto& tree = model.tree;
    const auto& chain = model.chain(population);
    const auto& r = model.rewards;
    const std::size_t n = chain.size();
    const double cp = model.demand.peak_share;
    const double co = model.demand.offpeak_share();
    const double T0 = model.horizon_years();

    RewardTables tab;
    tab.states = n;
    tab.f.assign(tree.node_count() * n, 0.0);
    tab.g.assign(tree.node_count() * n, 0.0);
    tab.prices = prices;

    std::vector<double> margin(n), g_peak(n), g_off(n);
    for (const auto& node : tree.nodes()) {
        const int t = node.time;
        const double stop = population == Population::conventional
                                ? conventional_stop_reward(r, t)
                                : renewable_stop_reward(r, t, T0);
        std::fill_n(tab.g.begin() + static_cast<std::ptrdiff_t>(node.id * n), n, stop);
        if (t == tree.horizon()) continue;

        const double disc = std::exp(-r.discount_rate * t * r.dt);
        const PricePair p = prices[node.id];
        double* f = tab.f.data() + node.id * n;
        if (population == Population::conventional) {
            const double carbon = model.supply.emission_intensity * node.carbon();
            for (std::size_t x = 0; x < n; ++x) margin[x] = p.peak - chain.grid[x] - carbon;
            kernels::gain(margin, g_peak, model.supply.c_max);
            for (std::size_t x = 0; x < n; ++x) margin[x] = p.offpeak - chain.grid[x] - carbon;
            kernels::gain(margin, g_off, model.supply.c_max);
            for (std::size_t x = 0; x < n; ++x) {
                f[x] = disc *
                       (r.unit_factor * (cp * g_peak[x] + co * g_off[x]) - r.conventional_fixed_cost) *
                       r.dt;
            }
        } else {
            const double revenue = r.unit_factor * (cp * p.peak + co * p.offpeak);
            for (std::size_t x = 0; x < n; ++x) {
                f[x] = -disc * (revenue * chain.grid[x] - r.renewable_fixed_cost) * r.dt;
            }
        }
    }
    return tab;
}

double evaluate_gamma(const RewardTables& tables, const OccupationPair& occ,
                      const CommonNoiseTree& tree) {
    const std::size_t n = tables.states;
    double total = 0.0;
    for (const auto& node : tree.nodes()) {
        const std::span<const double> f(tables.f.data() + node.id * n, n);
        const std::span<const double> g(tables.g.data() + node.id * n, n);
        double v = kernels::dot(g, occ.mu_at(node.id));
        if (node.time < tree.horizon()) v += kernels::dot(f, occ.m_at(node.id));
        total += node.prob * v;
    }
    return total;
}

DPResult best_response_dp(const RewardTables& tables, const GridChain& chain,
                          const CommonNoiseTree& tree, bool prefer_continue) {
    const std::size_t n = chain.size();
    if (tables.states != n) fail(ErrorCategory::model, "DP: reward tables do not match the chain");
    DPResult res;
    res.v.assign(tree.node_count() * n, 0.0);
    res.rule = {n, std::vector<std::uint8_t>(tree.node_count() * n, 1)};
    std::vector<double> mix(n), cont(n);

    for (int t = tree.horizon(); t >= 0; --t) {
        for (std::size_t id : tree.level(t)) {
            const std::span<double> v(res.v.data() + id * n, n);
            const std::span<const double> g(tables.g.data() + id * n, n);
            if (t == tree.horizon()) {
                std::copy(g.begin(), g.end(), v.begin());
                continue;
            }
            std::fill(mix.begin(), mix.end(), 0.0);
            for (const auto& c : tree.node(id).children) {
                kernels::axpy(c.prob, std::span<const double>(res.v.data() + c.node * n, n), mix);
            }
            kernels::matvec(chain.transition, mix, cont);
            kernels::axpy(1.0, std::span<const double>(tables.f.data() + id * n, n), cont);
            kernels::stop_or_continue(cont, g, v,
                                      std::span<std::uint8_t>(res.rule.stop.data() + id * n, n),
                                      !prefer_continue);
        }
    }
    res.value = kernels::dot(chain.initial,
                             std::span<const double>(res.v.data() + tree.root().id * n, n));
    return res;
}

OccupationLP assemble_constraints(const GridChain& chain, const CommonNoiseTree& tree,
                                  std::size_t max_variables) {
    const std::size_t n = chain.size();
    const std::size_t N = tree.node_count();
    const std::size_t leaves = tree.level(tree.horizon()).size();
    const std::size_t vars = (2 * N - leaves) * n;
    if (vars > max_variables) {
        fail(ErrorCategory::solver,
             fmt::format("LP would have {} variables, above the limit {}", vars, max_variables));
    }

    OccupationLP prob;
    prob.states = n;
    prob.m_col.assign(N * n, -1);
    prob.mu_col.assign(N * n, -1);
    std::int64_t col = 0;
    for (const auto& node : tree.nodes()) {
        if (node.time < tree.horizon()) {
            for (std::size_t x = 0; x < n; ++x) prob.m_col[node.id * n + x] = col++;
        }
        for (std::size_t x = 0; x < n; ++x) prob.mu_col[node.id * n + x] = col++;
    }

    LPProblem& lp = prob.lp;
    lp.rows = N * n;
    lp.cols = static_cast<std::size_t>(col);
    lp.rhs.assign(lp.rows, 0.0);
    lp.objective.assign(lp.cols, 0.0);
    for (const auto& node : tree.nodes()) {
        double inflow_weight = 0.0;
        if (node.time > 0) {
            const auto& parent = tree.node(node.parent);
            for (const auto& c : parent.children) {
                if (c.node == node.id) inflow_weight = parent.prob * c.prob;
            }
        }
        for (std::size_t x = 0; x < n; ++x) {
            const std::size_t row = node.id * n + x;
            if (prob.m_col[row] >= 0) {
                lp.entries.push_back({row, static_cast<std::size_t>(prob.m_col[row]), node.prob});
            }
            lp.entries.push_back({row, static_cast<std::size_t>(prob.mu_col[row]), node.prob});
            if (node.time == 0) {
                lp.rhs[row] = chain.initial[x];
                continue;
            }
            for (std::size_t xp = 0; xp < n; ++xp) {
                const double a = chain.p(xp, x);
                if (a == 0.0) continue;
                const auto pc = prob.m_col[node.parent * n + xp];
                lp.entries.push_back({row, static_cast<std::size_t>(pc), -inflow_weight * a});
            }
        }
    }
    return prob;
}

void set_objective(OccupationLP& problem, const RewardTables& tables, const CommonNoiseTree& tree) {
    const std::size_t n = problem.states;
    for (const auto& node : tree.nodes()) {
        for (std::size_t x = 0; x < n; ++x) {
            const std::size_t k = node.id * n + x;
            if (problem.m_col[k] >= 0) {
                problem.lp.objective[static_cast<std::size_t>(problem.m_col[k])] =
                    node.prob * tables.f[k];
            }
            problem.lp.objective[static_cast<std::size_t>(problem.mu_col[k])] = node.prob * tables.g[k];
        }
    }
}

std::vector<double> occupation_to_columns(const OccupationLP& problem, const OccupationPair& occ) {
    std::vector<double> x(problem.lp.cols, 0.0);
    for (std::size_t k = 0; k < problem.m_col.size(); ++k) {
        if (problem.m_col[k] >= 0) x[static_cast<std::size_t>(problem.m_col[k])] = occ.m[k];
        x[static_cast<std::size_t>(problem.mu_col[k])] = occ.mu[k];
    }
    return x;
}

OccupationPair columns_to_occupation(const OccupationLP& problem, const std::vector<double>& x,
                                     std::size_t nodes) {
    OccupationPair occ(problem.states, nodes);
    for (std::size_t k = 0; k < problem.m_col.size(); ++k) {
        if (problem.m_col[k] >= 0) occ.m[k] = x[static_cast<std::size_t>(problem.m_col[k])];
        occ.mu[k] = x[static_cast<std::size_t>(problem.mu_col[k])];
    }
    return occ;
}

LPResult best_response_lp(OccupationLP& problem, const RewardTables& tables,
                          const CommonNoiseTree& tree, const LPSolver& solver) {
    set_objective(problem, tables, tree);
    const LPSolution sol = solver.solve(problem.lp);
    if (sol.status != LPStatus::optimal) {
        fail(ErrorCategory::solver, fmt::format("{} LP solver returned status {}", solver.name(),
                                                lp_status_name(sol.status)));
    }
    LPResult res;
    res.value = sol.objective;
    res.iterations = sol.iterations;
    res.residual = row_residual(problem.lp, sol.x);
    res.occupation = columns_to_occupation(problem, sol.x, tree.node_count());
    clamp_negatives(res.occupation, 1e-9);
    return res;
}

Exploitability exploitability(const GameModel& model, const MeanFieldProfile& profile) {
    const auto prices = compute_prices(model, profile);
    Exploitability e;
    for (Population pop : {Population::conventional, Population::renewable}) {
        const auto tables = build_reward_tables(model, prices, pop);
        const auto& occ = pop == Population::conventional ? profile.conventional : profile.renewable;
        const double br = best_response_dp(tables, model.chain(pop), model.tree).value;
        const double gamma = evaluate_gamma(tables, occ, model.tree);
        const double eps = br - gamma;
        if (eps < -1e-9) {
            fail(ErrorCategory::model,
                 fmt::format("negative {} exploitability {:.3e}", population_name(pop), eps));
        }
        if (pop == Population::conventional) {
            e.conventional = eps;
            e.gamma_conventional = gamma;
            e.br_conventional = br;
        } else {
            e.renewable = eps;
            e.gamma_renewable = gamma;
            e.br_renewable = br;
        }
    }
    return e;
}

}  // namespace mfgstop
