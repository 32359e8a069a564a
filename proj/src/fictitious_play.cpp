#include "mfgstop/fictitious_play.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <random>

#include <fmt/format.h>

#include "mfgstop/error.hpp"
#include "mfgstop/kernels.hpp"

namespace mfgstop {

InitialProfile parse_initial_profile(const std::string& s) {
    if (s == "never") return InitialProfile::never;
    if (s == "immediate") return InitialProfile::immediate;
    if (s == "uniform") return InitialProfile::uniform;
    if (s == "random") return InitialProfile::random;
    fail(ErrorCategory::config, fmt::format("unknown initial profile '{}'", s));
}

const char* initial_profile_name(InitialProfile p) {
    switch (p) {
        case InitialProfile::never: return "never";
        case InitialProfile::immediate: return "immediate";
        case InitialProfile::uniform: return "uniform";
        case InitialProfile::random: return "random";
    }
    return "unknown";
}

namespace {

void blend(OccupationPair& acc, const OccupationPair& fresh, double w_old, double w_new) {
    kernels::axpby(w_new, fresh.m, w_old, acc.m);
    kernels::axpby(w_new, fresh.mu, w_old, acc.mu);
}

OccupationPair occupation_for(const GameModel& model, Population pop, InitialProfile kind,
                              std::mt19937_64& rng) {
    const auto& chain = model.chain(pop);
    const auto& tree = model.tree;
    switch (kind) {
        case InitialProfile::never:
            return forward_occupation(never_stop_rule(tree, chain.size()), chain, tree);
        case InitialProfile::immediate:
            return forward_occupation(immediate_stop_rule(tree, chain.size()), chain, tree);
        case InitialProfile::uniform: {
            auto occ = forward_occupation(never_stop_rule(tree, chain.size()), chain, tree);
            blend(occ, forward_occupation(immediate_stop_rule(tree, chain.size()), chain, tree), 0.5,
                  0.5);
            return occ;
        }
        case InitialProfile::random: {
            // A pure rule stopping at each (x, u) with a small per-step hazard.
            auto rule = never_stop_rule(tree, chain.size());
            std::bernoulli_distribution coin(2.0 / std::max(1, tree.horizon()));
            for (auto& s : rule.stop) s = s != 0 || coin(rng);
            return forward_occupation(rule, chain, tree);
        }
    }
    fail(ErrorCategory::config, "unknown initial profile");
}

}  // namespace

MeanFieldProfile initial_profile(const GameModel& model, InitialProfile kind, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    MeanFieldProfile p;
    p.conventional = occupation_for(model, Population::conventional, kind, rng);
    p.renewable = occupation_for(model, Population::renewable, kind, rng);
    return p;
}

MeanFieldProfile average(const MeanFieldProfile& old_profile, const MeanFieldProfile& fresh,
                         int l) {
    const double w_new = 1.0 / (l + 1.0);
    const double w_old = l / (l + 1.0);
    MeanFieldProfile out = old_profile;
    blend(out.conventional, fresh.conventional, w_old, w_new);
    blend(out.renewable, fresh.renewable, w_old, w_new);
    return out;
}

namespace {

struct BestResponses {
    MeanFieldProfile profile;
    Exploitability eps;
    double cross_check_gap = -1.0;
};

double relative_gap(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

// Best responses of both populations against the same profile, plus the
// exploitability of that profile.
class Responder {
  public:
    Responder(const GameModel& model, const FPOptions& opts) : model_(model), opts_(opts) {
        if (opts.use_lp || opts.cross_check_every > 0) {
            solver_ = make_solver(opts.lp_solver, opts.lp_work_dir);
            lp_c_ = assemble_constraints(model.conventional, model.tree);
            lp_r_ = assemble_constraints(model.renewable, model.tree);
        }
    }

    BestResponses respond(const MeanFieldProfile& current, bool cross_check) {
        const auto prices = compute_prices(model_, current);
        BestResponses out;
        for (Population pop : {Population::conventional, Population::renewable}) {
            const bool conv = pop == Population::conventional;
            const auto tables = build_reward_tables(model_, prices, pop);
            const auto& chain = model_.chain(pop);
            const DPResult dp = best_response_dp(tables, chain, model_.tree);
            const double gamma =
                evaluate_gamma(tables, conv ? current.conventional : current.renewable, model_.tree);

            std::optional<LPResult> lp;
            if (opts_.use_lp || cross_check) {
                lp = best_response_lp(conv ? lp_c_ : lp_r_, tables, model_.tree, *solver_);
                const double gap = relative_gap(lp->value, dp.value);
                out.cross_check_gap = std::max(out.cross_check_gap, gap);
                if (gap > opts_.cross_check_tol) {
                    fail(ErrorCategory::solver,
                         fmt::format("{} best response: LP value {:.17g} vs DP value {:.17g}",
                                     population_name(pop), lp->value, dp.value));
                }
            }
            OccupationPair br = opts_.use_lp ? std::move(lp->occupation)
                                             : forward_occupation(dp.rule, chain, model_.tree);
            const double eps = dp.value - gamma;
            if (eps < -1e-9) {
                fail(ErrorCategory::model, fmt::format("negative {} exploitability {:.3e}",
                                                       population_name(pop), eps));
            }
            if (conv) {
                out.profile.conventional = std::move(br);
                out.eps.conventional = eps;
                out.eps.gamma_conventional = gamma;
                out.eps.br_conventional = dp.value;
            } else {
                out.profile.renewable = std::move(br);
                out.eps.renewable = eps;
                out.eps.gamma_renewable = gamma;
                out.eps.br_renewable = dp.value;
            }
        }
        return out;
    }

  private:
    const GameModel& model_;
    const FPOptions& opts_;
    std::unique_ptr<LPSolver> solver_;
    OccupationLP lp_c_;
    OccupationLP lp_r_;
};

FPRecord make_record(int l, const BestResponses& br, const MeanFieldProfile& profile,
                     const CommonNoiseTree& tree) {
    FPRecord rec;
    rec.iteration = l;
    rec.eps = br.eps;
    rec.cross_check_gap = br.cross_check_gap;
    rec.flow_error = std::max(flow_identity_error(profile.conventional, tree),
                              flow_identity_error(profile.renewable, tree));
    rec.mass_error = std::max(total_mass_error(profile.conventional, tree),
                              total_mass_error(profile.renewable, tree));
    return rec;
}

}  // namespace

FPState lpfp(const GameModel& model, const FPOptions& options, const FPProgress& progress) {
    if (options.iterations < 1) fail(ErrorCategory::config, "lpfp: need at least one iteration");
    Responder responder(model, options);
    FPState state;
    state.average = initial_profile(model, options.init, options.seed);

    auto checked = [&](int l) { return options.cross_check_every > 0 && l % options.cross_check_every == 0; };

    BestResponses br = responder.respond(state.average, checked(0));
    state.initial = make_record(0, br, state.average, model.tree);
    state.br_conventional.push_back(br.eps.br_conventional);
    state.br_renewable.push_back(br.eps.br_renewable);
    const double initial_eps = state.initial.eps.max();

    for (int l = 0; l < options.iterations; ++l) {
        state.average = average(state.average, br.profile, l);
        state.iteration = l + 1;
        br = responder.respond(state.average, checked(l + 1));
        state.history.push_back(make_record(l + 1, br, state.average, model.tree));
        state.br_conventional.push_back(br.eps.br_conventional);
        state.br_renewable.push_back(br.eps.br_renewable);
        const FPRecord& rec = state.history.back();
        if (progress) progress(rec);

        if (state.history.size() > 20) {
            const double before = state.history[state.history.size() - 21].eps.max();
            if (rec.eps.max() > 10.0 * std::max(before, 1e-12)) {
                fail(ErrorCategory::solver,
                     fmt::format("fictitious play diverging: exploitability {:.3e} at iteration {} "
                                 "vs {:.3e} twenty iterations earlier",
                                 rec.eps.max(), rec.iteration, before));
            }
        }
        if (options.early_exit && rec.eps.max() < options.early_exit_ratio * initial_eps) break;
    }
    return state;
}

}  // namespace mfgstop
