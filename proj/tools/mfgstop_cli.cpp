// mfgstop: command-line front end for the stopping-game solver.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "mfgstop/config.hpp"
#include "mfgstop/error.hpp"
#include "mfgstop/kernels.hpp"
#include "mfgstop/lp_problem.hpp"
#include "mfgstop/report.hpp"

namespace {

using namespace mfgstop;

struct ModelSource {
    std::string config_path;
    std::string setting = "2";

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON run configuration");
        cmd->add_option("--setting", setting, "Parameter preset when no config is given")
            ->check(CLI::IsMember({"1", "2", "custom"}));
    }

    RunConfig load() const {
        if (!config_path.empty()) return load_config(config_path);
        if (setting == "custom") fail(ErrorCategory::config, "--setting custom requires --config");
        return preset(std::stoi(setting));
    }
};

void write_or_print(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (f == nullptr) fail(ErrorCategory::io, fmt::format("cannot open '{}' for writing", path));
    const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
    if (std::fclose(f) != 0 || !ok) fail(ErrorCategory::io, fmt::format("write to '{}' failed", path));
}

std::vector<double> resolve_path(const std::string& which, const RunConfig& cfg) {
    if (which == "min") return lowest_carbon_path(cfg);
    if (which == "max") return highest_carbon_path(cfg);
    auto raw = read_carbon_path(which);
    // A path listing only the levels per adjustment period is expanded to every step.
    if (raw.size() == cfg.scenario.adjustment_dates.size() + 1) {
        std::vector<double> full;
        std::size_t j = 0;
        for (int t = 0; t <= cfg.steps; ++t) {
            while (j < cfg.scenario.adjustment_dates.size() && cfg.scenario.adjustment_dates[j] <= t) ++j;
            full.push_back(raw[j]);
        }
        return full;
    }
    return raw;
}

int run(int argc, char** argv) {
    CLI::App app{"Mean-field optimal stopping game with common noise: electricity market solver"};
    app.require_subcommand(1);

    // run
    ModelSource run_src;
    std::optional<int> iters;
    std::optional<std::string> det_path, out_dir, br_solver, init;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
    auto* run_cmd = app.add_subcommand("run", "Solve the game by fictitious play and write reports");
    run_src.attach(run_cmd);
    run_cmd->add_option("--iters", iters, "Fictitious-play iterations");
    run_cmd->add_option("--deterministic-path", det_path,
                        "Fix the carbon path: min, max, or a file of levels");
    run_cmd->add_option("--out", out_dir, "Output directory");
    run_cmd->add_option("--solver", br_solver, "Best-response method")
        ->check(CLI::IsMember({"dp", "lp"}));
    run_cmd->add_option("--init", init, "Initial profile")
        ->check(CLI::IsMember({"never", "immediate", "uniform", "random"}));
    run_cmd->add_option("--seed", seed, "Seed for randomized initial profiles");
    run_cmd->add_flag("--quiet", quiet, "No progress output");

    // config
    ModelSource cfg_src;
    std::string cfg_out;
    auto* cfg_cmd = app.add_subcommand("config", "Print the effective configuration as JSON");
    cfg_src.attach(cfg_cmd);
    cfg_cmd->add_option("--out", cfg_out, "Output file (default stdout)");

    // tree
    ModelSource tree_src;
    std::string tree_out;
    auto* tree_cmd = app.add_subcommand("tree", "Dump the common-noise tree as JSON");
    tree_src.attach(tree_cmd);
    tree_cmd->add_option("--out", tree_out, "Output file (default stdout)");

    // chains
    ModelSource chain_src;
    std::string chain_out;
    auto* chain_cmd = app.add_subcommand("chains", "Dump the cost and capacity-factor chains as JSON");
    chain_src.attach(chain_cmd);
    chain_cmd->add_option("--out", chain_out, "Output file (default stdout)");

    // lp-solve
    std::string lp_dir;
    std::string lp_solver = "dense";
    auto* lp_cmd = app.add_subcommand(
        "lp-solve", "Solve <dir>/problem.{triplets,obj,rhs}; write <dir>/solution.txt");
    lp_cmd->add_option("dir", lp_dir, "Interchange directory")->required();
    lp_cmd->add_option("--solver", lp_solver, "Built-in LP solver")
        ->check(CLI::IsMember({"dense", "staircase"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (*run_cmd) {
        RunConfig cfg = run_src.load();
        if (iters) cfg.solver.iterations = *iters;
        if (out_dir) cfg.output_dir = *out_dir;
        if (br_solver) cfg.solver.best_response = *br_solver;
        if (init) cfg.solver.init = *init;
        if (seed) cfg.solver.seed = *seed;
        cfg.validate();

        FPProgress progress;
        if (!quiet) {
            progress = [](const FPRecord& r) {
                if (r.iteration % 10 == 0) {
                    std::cerr << fmt::format("iter {:4d}  eps_c {:.4e}  eps_r {:.4e}\n", r.iteration,
                                             r.eps.conventional, r.eps.renewable);
                }
            };
        }
        const RunReport report = det_path ? deterministic_baseline(cfg, resolve_path(*det_path, cfg), progress)
                                          : run_experiment(cfg, progress);
        emit(report, cfg.output_dir);
        for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
        std::cerr << fmt::format("wrote {} ({} iterations, {:.1f}s, kernels: {})\n", cfg.output_dir,
                                 report.fp.iteration, report.seconds_solve, report.kernels);
        return 0;
    }
    if (*cfg_cmd) {
        write_or_print(dump_config(cfg_src.load()), cfg_out);
        return 0;
    }
    if (*tree_cmd) {
        const RunConfig cfg = tree_src.load();
        write_or_print(nlohmann::json(build_tree(cfg.scenario)).dump(1) + "\n", tree_out);
        return 0;
    }
    if (*chain_cmd) {
        const RunConfig cfg = chain_src.load();
        nlohmann::json j{
            {"conventional", {{"params", conventional_params(cfg)},
                              {"chain", build_chain(conventional_params(cfg))}}},
            {"renewable",
             {{"params", renewable_params(cfg)}, {"chain", build_chain(renewable_params(cfg))}}},
        };
        write_or_print(j.dump(1) + "\n", chain_out);
        return 0;
    }
    if (*lp_cmd) {
        namespace fs = std::filesystem;
        const LPProblem lp = read_lp((fs::path(lp_dir) / "problem").string());
        const LPSolution sol = make_solver(lp_solver)->solve(lp);
        if (sol.status != LPStatus::optimal) {
            fail(ErrorCategory::solver, fmt::format("LP status {}", lp_status_name(sol.status)));
        }
        write_solution(sol.x, (fs::path(lp_dir) / "solution.txt").string());
        std::cerr << fmt::format("objective {:.17g} after {} iterations\n", sol.objective,
                                 sol.iterations);
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const mfgstop::MfgError& e) {
        std::cerr << "error [" << mfgstop::category_name(e.category()) << "]: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
