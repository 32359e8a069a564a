#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mfgstop/lp_core.hpp"

namespace mfgstop {

enum class InitialProfile { never, immediate, uniform, random };

InitialProfile parse_initial_profile(const std::string& s);
const char* initial_profile_name(InitialProfile p);

/// Feasible starting profile for both populations.
MeanFieldProfile initial_profile(const GameModel& model, InitialProfile kind, std::uint64_t seed);

/// old * l/(l+1) + fresh / (l+1), entrywise.
MeanFieldProfile average(const MeanFieldProfile& old_profile, const MeanFieldProfile& fresh,
                         int l);

struct FPOptions {
    int iterations = 200;
    bool use_lp = false;                 // best responses from the LP instead of DP
    std::string lp_solver = "staircase";
    int cross_check_every = 10;          // 0 disables the DP/LP value comparison
    double cross_check_tol = 1e-8;       // relative
    InitialProfile init = InitialProfile::never;
    std::uint64_t seed = 0;
    bool early_exit = false;
    double early_exit_ratio = 1e-4;      // of the initial exploitability
    std::string lp_work_dir;             // for external solvers
};

struct FPRecord {
    int iteration = 0;  // l: the record describes the averaged profile P^l
    Exploitability eps;
    double flow_error = 0.0;  // worst per-node flow identity error, both populations
    double mass_error = 0.0;  // worst total-mass error, both populations
    double cross_check_gap = -1.0;  // relative DP/LP gap, -1 when not checked
};

struct FPState {
    int iteration = 0;
    MeanFieldProfile average;
    FPRecord initial;              // exploitability of the starting profile
    std::vector<FPRecord> history; // P^1 .. P^iteration
    std::vector<double> br_conventional;  // best-response values against P^l, l = 0..
    std::vector<double> br_renewable;
};

using FPProgress = std::function<void(const FPRecord&)>;

FPState lpfp(const GameModel& model, const FPOptions& options, const FPProgress& progress = {});

}  // namespace mfgstop
