#include "mfgstop/lp_problem.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mfgstop/error.hpp"

namespace mfgstop {

void LPProblem::validate() const {
    if (rhs.size() != rows) fail(ErrorCategory::solver, "lp: rhs length differs from row count");
    if (objective.size() != cols) {
        fail(ErrorCategory::solver, "lp: objective length differs from column count");
    }
    for (const auto& e : entries) {
        if (e.row >= rows || e.col >= cols) {
            fail(ErrorCategory::solver,
                 fmt::format("lp: entry ({}, {}) outside {}x{}", e.row, e.col, rows, cols));
        }
        if (!std::isfinite(e.value)) fail(ErrorCategory::solver, "lp: non-finite coefficient");
    }
}

double row_residual(const LPProblem& lp, const std::vector<double>& x) {
    std::vector<double> ax(lp.rows, 0.0);
    for (const auto& e : lp.entries) ax[e.row] += e.value * x[e.col];
    double worst = 0.0;
    for (std::size_t r = 0; r < lp.rows; ++r) worst = std::max(worst, std::abs(ax[r] - lp.rhs[r]));
    return worst;
}

double objective_value(const LPProblem& lp, const std::vector<double>& x) {
    double v = 0.0;
    for (std::size_t j = 0; j < lp.cols; ++j) v += lp.objective[j] * x[j];
    return v;
}

const char* lp_status_name(LPStatus s) {
    switch (s) {
        case LPStatus::optimal: return "optimal";
        case LPStatus::infeasible: return "infeasible";
        case LPStatus::unbounded: return "unbounded";
        case LPStatus::iteration_limit: return "iteration_limit";
    }
    return "unknown";
}

std::unique_ptr<LPSolver> make_solver(const std::string& spec, const std::string& work_dir) {
    if (spec == "dense") return std::make_unique<DenseSimplex>();
    if (spec == "staircase") return std::make_unique<StaircaseSimplex>();
    const std::string prefix = "external:";
    if (spec.rfind(prefix, 0) == 0) {
        if (work_dir.empty()) fail(ErrorCategory::config, "external LP solver needs a work directory");
        return std::make_unique<ExternalSolver>(spec.substr(prefix.size()), work_dir);
    }
    fail(ErrorCategory::config, fmt::format("unknown LP solver '{}'", spec));
}

}  // namespace mfgstop
