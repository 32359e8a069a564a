#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mfgstop/error.hpp"
#include "mfgstop/lp_problem.hpp"

namespace mfgstop {

namespace {

struct Sparse {
    std::vector<std::size_t> start;  // size outer + 1
    std::vector<std::size_t> index;
    std::vector<double> value;

    std::size_t begin(std::size_t k) const { return start[k]; }
    std::size_t end(std::size_t k) const { return start[k + 1]; }
};

Sparse compress(const LPProblem& lp, bool by_column) {
    const std::size_t outer = by_column ? lp.cols : lp.rows;
    Sparse s;
    s.start.assign(outer + 1, 0);
    for (const auto& e : lp.entries) ++s.start[(by_column ? e.col : e.row) + 1];
    for (std::size_t k = 0; k < outer; ++k) s.start[k + 1] += s.start[k];
    s.index.resize(lp.entries.size());
    s.value.resize(lp.entries.size());
    std::vector<std::size_t> fill(s.start.begin(), s.start.end() - 1);
    for (const auto& e : lp.entries) {
        const std::size_t k = by_column ? e.col : e.row;
        s.index[fill[k]] = by_column ? e.row : e.col;
        s.value[fill[k]] = e.value;
        ++fill[k];
    }
    return s;
}

}  // namespace

LPSolution StaircaseSimplex::solve(const LPProblem& lp) const {
    lp.validate();
    const Sparse cols = compress(lp, true);
    const Sparse rows = compress(lp, false);
    LPSolution sol;

    for (double b : lp.rhs) {
        if (b < 0.0) fail(ErrorCategory::solver, "staircase simplex: negative right-hand side");
    }

    // Owner row and diagonal coefficient of each column.
    std::vector<std::size_t> owner(lp.cols, lp.rows);
    std::vector<double> diag(lp.cols, 0.0);
    std::vector<std::vector<std::size_t>> owned(lp.rows);
    for (std::size_t j = 0; j < lp.cols; ++j) {
        if (cols.begin(j) == cols.end(j)) {
            if (lp.objective[j] > opts_.tol) {
                sol.status = LPStatus::unbounded;
                return sol;
            }
            continue;
        }
        std::size_t first = lp.rows;
        for (std::size_t k = cols.begin(j); k < cols.end(j); ++k) first = std::min(first, cols.index[k]);
        for (std::size_t k = cols.begin(j); k < cols.end(j); ++k) {
            const bool is_diag = cols.index[k] == first;
            if (is_diag && cols.value[k] <= 0.0) {
                fail(ErrorCategory::solver,
                     fmt::format("staircase simplex: column {} has a nonpositive leading entry", j));
            }
            if (!is_diag && cols.value[k] > 0.0) {
                fail(ErrorCategory::solver,
                     fmt::format("staircase simplex: column {} has a positive off-diagonal entry", j));
            }
            if (is_diag) diag[j] += cols.value[k];
        }
        owner[j] = first;
        owned[first].push_back(j);
    }
    std::vector<std::size_t> basis(lp.rows);
    for (std::size_t r = 0; r < lp.rows; ++r) {
        if (owned[r].empty()) {
            fail(ErrorCategory::solver, fmt::format("staircase simplex: row {} owns no column", r));
        }
        basis[r] = owned[r].front();
    }

    auto column_dot = [&](std::size_t j, const std::vector<double>& y, bool skip_diag) {
        double s = 0.0;
        for (std::size_t k = cols.begin(j); k < cols.end(j); ++k) {
            if (skip_diag && cols.index[k] == owner[j]) continue;
            s += y[cols.index[k]] * cols.value[k];
        }
        return s;
    };

    std::vector<double> y(lp.rows, 0.0);
    while (true) {
        if (sol.iterations >= opts_.max_iterations) {
            sol.status = LPStatus::iteration_limit;
            return sol;
        }
        for (std::size_t r = lp.rows; r-- > 0;) {
            const std::size_t j = basis[r];
            y[r] = (lp.objective[j] - column_dot(j, y, true)) / diag[j];
        }
        std::size_t swaps = 0;
        for (std::size_t r = 0; r < lp.rows; ++r) {
            std::size_t best = basis[r];
            double best_d = 0.0;
            for (std::size_t j : owned[r]) {
                if (j == basis[r]) continue;
                const double d = lp.objective[j] - column_dot(j, y, false);
                if (d > best_d + opts_.tol * (1.0 + std::abs(lp.objective[j]))) {
                    best_d = d;
                    best = j;
                }
            }
            if (best != basis[r]) {
                basis[r] = best;
                ++swaps;
            }
        }
        ++sol.iterations;
        if (swaps == 0) break;
    }

    sol.x.assign(lp.cols, 0.0);
    std::vector<bool> is_basic(lp.cols, false);
    for (std::size_t j : basis) is_basic[j] = true;
    for (std::size_t r = 0; r < lp.rows; ++r) {
        const std::size_t jb = basis[r];
        double s = lp.rhs[r];
        for (std::size_t k = rows.begin(r); k < rows.end(r); ++k) {
            const std::size_t j = rows.index[k];
            if (j == jb || !is_basic[j]) continue;
            s -= rows.value[k] * sol.x[j];
        }
        sol.x[jb] = s / diag[jb];
    }
    sol.objective = objective_value(lp, sol.x);
    sol.status = LPStatus::optimal;
    return sol;
}

}  // namespace mfgstop
