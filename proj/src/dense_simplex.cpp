#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "mfgstop/error.hpp"
#include "mfgstop/kernels.hpp"
#include "mfgstop/lp_problem.hpp"

namespace mfgstop {

namespace {

// Row-major tableau [A | I | b] with a reduced-cost row kept separately.
class Tableau {
  public:
    Tableau(const LPProblem& lp)
        : m_(lp.rows), n_(lp.cols), width_(lp.cols + lp.rows + 1), cells_(m_ * width_, 0.0),
          basis_(m_) {
        for (const auto& e : lp.entries) at(e.row, e.col) += e.value;
        for (std::size_t r = 0; r < m_; ++r) {
            at(r, n_ + r) = 1.0;
            at(r, width_ - 1) = lp.rhs[r];
            if (lp.rhs[r] < 0.0) {
                for (std::size_t c = 0; c < width_; ++c) at(r, c) = -at(r, c);
                at(r, n_ + r) = 1.0;
            }
            basis_[r] = n_ + r;
        }
        active_.assign(m_, true);
    }

    double& at(std::size_t r, std::size_t c) { return cells_[r * width_ + c]; }
    double at(std::size_t r, std::size_t c) const { return cells_[r * width_ + c]; }
    double rhs(std::size_t r) const { return at(r, width_ - 1); }
    std::size_t rows() const { return m_; }
    std::size_t structural() const { return n_; }
    std::size_t basis(std::size_t r) const { return basis_[r]; }
    bool active(std::size_t r) const { return active_[r]; }
    void deactivate(std::size_t r) { active_[r] = false; }

    void pivot(std::size_t pr, std::size_t pc, std::vector<double>& reduced, double& value) {
        double* prow = cells_.data() + pr * width_;
        const double inv = 1.0 / prow[pc];
        for (std::size_t c = 0; c < width_; ++c) prow[c] *= inv;
        prow[pc] = 1.0;
        std::span<const double> prow_span(prow, width_);
        for (std::size_t r = 0; r < m_; ++r) {
            if (r == pr) continue;
            double* row = cells_.data() + r * width_;
            const double f = row[pc];
            if (f == 0.0) continue;
            kernels::axpy(-f, prow_span, std::span<double>(row, width_));
            row[pc] = 0.0;
        }
        const double f = reduced[pc];
        if (f != 0.0) {
            kernels::axpy(-f, prow_span.first(width_ - 1), reduced);
            value += f * prow[width_ - 1];
            reduced[pc] = 0.0;
        }
        basis_[pr] = pc;
    }

  private:
    std::size_t m_, n_, width_;
    std::vector<double> cells_;
    std::vector<std::size_t> basis_;
    std::vector<bool> active_;
};

enum class PhaseResult { optimal, unbounded, iteration_limit };

struct PhaseRunner {
    const DenseSimplex::Options& opts;
    std::size_t& iterations;

    // Maximizes with the given reduced costs; columns >= allowed never enter.
    PhaseResult run(Tableau& tab, std::vector<double>& reduced, double& value,
                    std::size_t allowed) const {
        std::size_t degenerate = 0;
        while (true) {
            if (iterations >= opts.max_iterations) return PhaseResult::iteration_limit;
            const bool bland = degenerate >= opts.degenerate_run;
            std::size_t enter = allowed;
            double best = opts.tol;
            for (std::size_t c = 0; c < allowed; ++c) {
                if (reduced[c] > best) {
                    enter = c;
                    if (bland) break;
                    best = reduced[c];
                }
            }
            if (enter == allowed) return PhaseResult::optimal;

            std::size_t leave = tab.rows();
            double ratio = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < tab.rows(); ++r) {
                if (!tab.active(r)) continue;
                const double a = tab.at(r, enter);
                if (a <= opts.tol) continue;
                const double q = std::max(tab.rhs(r), 0.0) / a;
                if (q < ratio - opts.tol ||
                    (q <= ratio + opts.tol && leave < tab.rows() && bland &&
                     tab.basis(r) < tab.basis(leave))) {
                    ratio = q;
                    leave = r;
                }
            }
            if (leave == tab.rows()) return PhaseResult::unbounded;
            degenerate = ratio <= opts.tol ? degenerate + 1 : 0;
            tab.pivot(leave, enter, reduced, value);
            ++iterations;
        }
    }
};

}  // namespace

LPSolution DenseSimplex::solve(const LPProblem& lp) const {
    lp.validate();
    if (lp.rows * (lp.rows + lp.cols + 1) > opts_.max_cells) {
        fail(ErrorCategory::solver,
             fmt::format("dense simplex: {}x{} problem exceeds the tableau size limit", lp.rows,
                         lp.cols));
    }
    LPSolution sol;
    Tableau tab(lp);
    const std::size_t n = lp.cols;
    const std::size_t width = n + lp.rows;
    PhaseRunner runner{opts_, sol.iterations};

    // Phase I: maximize -sum(artificials).
    std::vector<double> reduced(width, 0.0);
    double value = 0.0;
    for (std::size_t r = 0; r < lp.rows; ++r) {
        for (std::size_t c = 0; c < n; ++c) reduced[c] += tab.at(r, c);
        value -= tab.rhs(r);
    }
    PhaseResult res = runner.run(tab, reduced, value, n);
    if (res == PhaseResult::iteration_limit) {
        sol.status = LPStatus::iteration_limit;
        return sol;
    }
    double scale = 1.0;
    for (double b : lp.rhs) scale = std::max(scale, std::abs(b));
    if (value < -1e-9 * scale) {
        sol.status = LPStatus::infeasible;
        return sol;
    }

    // Drive artificials out of the basis; rows where that fails are redundant.
    for (std::size_t r = 0; r < lp.rows; ++r) {
        if (tab.basis(r) < n) continue;
        std::size_t pc = n;
        double best = opts_.tol;
        for (std::size_t c = 0; c < n; ++c) {
            if (std::abs(tab.at(r, c)) > best) {
                best = std::abs(tab.at(r, c));
                pc = c;
            }
        }
        if (pc == n) {
            tab.deactivate(r);
        } else {
            tab.pivot(r, pc, reduced, value);
        }
    }

    // Phase II.
    std::fill(reduced.begin(), reduced.end(), 0.0);
    for (std::size_t c = 0; c < n; ++c) reduced[c] = lp.objective[c];
    value = 0.0;
    for (std::size_t r = 0; r < lp.rows; ++r) {
        if (!tab.active(r)) continue;
        const std::size_t b = tab.basis(r);
        if (b >= n) continue;
        const double cb = lp.objective[b];
        if (cb == 0.0) continue;
        for (std::size_t c = 0; c < n; ++c) reduced[c] -= cb * tab.at(r, c);
        value += cb * tab.rhs(r);
    }
    res = runner.run(tab, reduced, value, n);
    if (res != PhaseResult::optimal) {
        sol.status = res == PhaseResult::unbounded ? LPStatus::unbounded : LPStatus::iteration_limit;
        return sol;
    }

    sol.x.assign(n, 0.0);
    for (std::size_t r = 0; r < lp.rows; ++r) {
        if (!tab.active(r) || tab.basis(r) >= n) continue;
        const double v = tab.rhs(r);
        sol.x[tab.basis(r)] = v < 0.0 && v > -opts_.tol ? 0.0 : v;
    }
    sol.objective = objective_value(lp, sol.x);
    sol.status = LPStatus::optimal;
    return sol;
}

}  // namespace mfgstop
