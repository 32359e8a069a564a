#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace mfgstop {

struct LPEntry {
    std::size_t row;
    std::size_t col;
    double value;

    bool operator==(const LPEntry&) const = default;
};

// maximize objective . x subject to A x = rhs, x >= 0, with A given as
// coordinate triplets (duplicates are not allowed).
struct LPProblem {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<LPEntry> entries;
    std::vector<double> rhs;
    std::vector<double> objective;

    void validate() const;

    bool operator==(const LPProblem&) const = default;
};

/// max_r |(A x)_r - rhs_r|.
double row_residual(const LPProblem& lp, const std::vector<double>& x);

double objective_value(const LPProblem& lp, const std::vector<double>& x);

enum class LPStatus { optimal, infeasible, unbounded, iteration_limit };

const char* lp_status_name(LPStatus s);

struct LPSolution {
    LPStatus status = LPStatus::iteration_limit;
    double objective = 0.0;
    std::vector<double> x;
    std::size_t iterations = 0;
};

class LPSolver {
  public:
    virtual ~LPSolver() = default;
    virtual std::string name() const = 0;
    virtual LPSolution solve(const LPProblem& lp) const = 0;
};

// Two-phase tableau simplex, Dantzig pricing with a switch to Bland's rule
// after a run of degenerate pivots. Dense in rows x cols; for small LPs.
class DenseSimplex final : public LPSolver {
  public:
    struct Options {
        double tol = 1e-11;
        std::size_t max_iterations = 100000;
        std::size_t max_cells = 50'000'000;
        std::size_t degenerate_run = 50;
    };

    DenseSimplex() = default;
    explicit DenseSimplex(Options opts) : opts_(opts) {}

    std::string name() const override { return "dense"; }
    LPSolution solve(const LPProblem& lp) const override;

  private:
    Options opts_;
};

// Simplex restricted to staircase LPs: every row r owns the columns whose
// first nonzero is a positive entry in row r, all other entries are <= 0 and
// rhs >= 0. Any basis taking one owned column per row is then triangular and
// primal feasible, so the method moves between such bases only, pivoting in
// every row with a positive reduced cost at once, and stops when the duals
// are feasible. Optimal-stopping occupation LPs have this shape.
class StaircaseSimplex final : public LPSolver {
  public:
    struct Options {
        double tol = 1e-12;
        std::size_t max_iterations = 10000;
    };

    StaircaseSimplex() = default;
    explicit StaircaseSimplex(Options opts) : opts_(opts) {}

    std::string name() const override { return "staircase"; }
    LPSolution solve(const LPProblem& lp) const override;

  private:
    Options opts_;
};

// Hands the problem to an external program through the interchange files:
// writes <dir>/problem.{triplets,obj,rhs}, runs `command <dir>` and reads a
// whitespace-separated primal vector from <dir>/solution.txt.
class ExternalSolver final : public LPSolver {
  public:
    ExternalSolver(std::string command, std::string work_dir)
        : command_(std::move(command)), work_dir_(std::move(work_dir)) {}

    std::string name() const override { return "external"; }
    LPSolution solve(const LPProblem& lp) const override;

  private:
    std::string command_;
    std::string work_dir_;
};

/// "dense", "staircase", or "external:<command>" (work dir from the second argument).
std::unique_ptr<LPSolver> make_solver(const std::string& spec, const std::string& work_dir = {});

// Interchange files (documented in docs/lp_interchange.md).
void write_lp(const LPProblem& lp, const std::string& stem);
LPProblem read_lp(const std::string& stem);
void write_solution(const std::vector<double>& x, const std::string& path);
std::vector<double> read_solution(const std::string& path, std::size_t expected);

}  // namespace mfgstop
