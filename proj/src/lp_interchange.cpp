#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "mfgstop/error.hpp"
#include "mfgstop/lp_problem.hpp"

namespace mfgstop {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCategory::io, fmt::format("cannot open '{}' for writing", path));
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCategory::io, fmt::format("cannot open '{}'", path));
    return in;
}

void write_vector(const std::vector<double>& v, const std::string& path) {
    auto out = open_out(path);
    for (double x : v) out << fmt::format("{:.17g}\n", x);
    if (!out) fail(ErrorCategory::io, fmt::format("write to '{}' failed", path));
}

std::vector<double> read_vector(const std::string& path, std::size_t expected) {
    auto in = open_in(path);
    std::vector<double> v;
    v.reserve(expected);
    double x;
    while (in >> x) v.push_back(x);
    if (!in.eof()) fail(ErrorCategory::io, fmt::format("'{}': malformed number", path));
    if (v.size() != expected) {
        fail(ErrorCategory::io,
             fmt::format("'{}': {} values, expected {}", path, v.size(), expected));
    }
    return v;
}

}  // namespace

void write_lp(const LPProblem& lp, const std::string& stem) {
    lp.validate();
    {
        auto out = open_out(stem + ".triplets");
        out << lp.rows << ' ' << lp.cols << ' ' << lp.entries.size() << '\n';
        for (const auto& e : lp.entries) out << fmt::format("{} {} {:.17g}\n", e.row, e.col, e.value);
        if (!out) fail(ErrorCategory::io, fmt::format("write to '{}.triplets' failed", stem));
    }
    write_vector(lp.objective, stem + ".obj");
    write_vector(lp.rhs, stem + ".rhs");
}

LPProblem read_lp(const std::string& stem) {
    LPProblem lp;
    {
        auto in = open_in(stem + ".triplets");
        std::size_t nnz = 0;
        if (!(in >> lp.rows >> lp.cols >> nnz)) {
            fail(ErrorCategory::io, fmt::format("'{}.triplets': bad header", stem));
        }
        lp.entries.resize(nnz);
        for (auto& e : lp.entries) {
            if (!(in >> e.row >> e.col >> e.value)) {
                fail(ErrorCategory::io, fmt::format("'{}.triplets': truncated", stem));
            }
        }
    }
    lp.objective = read_vector(stem + ".obj", lp.cols);
    lp.rhs = read_vector(stem + ".rhs", lp.rows);
    try {
        lp.validate();
    } catch (const MfgError& e) {
        fail(ErrorCategory::io, fmt::format("'{}': {}", stem, e.what()));
    }
    return lp;
}

void write_solution(const std::vector<double>& x, const std::string& path) {
    write_vector(x, path);
}

std::vector<double> read_solution(const std::string& path, std::size_t expected) {
    return read_vector(path, expected);
}

LPSolution ExternalSolver::solve(const LPProblem& lp) const {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(work_dir_, ec);
    if (ec) fail(ErrorCategory::io, fmt::format("cannot create '{}': {}", work_dir_, ec.message()));
    const std::string stem = (fs::path(work_dir_) / "problem").string();
    const std::string solution = (fs::path(work_dir_) / "solution.txt").string();
    fs::remove(solution, ec);
    write_lp(lp, stem);

    const std::string cmd = fmt::format("{} '{}'", command_, work_dir_);
    const int rc = std::system(cmd.c_str());
    if (rc != 0) fail(ErrorCategory::solver, fmt::format("external LP solver failed: `{}` returned {}", cmd, rc));

    LPSolution sol;
    sol.x = read_solution(solution, lp.cols);
    sol.objective = objective_value(lp, sol.x);
    sol.status = LPStatus::optimal;
    return sol;
}

}  // namespace mfgstop
