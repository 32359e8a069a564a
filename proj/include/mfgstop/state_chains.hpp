#pragma once

#include <cstddef>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace mfgstop {

enum class DiffusionKind { cir, jacobi };

// Mean-reverting diffusion dX = k(theta - X)dt + sigma(X)dW with
// sigma(x) = delta*sqrt(x) (cir) or delta*sqrt(x(1-x)) (jacobi), restricted
// to [min, max] and sampled every dt years.
struct DiffusionParams {
    DiffusionKind kind = DiffusionKind::cir;
    double k = 0.0;
    double theta = 0.0;
    double delta = 0.0;
    double min = 0.0;
    double max = 0.0;
    double dt = 0.0;

    /// Volatility coefficient matching a target stationary standard deviation.
    static double delta_from_std(DiffusionKind kind, double k, double theta, double stdev);

    double drift(double x) const { return k * (theta - x); }
    double variance(double x) const;

    void validate() const;

    bool operator==(const DiffusionParams&) const = default;
};

struct GridStep {
    double dx;
    int n;
};

struct GridChain {
    std::vector<double> grid;
    std::vector<double> transition;  // row-major, size() x size()
    std::vector<double> initial;

    std::size_t size() const { return grid.size(); }
    double p(std::size_t from, std::size_t to) const { return transition[from * size() + to]; }
};

GridStep grid_step(const DiffusionParams& params);

GridChain build_chain(const DiffusionParams& params);

/// Stationary gamma (cir) or beta (jacobi) density sampled on the grid and normalized.
std::vector<double> initial_distribution(const DiffusionParams& params,
                                         const std::vector<double>& grid);

/// Law of X_t started from chain.initial.
std::vector<double> marginal_law(const GridChain& chain, int t);

/// One forward step: law * transition.
std::vector<double> step_law(const GridChain& chain, const std::vector<double>& law);

void to_json(nlohmann::json& j, const GridChain& chain);
void to_json(nlohmann::json& j, const DiffusionParams& params);
void from_json(const nlohmann::json& j, DiffusionParams& params);

}  // namespace mfgstop
