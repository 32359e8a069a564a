#include "mfgstop/state_chains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mfgstop/error.hpp"
#include "mfgstop/kernels.hpp"

namespace mfgstop {

double DiffusionParams::delta_from_std(DiffusionKind kind, double k, double theta, double stdev) {
    if (kind == DiffusionKind::cir) return stdev * std::sqrt(2.0 * k / theta);
    const double denom = theta * (1.0 - theta) - stdev * stdev;
    if (!(denom > 0.0)) {
        fail(ErrorCategory::config,
             fmt::format("jacobi: std {} too large for long-run mean {}", stdev, theta));
    }
    return stdev * std::sqrt(2.0 * k / denom);
}

double DiffusionParams::variance(double x) const {
    if (kind == DiffusionKind::cir) return delta * delta * std::max(x, 0.0);
    return delta * delta * std::max(x * (1.0 - x), 0.0);
}

void DiffusionParams::validate() const {
    if (!(k > 0.0)) fail(ErrorCategory::config, "diffusion: mean reversion must be positive");
    if (!(delta > 0.0)) fail(ErrorCategory::config, "diffusion: volatility must be positive");
    if (!(min < max)) fail(ErrorCategory::config, "diffusion: empty range");
    if (!(dt > 0.0)) fail(ErrorCategory::config, "diffusion: dt must be positive");
    if (kind == DiffusionKind::jacobi && (min < 0.0 || max > 1.0)) {
        fail(ErrorCategory::config, "diffusion: jacobi range must lie in [0,1]");
    }
    if (kind == DiffusionKind::cir && min < 0.0) {
        fail(ErrorCategory::config, "diffusion: cir range must be nonnegative");
    }
}

GridStep grid_step(const DiffusionParams& params) {
    params.validate();
    const double sigma = std::sqrt(params.variance(params.theta));
    const double ratio = (params.max - params.min) / (sigma * std::sqrt(params.dt));
    const double n = std::floor(ratio);
    if (!(n >= 1.0) || !std::isfinite(ratio)) {
        fail(ErrorCategory::config,
             fmt::format("diffusion: range [{}, {}] too small for volatility (n = 0)", params.min,
                         params.max));
    }
    if (n > 1e6) fail(ErrorCategory::config, "diffusion: grid exceeds 1e6 points");
    return {(params.max - params.min) / n, static_cast<int>(n)};
}

GridChain build_chain(const DiffusionParams& params) {
    const GridStep step = grid_step(params);
    const std::size_t size = static_cast<std::size_t>(step.n) + 1;

    GridChain chain;
    chain.grid.resize(size);
    for (std::size_t i = 0; i < size; ++i) {
        chain.grid[i] = params.min + static_cast<double>(i) * step.dx;
    }
    chain.grid.back() = params.max;

    chain.transition.assign(size * size, 0.0);
    auto at = [&](std::size_t r, std::size_t c) -> double& { return chain.transition[r * size + c]; };
    at(0, 1) = 1.0;
    at(size - 1, size - 2) = 1.0;
    for (std::size_t i = 1; i + 1 < size; ++i) {
        const double x = chain.grid[i];
        const double b = params.drift(x);
        const double s2 = params.variance(x);
        const double denom = s2 + step.dx * std::abs(b);
        if (!(denom > 0.0)) {
            fail(ErrorCategory::model, fmt::format("diffusion: degenerate interior state {}", x));
        }
        at(i, i + 1) = (s2 / 2.0 + step.dx * std::max(b, 0.0)) / denom;
        at(i, i - 1) = (s2 / 2.0 - step.dx * std::min(b, 0.0)) / denom;
    }
    chain.initial = initial_distribution(params, chain.grid);
    return chain;
}

std::vector<double> initial_distribution(const DiffusionParams& params,
                                         const std::vector<double>& grid) {
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    const double d2 = params.delta * params.delta;
    std::vector<double> logd(grid.size(), neg_inf);

    if (params.kind == DiffusionKind::cir) {
        const double shape = 2.0 * params.theta * params.k / d2;
        const double scale = d2 / (2.0 * params.k);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double x = grid[i];
            if (x < 0.0) continue;
            if (x == 0.0) {
                if (shape > 1.0) continue;
                if (shape < 1.0) {
                    fail(ErrorCategory::model, "gamma density is unbounded at grid point 0");
                }
                logd[i] = 0.0;
                continue;
            }
            logd[i] = (shape - 1.0) * std::log(x) - x / scale;
        }
    } else {
        const double a = 2.0 * params.k * params.theta / d2;
        const double b = 2.0 * params.k * (1.0 - params.theta) / d2;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double x = grid[i];
            if (x <= 0.0 || x >= 1.0) {
                fail(ErrorCategory::config,
                     fmt::format("beta density requested at grid endpoint {}", x));
            }
            logd[i] = (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x);
        }
    }

    const double peak = *std::max_element(logd.begin(), logd.end());
    if (!std::isfinite(peak)) {
        fail(ErrorCategory::model, "stationary density vanishes on every grid point");
    }
    std::vector<double> w(grid.size());
    double total = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        w[i] = std::exp(logd[i] - peak);
        total += w[i];
    }
    for (double& v : w) v /= total;
    return w;
}

std::vector<double> step_law(const GridChain& chain, const std::vector<double>& law) {
    std::vector<double> out(chain.size());
    kernels::vecmat(law, chain.transition, out);
    return out;
}

std::vector<double> marginal_law(const GridChain& chain, int t) {
    if (t < 0) fail(ErrorCategory::model, "marginal_law: negative time");
    std::vector<double> law = chain.initial;
    for (int s = 0; s < t; ++s) law = step_law(chain, law);
    return law;
}

void to_json(nlohmann::json& j, const GridChain& chain) {
    const std::size_t n = chain.size();
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < n; ++r) {
        rows.push_back(std::vector<double>(chain.transition.begin() + static_cast<std::ptrdiff_t>(r * n),
                                           chain.transition.begin() + static_cast<std::ptrdiff_t>((r + 1) * n)));
    }
    j = nlohmann::json{{"grid", chain.grid}, {"transition", std::move(rows)}, {"initial", chain.initial}};
}

void to_json(nlohmann::json& j, const DiffusionParams& params) {
    j = nlohmann::json{
        {"kind", params.kind == DiffusionKind::cir ? "cir" : "jacobi"},
        {"k", params.k},
        {"theta", params.theta},
        {"delta", params.delta},
        {"min", params.min},
        {"max", params.max},
        {"dt", params.dt},
    };
}

void from_json(const nlohmann::json& j, DiffusionParams& params) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "cir") {
        params.kind = DiffusionKind::cir;
    } else if (kind == "jacobi") {
        params.kind = DiffusionKind::jacobi;
    } else {
        fail(ErrorCategory::config, fmt::format("diffusion: unknown kind '{}'", kind));
    }
    j.at("k").get_to(params.k);
    j.at("theta").get_to(params.theta);
    j.at("delta").get_to(params.delta);
    j.at("min").get_to(params.min);
    j.at("max").get_to(params.max);
    j.at("dt").get_to(params.dt);
}

}  // namespace mfgstop
