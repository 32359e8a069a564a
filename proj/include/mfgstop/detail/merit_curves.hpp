#pragma once

#include <cmath>
#include <numbers>

namespace mfgstop::detail {

// Capacity utilization of a producer whose margin (price minus baseline and
// carbon cost) is y; rises from 0 at y=0 to 1 at y=c_max along a half sine.
inline double alpha_bar(double y, double c_max) {
    if (y <= 0.0) return 0.0;
    if (y > c_max) return 1.0;
    return 0.5 * (1.0 + std::sin(-std::numbers::pi / 2.0 + std::numbers::pi * y / c_max));
}

// Integral of alpha_bar from 0 to x.
inline double gain(double x, double c_max) {
    if (x <= 0.0) return 0.0;
    if (x > c_max) return x - c_max / 2.0;
    return 0.5 * (x - (c_max / std::numbers::pi) *
                          std::cos(-std::numbers::pi / 2.0 + std::numbers::pi * x / c_max));
}

}  // namespace mfgstop::detail
