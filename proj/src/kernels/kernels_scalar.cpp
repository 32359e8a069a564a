#include "mfgstop/detail/merit_curves.hpp"
#include "mfgstop/kernels.hpp"

namespace mfgstop::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void axpby_scalar(double alpha, const double* x, double beta, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = alpha * x[i] + beta * y[i];
}

void matvec_scalar(const double* a, const double* x, double* y, std::size_t rows,
                   std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) y[r] = dot_scalar(a + r * cols, x, cols);
}

void vecmat_scalar(const double* x, const double* a, double* y, std::size_t rows,
                   std::size_t cols) {
    for (std::size_t c = 0; c < cols; ++c) y[c] = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        if (x[r] == 0.0) continue;
        axpy_scalar(x[r], a + r * cols, y, cols);
    }
}

void stop_or_continue_scalar(const double* cont, const double* stop, double* value,
                             std::uint8_t* stop_flag, std::size_t n, bool prefer_stop) {
    for (std::size_t i = 0; i < n; ++i) {
        const bool s = prefer_stop ? stop[i] >= cont[i] : stop[i] > cont[i];
        stop_flag[i] = s ? 1 : 0;
        value[i] = s ? stop[i] : cont[i];
    }
}

double utilization_dot_scalar(const double* cost, const double* weight, double shift,
                              double c_max, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (weight[i] == 0.0) continue;
        s += detail::alpha_bar(shift - cost[i], c_max) * weight[i];
    }
    return s;
}

void gain_scalar(const double* margin, double* out, double c_max, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = detail::gain(margin[i], c_max);
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{
        "scalar",         dot_scalar,         axpy_scalar,
        axpby_scalar,     matvec_scalar,      vecmat_scalar,
        stop_or_continue_scalar, utilization_dot_scalar, gain_scalar,
    };
    return table;
}

}  // namespace mfgstop::kernels
