#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

// Data-parallel inner loops shared by the solver modules.
//
// Every kernel has a scalar reference implementation and, on x86-64 hosts
// with AVX2+FMA, a vectorized variant. The variant is picked once at first
// use; set MFGSTOP_KERNELS=scalar in the environment to force the reference
// path.

namespace mfgstop::kernels {

struct KernelTable {
    const char* name;

    /// sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);

    /// y[i] = alpha * x[i] + y[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

    /// y[i] = alpha * x[i] + beta * y[i]
    void (*axpby)(double alpha, const double* x, double beta, double* y, std::size_t n);

    /// y = A x for a row-major rows x cols matrix.
    void (*matvec)(const double* a, const double* x, double* y, std::size_t rows,
                   std::size_t cols);

    /// y = x^T A for a row-major rows x cols matrix (y has cols entries).
    void (*vecmat)(const double* x, const double* a, double* y, std::size_t rows,
                   std::size_t cols);

    /// value[i] = max(cont[i], stop[i]); stop_flag[i] = 1 when stopping wins.
    /// Exact ties go to stopping when prefer_stop is set.
    void (*stop_or_continue)(const double* cont, const double* stop, double* value,
                             std::uint8_t* stop_flag, std::size_t n, bool prefer_stop);

    /// sum_i alpha_bar(shift - cost[i]) * weight[i] with the sine-shaped
    /// utilization curve saturating at c_max.
    double (*utilization_dot)(const double* cost, const double* weight, double shift,
                              double c_max, std::size_t n);

    /// out[i] = G(margin[i]), the integral of the utilization curve.
    void (*gain)(const double* margin, double* out, double c_max, std::size_t n);
};

const KernelTable& scalar_table();

/// nullptr when the variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

/// The table used by the library.
const KernelTable& active();

// Span wrappers over active().

double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void axpby(double alpha, std::span<const double> x, double beta, std::span<double> y);
void matvec(std::span<const double> a, std::span<const double> x, std::span<double> y);
void vecmat(std::span<const double> x, std::span<const double> a, std::span<double> y);
void stop_or_continue(std::span<const double> cont, std::span<const double> stop,
                      std::span<double> value, std::span<std::uint8_t> stop_flag,
                      bool prefer_stop);
double utilization_dot(std::span<const double> cost, std::span<const double> weight,
                       double shift, double c_max);
void gain(std::span<const double> margin, std::span<double> out, double c_max);

}  // namespace mfgstop::kernels
