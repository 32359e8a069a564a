// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be reached through avx2_table(), which checks the CPU first.

#include <immintrin.h>

#include <numbers>

#include "mfgstop/kernels.hpp"

namespace mfgstop::kernels {
namespace detail_avx2 {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

// Taylor polynomials on [-pi/2, pi/2]; truncation error below 2e-18.
inline __m256d sin_poly(__m256d x) {
    constexpr double c[] = {
        1.0,
        -1.0 / 6.0,
        1.0 / 120.0,
        -1.0 / 5040.0,
        1.0 / 362880.0,
        -1.0 / 39916800.0,
        1.0 / 6227020800.0,
        -1.0 / 1307674368000.0,
        1.0 / 355687428096000.0,
        -1.0 / 121645100408832000.0,
        1.0 / 51090942171709440000.0,
    };
    const __m256d x2 = _mm256_mul_pd(x, x);
    __m256d p = _mm256_set1_pd(c[10]);
    for (int k = 9; k >= 0; --k) p = _mm256_fmadd_pd(p, x2, _mm256_set1_pd(c[k]));
    return _mm256_mul_pd(p, x);
}

inline __m256d cos_poly(__m256d x) {
    constexpr double c[] = {
        1.0,
        -1.0 / 2.0,
        1.0 / 24.0,
        -1.0 / 720.0,
        1.0 / 40320.0,
        -1.0 / 3628800.0,
        1.0 / 479001600.0,
        -1.0 / 87178291200.0,
        1.0 / 20922789888000.0,
        -1.0 / 6402373705728000.0,
        1.0 / 2432902008176640000.0,
        -1.0 / 1124000727777607680000.0,
    };
    const __m256d x2 = _mm256_mul_pd(x, x);
    __m256d p = _mm256_set1_pd(c[11]);
    for (int k = 10; k >= 0; --k) p = _mm256_fmadd_pd(p, x2, _mm256_set1_pd(c[k]));
    return p;
}

// Phase -pi/2 + pi*y/c_max of the utilization curve, with y clamped to [0, c_max].
inline __m256d phase(__m256d y, double c_max) {
    const __m256d clamped =
        _mm256_min_pd(_mm256_max_pd(y, _mm256_setzero_pd()), _mm256_set1_pd(c_max));
    return _mm256_fmadd_pd(clamped, _mm256_set1_pd(std::numbers::pi / c_max),
                           _mm256_set1_pd(-std::numbers::pi / 2.0));
}

inline __m256d alpha_bar(__m256d y, double c_max) {
    const __m256d half = _mm256_set1_pd(0.5);
    __m256d a = _mm256_mul_pd(half, _mm256_add_pd(_mm256_set1_pd(1.0), sin_poly(phase(y, c_max))));
    const __m256d above = _mm256_cmp_pd(y, _mm256_set1_pd(c_max), _CMP_GT_OQ);
    const __m256d nonpos = _mm256_cmp_pd(y, _mm256_setzero_pd(), _CMP_LE_OQ);
    a = _mm256_blendv_pd(a, _mm256_set1_pd(1.0), above);
    return _mm256_blendv_pd(a, _mm256_setzero_pd(), nonpos);
}

inline double alpha_bar_1(double y, double c_max) {
    alignas(32) double buf[4];
    _mm256_store_pd(buf, alpha_bar(_mm256_set1_pd(y), c_max));
    return buf[0];
}

inline __m256d gain(__m256d x, double c_max) {
    const __m256d inner = _mm256_mul_pd(
        _mm256_set1_pd(0.5),
        _mm256_fnmadd_pd(_mm256_set1_pd(c_max / std::numbers::pi), cos_poly(phase(x, c_max)), x));
    const __m256d linear = _mm256_sub_pd(x, _mm256_set1_pd(c_max / 2.0));
    const __m256d above = _mm256_cmp_pd(x, _mm256_set1_pd(c_max), _CMP_GT_OQ);
    const __m256d nonpos = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_LE_OQ);
    __m256d g = _mm256_blendv_pd(inner, linear, above);
    return _mm256_blendv_pd(g, _mm256_setzero_pd(), nonpos);
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    if (i + 4 <= n) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        i += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void axpby(double alpha, const double* x, double beta, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    const __m256d vb = _mm256_set1_pd(beta);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d by = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), by));
    }
    for (; i < n; ++i) y[i] = alpha * x[i] + beta * y[i];
}

void matvec(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) y[r] = dot(a + r * cols, x, cols);
}

void vecmat(const double* x, const double* a, double* y, std::size_t rows, std::size_t cols) {
    for (std::size_t c = 0; c < cols; ++c) y[c] = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        if (x[r] == 0.0) continue;
        axpy(x[r], a + r * cols, y, cols);
    }
}

void stop_or_continue(const double* cont, const double* stop, double* value,
                      std::uint8_t* stop_flag, std::size_t n, bool prefer_stop) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d c = _mm256_loadu_pd(cont + i);
        const __m256d s = _mm256_loadu_pd(stop + i);
        const __m256d mask =
            prefer_stop ? _mm256_cmp_pd(s, c, _CMP_GE_OQ) : _mm256_cmp_pd(s, c, _CMP_GT_OQ);
        _mm256_storeu_pd(value + i, _mm256_blendv_pd(c, s, mask));
        const int bits = _mm256_movemask_pd(mask);
        for (int k = 0; k < 4; ++k) stop_flag[i + k] = static_cast<std::uint8_t>((bits >> k) & 1);
    }
    for (; i < n; ++i) {
        const bool s = prefer_stop ? stop[i] >= cont[i] : stop[i] > cont[i];
        stop_flag[i] = s ? 1 : 0;
        value[i] = s ? stop[i] : cont[i];
    }
}

double utilization_dot(const double* cost, const double* weight, double shift, double c_max,
                       std::size_t n) {
    const __m256d vshift = _mm256_set1_pd(shift);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d y = _mm256_sub_pd(vshift, _mm256_loadu_pd(cost + i));
        acc = _mm256_fmadd_pd(alpha_bar(y, c_max), _mm256_loadu_pd(weight + i), acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        if (weight[i] == 0.0) continue;
        s += alpha_bar_1(shift - cost[i], c_max) * weight[i];
    }
    return s;
}

void gain_batch(const double* margin, double* out, double c_max, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, gain(_mm256_loadu_pd(margin + i), c_max));
    if (i < n) {
        alignas(32) double in[4] = {0.0, 0.0, 0.0, 0.0};
        alignas(32) double res[4];
        for (std::size_t k = 0; i + k < n; ++k) in[k] = margin[i + k];
        _mm256_store_pd(res, gain(_mm256_load_pd(in), c_max));
        for (std::size_t k = 0; i + k < n; ++k) out[i + k] = res[k];
    }
}

}  // namespace detail_avx2

const KernelTable& avx2_table_unchecked() {
    static const KernelTable table{
        "avx2",
        detail_avx2::dot,
        detail_avx2::axpy,
        detail_avx2::axpby,
        detail_avx2::matvec,
        detail_avx2::vecmat,
        detail_avx2::stop_or_continue,
        detail_avx2::utilization_dot,
        detail_avx2::gain_batch,
    };
    return table;
}

}  // namespace mfgstop::kernels
