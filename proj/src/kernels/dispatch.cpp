#include <cassert>
#include <cstdlib>
#include <string_view>

#include "mfgstop/kernels.hpp"

namespace mfgstop::kernels {

#if defined(MFGSTOP_HAVE_AVX2)
const KernelTable& avx2_table_unchecked();
#endif

const KernelTable* avx2_table() {
#if defined(MFGSTOP_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &avx2_table_unchecked() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() {
    static const KernelTable& table = []() -> const KernelTable& {
        const char* forced = std::getenv("MFGSTOP_KERNELS");
        if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_table();
        if (const KernelTable* t = avx2_table()) return *t;
        return scalar_table();
    }();
    return table;
}

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return active().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    active().axpy(alpha, x.data(), y.data(), x.size());
}

void axpby(double alpha, std::span<const double> x, double beta, std::span<double> y) {
    assert(x.size() == y.size());
    active().axpby(alpha, x.data(), beta, y.data(), x.size());
}

void matvec(std::span<const double> a, std::span<const double> x, std::span<double> y) {
    assert(a.size() == x.size() * y.size());
    active().matvec(a.data(), x.data(), y.data(), y.size(), x.size());
}

void vecmat(std::span<const double> x, std::span<const double> a, std::span<double> y) {
    assert(a.size() == x.size() * y.size());
    active().vecmat(x.data(), a.data(), y.data(), x.size(), y.size());
}

void stop_or_continue(std::span<const double> cont, std::span<const double> stop,
                      std::span<double> value, std::span<std::uint8_t> stop_flag,
                      bool prefer_stop) {
    assert(cont.size() == stop.size() && value.size() == cont.size() &&
           stop_flag.size() == cont.size());
    active().stop_or_continue(cont.data(), stop.data(), value.data(), stop_flag.data(),
                              cont.size(), prefer_stop);
}

double utilization_dot(std::span<const double> cost, std::span<const double> weight,
                       double shift, double c_max) {
    assert(cost.size() == weight.size());
    return active().utilization_dot(cost.data(), weight.data(), shift, c_max, cost.size());
}

void gain(std::span<const double> margin, std::span<double> out, double c_max) {
    assert(margin.size() == out.size());
    active().gain(margin.data(), out.data(), c_max, margin.size());
}

}  // namespace mfgstop::kernels
