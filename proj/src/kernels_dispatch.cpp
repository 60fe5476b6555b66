#include <atomic>
#include <cstdlib>
#include <cstring>

#include "taildep/kernels.hpp"

namespace taildep::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa detect() {
    if (const char* env = std::getenv("TAILDEP_ISA")) {
        if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
        if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Isa::avx2;
    }
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& isa_state() {
    static std::atomic<Isa> state{detect()};
    return state;
}

}  // namespace

Isa active_isa() { return isa_state().load(std::memory_order_relaxed); }

bool avx2_available() { return cpu_has_avx2(); }

bool set_isa(Isa isa) {
    if (isa == Isa::avx2 && !cpu_has_avx2()) return false;
    isa_state().store(isa, std::memory_order_relaxed);
    return true;
}

std::uint64_t co_count(const std::uint64_t* a, const std::uint64_t* b, std::size_t nwords) {
#if defined(__x86_64__) || defined(_M_X64)
    if (active_isa() == Isa::avx2) return avx2::co_count(a, b, nwords);
#endif
    return scalar::co_count(a, b, nwords);
}

double min_sum(const double* x, const double* y, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
    if (active_isa() == Isa::avx2) return avx2::min_sum(x, y, n);
#endif
    return scalar::min_sum(x, y, n);
}

double max_sum(const double* x, const double* y, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
    if (active_isa() == Isa::avx2) return avx2::max_sum(x, y, n);
#endif
    return scalar::max_sum(x, y, n);
}

}  // namespace taildep::kernels
