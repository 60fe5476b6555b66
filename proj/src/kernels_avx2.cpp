// AVX2 kernel variants. Compiled with -mavx2; only reached through dispatch
// after the CPU check in kernels_dispatch.cpp.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>

#include "taildep/kernels.hpp"

namespace taildep::kernels::avx2 {

namespace {

// Nibble-LUT byte popcount (Mula), reduced to four u64 lane counts.
inline __m256i popcount_words(__m256i v) {
    const __m256i lookup =
        _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                         0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    const __m256i lo = _mm256_and_si256(v, low_mask);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi32(v, 4), low_mask);
    const __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo),
                                        _mm256_shuffle_epi8(lookup, hi));
    return _mm256_sad_epu8(cnt, _mm256_setzero_si256());
}

// (s0 + s2) + (s1 + s3), matching the scalar reference order.
inline double hsum(__m256d acc) {
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(pair) + _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
}

}  // namespace

std::uint64_t co_count(const std::uint64_t* a, const std::uint64_t* b, std::size_t nwords) {
    __m256i acc = _mm256_setzero_si256();
    const std::size_t q = nwords & ~std::size_t{3};
    std::size_t i = 0;
    for (; i < q; i += 4) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        acc = _mm256_add_epi64(acc, popcount_words(_mm256_and_si256(va, vb)));
    }
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::uint64_t count = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < nwords; ++i) count += static_cast<std::uint64_t>(_mm_popcnt_u64(a[i] & b[i]));
    return count;
}

double min_sum(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t q = n & ~std::size_t{3};
    std::size_t i = 0;
    for (; i < q; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vy = _mm256_loadu_pd(y + i);
        acc = _mm256_add_pd(acc, _mm256_min_pd(vx, vy));
    }
    double r = hsum(acc);
    for (; i < n; ++i) r += std::min(x[i], y[i]);
    return r;
}

double max_sum(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t q = n & ~std::size_t{3};
    std::size_t i = 0;
    for (; i < q; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vy = _mm256_loadu_pd(y + i);
        acc = _mm256_add_pd(acc, _mm256_max_pd(vx, vy));
    }
    double r = hsum(acc);
    for (; i < n; ++i) r += std::max(x[i], y[i]);
    return r;
}

}  // namespace taildep::kernels::avx2

#endif  // x86-64
