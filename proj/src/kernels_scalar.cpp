#include <algorithm>
#include <bit>

#include "taildep/kernels.hpp"

namespace taildep::kernels::scalar {

std::uint64_t co_count(const std::uint64_t* a, const std::uint64_t* b, std::size_t nwords) {
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < nwords; ++i) count += std::popcount(a[i] & b[i]);
    return count;
}

double min_sum(const double* x, const double* y, std::size_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    const std::size_t q = n & ~std::size_t{3};
    std::size_t i = 0;
    for (; i < q; i += 4) {
        s0 += std::min(x[i], y[i]);
        s1 += std::min(x[i + 1], y[i + 1]);
        s2 += std::min(x[i + 2], y[i + 2]);
        s3 += std::min(x[i + 3], y[i + 3]);
    }
    double r = (s0 + s2) + (s1 + s3);
    for (; i < n; ++i) r += std::min(x[i], y[i]);
    return r;
}

double max_sum(const double* x, const double* y, std::size_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    const std::size_t q = n & ~std::size_t{3};
    std::size_t i = 0;
    for (; i < q; i += 4) {
        s0 += std::max(x[i], y[i]);
        s1 += std::max(x[i + 1], y[i + 1]);
        s2 += std::max(x[i + 2], y[i + 2]);
        s3 += std::max(x[i + 3], y[i + 3]);
    }
    double r = (s0 + s2) + (s1 + s3);
    for (; i < n; ++i) r += std::max(x[i], y[i]);
    return r;
}

}  // namespace taildep::kernels::scalar
