#include "taildep/chi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "taildep/error.hpp"
#include "taildep/kernels.hpp"
#include "taildep/rng.hpp"

namespace taildep {

RankMatrix compute_ranks(const DataMatrix& data, std::uint64_t seed) {
    const std::size_t n = data.n(), d = data.d();
    const Matrix& x = data.values();
    RankMatrix ranks(n, d);

    std::vector<std::uint32_t> order(n);
    for (std::size_t j = 0; j < d; ++j) {
        std::iota(order.begin(), order.end(), 0u);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::uint32_t a, std::uint32_t b) { return x(a, j) < x(b, j); });

        // Each column gets its own sub-stream so columns can be processed in
        // any order without changing the result.
        Rng rng(derive_seed(seed, j));
        std::size_t run_start = 0;
        while (run_start < n) {
            std::size_t run_end = run_start + 1;
            while (run_end < n && x(order[run_end], j) == x(order[run_start], j)) ++run_end;
            if (run_end - run_start > 1) rng.shuffle(order, run_start, run_end);
            run_start = run_end;
        }

        for (std::size_t p = 0; p < n; ++p)
            ranks(order[p], j) = static_cast<std::uint32_t>(p + 1);
    }
    return ranks;
}

namespace {

// One bitmask per column: bit i set iff rank(i, j) > n - k. Every column
// has exactly k set bits.
std::vector<std::uint64_t> exceedance_masks(const RankMatrix& ranks, std::size_t k,
                                            std::size_t& words_per_col) {
    const std::size_t n = ranks.n(), d = ranks.d();
    words_per_col = (n + 63) / 64;
    std::vector<std::uint64_t> masks(d * words_per_col, 0);
    const std::uint32_t cut = static_cast<std::uint32_t>(n - k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if (ranks(i, j) > cut)
                masks[j * words_per_col + (i >> 6)] |= std::uint64_t{1} << (i & 63);
        }
    }
    return masks;
}

}  // namespace

ChiMatrix empirical_chi(const DataMatrix& data, std::size_t k, std::uint64_t seed) {
    return empirical_chi(compute_ranks(data, seed), k);
}

ChiMatrix empirical_chi(const RankMatrix& ranks, std::size_t k) {
    const std::size_t n = ranks.n(), d = ranks.d();
    if (k < 1 || k > n)
        throw parameter_error("empirical_chi: k must be in [1, n], got k=" + std::to_string(k) +
                              " with n=" + std::to_string(n));

    std::size_t words = 0;
    const std::vector<std::uint64_t> masks = exceedance_masks(ranks, k, words);

    Matrix chi(d, d, 0.0);
    const double inv_k = 1.0 / static_cast<double>(k);
    for (std::size_t j = 0; j < d; ++j) {
        chi(j, j) = 1.0;
        const std::uint64_t* mj = masks.data() + j * words;
        for (std::size_t l = j + 1; l < d; ++l) {
            const std::uint64_t* ml = masks.data() + l * words;
            const double v = static_cast<double>(kernels::co_count(mj, ml, words)) * inv_k;
            chi(j, l) = v;
            chi(l, j) = v;
        }
    }
    return ChiMatrix(std::move(chi), k);
}

ChiMatrix population_chi(const LoadingMatrix& A) {
    const std::size_t d = A.d(), k = A.factors();
    Matrix chi(d, d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        chi(j, j) = 1.0;
        for (std::size_t l = j + 1; l < d; ++l) {
            const double v = std::min(1.0, kernels::min_sum(A.row(j), A.row(l), k));
            chi(j, l) = v;
            chi(l, j) = v;
        }
    }
    return ChiMatrix(std::move(chi), 0);
}

double stdf_eval(const LoadingMatrix& A, std::span<const double> x) {
    const std::size_t d = A.d(), k = A.factors();
    if (x.size() != d)
        throw input_error("stdf_eval: x has length " + std::to_string(x.size()) +
                          ", expected " + std::to_string(d));
    for (const double v : x)
        if (!(v >= 0.0)) throw input_error("stdf_eval: x must be entrywise nonnegative");

    double total = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        double col_max = 0.0;
        for (std::size_t j = 0; j < d; ++j) col_max = std::max(col_max, A(j, a) * x[j]);
        total += col_max;
    }
    return total;
}

ChiMatrix preasymptotic_chi_maxlinear(const LoadingMatrix& A, double t) {
    if (!(t > 1.0)) throw parameter_error("preasymptotic_chi_maxlinear: t must exceed 1");
    const std::size_t d = A.d(), k = A.factors();
    const double log_term = std::log1p(-1.0 / t);
    Matrix chi(d, d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        chi(j, j) = 1.0;
        for (std::size_t l = j + 1; l < d; ++l) {
            const double c = kernels::max_sum(A.row(j), A.row(l), k);
            // 2 - t + t*exp(c*ln(1-1/t)), via expm1 for accuracy at large t.
            const double v = std::clamp(2.0 + t * std::expm1(c * log_term), 0.0, 1.0);
            chi(j, l) = v;
            chi(l, j) = v;
        }
    }
    return ChiMatrix(std::move(chi), 0);
}

}  // namespace taildep
