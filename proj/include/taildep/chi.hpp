#pragma once

#include <cstdint>
#include <span>

#include "taildep/types.hpp"

namespace taildep {

/// Column-wise ranks (1-based). Ties are broken by a seeded uniform random
/// permutation within each tied group; output is deterministic given the
/// seed and invariant under strictly increasing column transforms.
RankMatrix compute_ranks(const DataMatrix& data, std::uint64_t seed);

/// Empirical tail-correlation matrix at exceedance count k:
/// chi(j,l) = (1/k) * #{i : R_ij > n-k and R_il > n-k}, diagonal forced to 1.
ChiMatrix empirical_chi(const DataMatrix& data, std::size_t k, std::uint64_t seed);

/// Same, on precomputed ranks (saves re-ranking when sweeping k).
ChiMatrix empirical_chi(const RankMatrix& ranks, std::size_t k);

/// Population tail-correlation matrix of a max-linear model:
/// chi(j,l) = sum_a min(A_ja, A_la), diagonal forced to 1. k_used = 0.
ChiMatrix population_chi(const LoadingMatrix& A);

/// Max-linear stable tail dependence function: sum_a max_j A_ja * x_j.
double stdf_eval(const LoadingMatrix& A, std::span<const double> x);

/// Pre-asymptotic tail correlation of the max-linear model with Frechet
/// factors at finite threshold level t > 1:
///   chi_t(j,l) = 2 - t + t * exp( ln(1 - 1/t) * sum_a max(A_ja, A_la) ).
/// Converges to population_chi(A) as t -> infinity, with
/// |chi_t - chi| <= (1 - chi)/t entrywise.
ChiMatrix preasymptotic_chi_maxlinear(const LoadingMatrix& A, double t);

}  // namespace taildep
