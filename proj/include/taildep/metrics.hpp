#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "taildep/htsp.hpp"
#include "taildep/types.hpp"

namespace taildep {

/// Per-replicate evaluation against ground truth. The alignment-dependent
/// fields (tfnp, tfpp, loss_inf2, permutation) are present iff the factor
/// count was recovered.
struct MetricsReport {
    bool k_recovered = false;
    bool s_recovered = false;
    bool i_recovered = false;
    std::optional<double> tfnp;
    std::optional<double> tfpp;
    std::optional<double> loss_inf2;
    std::optional<std::vector<std::size_t>> permutation;
    // Exhaustive minimum of the inf,2 loss over all column permutations;
    // filled on request for small K, as it can differ from the
    // Frobenius-aligned value above.
    std::optional<double> loss_inf2_exhaustive;
};

/// Minimum-cost assignment on a square cost matrix: returns the permutation
/// pi minimizing sum_a cost(a, pi(a)); among minimizers, the
/// lexicographically smallest sequence (pi(0), pi(1), ...).
std::vector<std::size_t> hungarian(const Matrix& cost);

/// Aligns truth's columns to the estimate by solving the assignment problem
/// on squared Euclidean column distances. Returns the permuted truth and the
/// permutation pi (column a of the result is truth column pi(a)).
std::pair<LoadingMatrix, std::vector<std::size_t>> align(const LoadingMatrix& estimate,
                                                         const LoadingMatrix& truth);

/// inf,2 loss between two loading matrices: +infinity when the factor counts
/// differ, otherwise the maximum row l2 distance after Hungarian column
/// alignment (squared-l2 column costs, the evaluation protocol).
double loss_inf2(const LoadingMatrix& estimate, const LoadingMatrix& truth);

/// Exact minimum over all column permutations of the maximum row l2
/// distance. Factorial-time; refuses K > 10.
double loss_inf2_exhaustive(const LoadingMatrix& estimate, const LoadingMatrix& truth);

/// Column supports: D_a = { j : A_ja > 1e-12 }, one per factor.
std::vector<std::vector<std::size_t>> extremal_directions(const LoadingMatrix& A);

/// Total false negative / false positive proportions of the estimated
/// extremal directions against an already-aligned truth. Zero denominators
/// yield 0.
std::pair<double, double> tfnp_tfpp(const LoadingMatrix& estimate,
                                    const LoadingMatrix& aligned_truth);

/// Full per-replicate report. When exhaustive_loss is set and the recovered
/// factor count is at most 6, the exhaustive inf,2 minimum is also computed.
MetricsReport evaluate(const HtspEstimate& estimate, const LoadingMatrix& truth,
                       const std::vector<std::size_t>& true_pure_set, std::size_t true_s,
                       bool exhaustive_loss = false);

}  // namespace taildep
