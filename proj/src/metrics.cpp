#include "taildep/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "taildep/error.hpp"

namespace taildep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Jonker-Volgenant style shortest augmenting path solver, 1-based internals.
std::vector<std::size_t> lap_solve(const Matrix& cost) {
    const int n = static_cast<int>(cost.rows());
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0), way(n + 1, 0);

    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            int j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0);
    }

    std::vector<std::size_t> row_to_col(n);
    for (int j = 1; j <= n; ++j)
        if (match[j]) row_to_col[match[j] - 1] = static_cast<std::size_t>(j - 1);
    return row_to_col;
}

double perm_cost(const Matrix& cost, const std::vector<std::size_t>& perm) {
    double total = 0.0;
    for (std::size_t a = 0; a < perm.size(); ++a) total += cost(a, perm[a]);
    return total;
}

// Optimal assignment cost over rows [first_row, K) and the unused columns.
double completion_cost(const Matrix& cost, std::size_t first_row,
                       const std::vector<char>& used_cols) {
    const std::size_t k = cost.rows();
    const std::size_t m = k - first_row;
    if (m == 0) return 0.0;
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < k; ++c)
        if (!used_cols[c]) cols.push_back(c);
    Matrix sub(m, m, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) sub(r, c) = cost(first_row + r, cols[c]);
    return perm_cost(sub, lap_solve(sub));
}

double row_l2_distance(const Matrix& a, const Matrix& b, std::size_t j) {
    double sq = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) {
        const double diff = a(j, c) - b(j, c);
        sq += diff * diff;
    }
    return std::sqrt(sq);
}

double max_row_l2(const Matrix& a, const Matrix& b) {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.rows(); ++j) worst = std::max(worst, row_l2_distance(a, b, j));
    return worst;
}

Matrix permute_columns(const Matrix& m, const std::vector<std::size_t>& perm) {
    Matrix out(m.rows(), m.cols(), 0.0);
    for (std::size_t j = 0; j < m.rows(); ++j)
        for (std::size_t a = 0; a < m.cols(); ++a) out(j, a) = m(j, perm[a]);
    return out;
}

}  // namespace

std::vector<std::size_t> hungarian(const Matrix& cost) {
    const std::size_t k = cost.rows();
    if (k == 0 || cost.cols() != k) throw input_error("hungarian: cost matrix must be square");
    for (std::size_t i = 0; i < cost.size(); ++i)
        if (!std::isfinite(cost.data()[i]))
            throw input_error("hungarian: cost matrix has non-finite entries");

    const double best = perm_cost(cost, lap_solve(cost));
    const double tol = 1e-9 * std::max(1.0, std::abs(best));

    // Fix assignments row by row, taking the smallest column that still
    // admits an optimal completion.
    std::vector<std::size_t> perm(k);
    std::vector<char> used(k, 0);
    double prefix = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        bool fixed = false;
        for (std::size_t c = 0; c < k && !fixed; ++c) {
            if (used[c]) continue;
            used[c] = 1;
            const double total = prefix + cost(i, c) + completion_cost(cost, i + 1, used);
            if (total <= best + tol) {
                perm[i] = c;
                prefix += cost(i, c);
                fixed = true;
            } else {
                used[c] = 0;
            }
        }
        if (!fixed) throw std::logic_error("hungarian: no optimal completion found");
    }
    return perm;
}

std::pair<LoadingMatrix, std::vector<std::size_t>> align(const LoadingMatrix& estimate,
                                                         const LoadingMatrix& truth) {
    if (estimate.d() != truth.d() || estimate.factors() != truth.factors())
        throw input_error("align: shape mismatch between estimate and truth");
    const std::size_t d = estimate.d(), k = estimate.factors();

    Matrix cost(k, k, 0.0);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
            double sq = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = estimate(j, a) - truth(j, b);
                sq += diff * diff;
            }
            cost(a, b) = sq;
        }
    }
    std::vector<std::size_t> perm = hungarian(cost);
    return {LoadingMatrix(permute_columns(truth.values(), perm)), std::move(perm)};
}

double loss_inf2(const LoadingMatrix& estimate, const LoadingMatrix& truth) {
    if (estimate.factors() != truth.factors() || estimate.d() != truth.d()) return kInf;
    const auto [aligned, perm] = align(estimate, truth);
    return max_row_l2(estimate.values(), aligned.values());
}

double loss_inf2_exhaustive(const LoadingMatrix& estimate, const LoadingMatrix& truth) {
    if (estimate.factors() != truth.factors() || estimate.d() != truth.d()) return kInf;
    const std::size_t k = estimate.factors();
    if (k > 10) throw parameter_error("loss_inf2_exhaustive: K too large for enumeration");

    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = kInf;
    do {
        const Matrix permuted = permute_columns(truth.values(), perm);
        best = std::min(best, max_row_l2(estimate.values(), permuted));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::vector<std::vector<std::size_t>> extremal_directions(const LoadingMatrix& A) {
    std::vector<std::vector<std::size_t>> dirs(A.factors());
    for (std::size_t a = 0; a < A.factors(); ++a)
        for (std::size_t j = 0; j < A.d(); ++j)
            if (A(j, a) > kSupportTol) dirs[a].push_back(j);
    return dirs;
}

std::pair<double, double> tfnp_tfpp(const LoadingMatrix& estimate,
                                    const LoadingMatrix& aligned_truth) {
    if (estimate.d() != aligned_truth.d() || estimate.factors() != aligned_truth.factors())
        throw input_error("tfnp_tfpp: shape mismatch");
    const std::size_t d = estimate.d(), k = estimate.factors();

    std::size_t false_neg = 0, false_pos = 0, truth_size = 0, truth_complement = 0;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t j = 0; j < d; ++j) {
            const bool in_truth = aligned_truth(j, a) > kSupportTol;
            const bool in_estimate = estimate(j, a) > kSupportTol;
            truth_size += in_truth;
            truth_complement += !in_truth;
            false_neg += in_truth && !in_estimate;
            false_pos += !in_truth && in_estimate;
        }
    }
    const double tfnp =
        truth_size == 0 ? 0.0 : static_cast<double>(false_neg) / static_cast<double>(truth_size);
    const double tfpp = truth_complement == 0 ? 0.0
                                              : static_cast<double>(false_pos) /
                                                    static_cast<double>(truth_complement);
    return {tfnp, tfpp};
}

MetricsReport evaluate(const HtspEstimate& estimate, const LoadingMatrix& truth,
                       const std::vector<std::size_t>& true_pure_set, std::size_t true_s,
                       bool exhaustive_loss) {
    MetricsReport report;
    report.k_recovered = estimate.purevar.k_hat == truth.factors();
    report.s_recovered = estimate.s_hat == true_s;
    report.i_recovered = estimate.purevar.pure_set == true_pure_set;

    if (report.k_recovered) {
        auto [aligned, perm] = align(estimate.a_hat, truth);
        report.loss_inf2 = max_row_l2(estimate.a_hat.values(), aligned.values());
        const auto [tfnp, tfpp] = tfnp_tfpp(estimate.a_hat, aligned);
        report.tfnp = tfnp;
        report.tfpp = tfpp;
        report.permutation = std::move(perm);
        if (exhaustive_loss && truth.factors() <= 6)
            report.loss_inf2_exhaustive = loss_inf2_exhaustive(estimate.a_hat, truth);
    }
    return report;
}

}  // namespace taildep
