#include "taildep/htsp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "taildep/error.hpp"

namespace taildep {

std::vector<double> simplex_project(std::span<const double> w) {
    const std::size_t p = w.size();
    if (p == 0) throw input_error("simplex_project: empty vector");

    std::vector<double> sorted(w.begin(), w.end());
    std::stable_sort(sorted.begin(), sorted.end(), std::greater<double>());

    double cumsum = 0.0, tau = 0.0;
    for (std::size_t b = 1; b <= p; ++b) {
        cumsum += sorted[b - 1];
        const double candidate = (cumsum - 1.0) / static_cast<double>(b);
        if (sorted[b - 1] > candidate) tau = candidate;
    }

    std::vector<double> out(p);
    for (std::size_t a = 0; a < p; ++a) out[a] = std::max(w[a] - tau, 0.0);
    return out;
}

std::vector<double> simplex_project_support(std::span<const double> w) {
    const std::size_t p = w.size();
    if (p == 0) throw input_error("simplex_project_support: empty vector");

    std::vector<std::size_t> support;
    std::vector<double> restricted;
    for (std::size_t a = 0; a < p; ++a) {
        if (w[a] > 0.0) {
            support.push_back(a);
            restricted.push_back(w[a]);
        }
    }
    if (support.empty()) throw input_error("simplex_project_support: all-zero vector");

    const std::vector<double> projected = simplex_project(restricted);
    std::vector<double> out(p, 0.0);
    for (std::size_t i = 0; i < support.size(); ++i) out[support[i]] = projected[i];
    return out;
}

Matrix initial_rows(const ChiMatrix& chi, const PureVarResult& pv) {
    const std::size_t d = chi.d(), k = pv.k_hat;
    std::vector<std::size_t> block_of(d, k);  // k = not pure
    for (std::size_t a = 0; a < k; ++a) {
        if (pv.partition[a].empty())
            throw std::logic_error("initial_rows: empty partition block");
        for (const std::size_t j : pv.partition[a]) block_of[j] = a;
    }

    Matrix m(d, k, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        if (block_of[j] < k) {
            m(j, block_of[j]) = 1.0;
            continue;
        }
        for (std::size_t a = 0; a < k; ++a) {
            double sum = 0.0;
            for (const std::size_t l : pv.partition[a]) sum += chi(j, l);
            m(j, a) = std::clamp(sum / static_cast<double>(pv.partition[a].size()), 0.0, 1.0);
        }
    }
    return m;
}

Matrix hard_threshold(const Matrix& m, double kappa, std::span<const std::size_t> pure_rows,
                      std::vector<std::size_t>* fallback_rows) {
    const std::size_t d = m.rows(), k = m.cols();
    std::vector<char> is_pure(d, 0);
    for (const std::size_t j : pure_rows) is_pure[j] = 1;

    Matrix out(d, k, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        if (is_pure[j]) {
            for (std::size_t a = 0; a < k; ++a) out(j, a) = m(j, a);
            continue;
        }
        bool survived = false;
        for (std::size_t a = 0; a < k; ++a) {
            if (m(j, a) > kappa) {
                out(j, a) = m(j, a);
                survived = true;
            }
        }
        if (!survived) {
            std::size_t arg_max = 0;
            for (std::size_t a = 1; a < k; ++a)
                if (m(j, a) > m(j, arg_max)) arg_max = a;
            out(j, arg_max) = m(j, arg_max);
            if (fallback_rows) fallback_rows->push_back(j);
        }
    }
    return out;
}

HtspEstimate htsp(const ChiMatrix& chi, double kappa, bool use_greedy_clique) {
    PureVarResult pv = pure_var(chi, kappa, use_greedy_clique);

    const Matrix first = initial_rows(chi, pv);
    std::vector<std::size_t> fallback;
    Matrix thresholded = hard_threshold(first, kappa, pv.pure_set, &fallback);

    const std::size_t d = thresholded.rows(), k = thresholded.cols();
    std::vector<char> is_pure(d, 0);
    for (const std::size_t j : pv.pure_set) is_pure[j] = 1;

    std::size_t s_hat = 1;
    for (std::size_t j = 0; j < d; ++j) {
        if (!is_pure[j]) {
            const std::vector<double> projected =
                simplex_project_support({thresholded.row(j), k});
            std::copy(projected.begin(), projected.end(), thresholded.row(j));
        }
        std::size_t nonzero = 0;
        for (std::size_t a = 0; a < k; ++a)
            if (thresholded(j, a) > kSupportTol) ++nonzero;
        s_hat = std::max(s_hat, nonzero);
    }

    return HtspEstimate{LoadingMatrix(std::move(thresholded)), std::move(pv), s_hat, kappa,
                        std::move(fallback)};
}

}  // namespace taildep
