#pragma once

#include <span>
#include <vector>

#include "taildep/purevar.hpp"
#include "taildep/types.hpp"

namespace taildep {

/// Final estimate of the loading matrix together with the pure-variable
/// structure it was built from. Rows listed in fallback_rows had every entry
/// removed by thresholding and were rescued by restoring their largest
/// pre-threshold entry.
struct HtspEstimate {
    LoadingMatrix a_hat;
    PureVarResult purevar;
    std::size_t s_hat = 0;
    double kappa_used = 0.0;
    std::vector<std::size_t> fallback_rows;
};

/// Euclidean projection onto the unit simplex:
/// P(w)_a = max(w_a - tau, 0) with tau = (sum of the rho largest entries - 1)/rho,
/// rho = max{ b : w_(b) > (sum_{a<=b} w_(a) - 1)/b }.
std::vector<double> simplex_project(std::span<const double> w);

/// Simplex projection of the nonzero entries only; zeros stay zero, so the
/// output support is contained in the input support. w must be nonzero.
std::vector<double> simplex_project_support(std::span<const double> w);

/// Initial d x k_hat estimate: unit vector rows for pure variables, and for
/// the rest the block-averaged chi values |I_a|^{-1} sum_{l in I_a} chi(j,l).
Matrix initial_rows(const ChiMatrix& chi, const PureVarResult& pv);

/// Hard thresholding of non-pure rows: entries survive iff strictly greater
/// than kappa. A non-pure row that loses every entry gets its largest
/// pre-threshold entry back (ties to the smallest column); such rows are
/// appended to *fallback_rows when given. Pure rows pass through unchanged.
Matrix hard_threshold(const Matrix& m, double kappa, std::span<const std::size_t> pure_rows,
                      std::vector<std::size_t>* fallback_rows = nullptr);

/// Full estimation pipeline on a tail-correlation matrix: pure-variable
/// search, initial rows, hard thresholding, and support-preserving simplex
/// projection of every non-pure row.
HtspEstimate htsp(const ChiMatrix& chi, double kappa, bool use_greedy_clique = false);

}  // namespace taildep
