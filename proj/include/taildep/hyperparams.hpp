#pragma once

#include <cstddef>

#include "taildep/types.hpp"

namespace taildep {

/// A (k, kappa) tuning pair, plus how it was obtained. clamped is set when
/// a formula output had to be pulled back into its admissible range.
struct HyperParams {
    enum class Mode { fixed, adaptive };

    std::size_t k = 0;
    double kappa = 0.0;
    Mode mode = Mode::fixed;
    bool clamped = false;
};

/// Concentration floor for the threshold parameter:
///   kappa0 = bias + (sqrt(2) + sqrt(16 ln(d/delta)) + sqrt(16 ln(4d/delta))) / sqrt(k)
///          + (6 + 4 ln(d/delta) + 8 ln(4d/delta)) / (3k).
/// bias is the pre-asymptotic bias D(k/n), which is model knowledge the
/// caller has to supply; pass 0 for the oracle / no-bias case.
double kappa_lower_bound(double delta, std::size_t n, std::size_t k, std::size_t d,
                         double bias = 0.0);

/// Data-adaptive exceedance count
///   k = floor(c_k * (ln(4 d n^2))^{1/(2r+1)} * n^{2r/(2r+1)}),
/// clamped into [2, n]. r is the second-order decay rate; r = 1 matches the
/// max-linear Frechet class.
std::size_t adaptive_exceedance_count(std::size_t n, std::size_t d, double c_k = 0.25,
                                      double r = 1.0, bool* clamped = nullptr);

/// Data-adaptive threshold
///   kappa = c_kappa * (ln(4 d n^2) / n)^{r/(2r+1)},
/// clamped below 1/2 - 1e-9.
double adaptive_threshold(std::size_t n, std::size_t d, double c_kappa = 0.75, double r = 1.0,
                          bool* clamped = nullptr);

/// Both adaptive parameters bundled.
HyperParams adaptive_hyperparams(std::size_t n, std::size_t d, double c_k = 0.25,
                                 double c_kappa = 0.75, double r = 1.0);

/// Smallest distance of any loading outside {0,1} from the set {0,1}
/// (membership tested with tolerance 1e-12); 1/2 when every loading is
/// binary, i.e. all rows are pure.
double signal_strength(const LoadingMatrix& A);

/// Maximum number of nonzero loadings in any row (entries > 1e-12).
std::size_t sparsity_index(const LoadingMatrix& A);

}  // namespace taildep
