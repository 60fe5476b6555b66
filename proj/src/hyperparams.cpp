#include "taildep/hyperparams.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "taildep/error.hpp"

namespace taildep {

double kappa_lower_bound(double delta, std::size_t n, std::size_t k, std::size_t d, double bias) {
    if (!(delta > 0.0 && delta < 1.0))
        throw parameter_error("kappa_lower_bound: delta must lie in (0,1)");
    if (k < 1 || k > n) throw parameter_error("kappa_lower_bound: need 1 <= k <= n");
    if (d < 2) throw parameter_error("kappa_lower_bound: need d >= 2");
    if (!(bias >= 0.0)) throw parameter_error("kappa_lower_bound: bias must be nonnegative");

    const double dk = static_cast<double>(k);
    const double log_d = std::log(static_cast<double>(d) / delta);
    const double log_4d = std::log(4.0 * static_cast<double>(d) / delta);
    const double deviation =
        (std::sqrt(2.0) + std::sqrt(16.0 * log_d) + std::sqrt(16.0 * log_4d)) / std::sqrt(dk);
    const double correction = (6.0 + 4.0 * log_d + 8.0 * log_4d) / (3.0 * dk);
    return bias + deviation + correction;
}

namespace {

double log_rate(std::size_t n, std::size_t d) {
    return std::log(4.0 * static_cast<double>(d) * static_cast<double>(n) *
                    static_cast<double>(n));
}

void check_adaptive_args(std::size_t n, std::size_t d, double c, double r, const char* what) {
    if (n < 2 || d < 2) throw parameter_error(std::string(what) + ": need n >= 2 and d >= 2");
    if (!(c > 0.0)) throw parameter_error(std::string(what) + ": constant must be positive");
    if (!(r > 0.0)) throw parameter_error(std::string(what) + ": rate r must be positive");
}

}  // namespace

std::size_t adaptive_exceedance_count(std::size_t n, std::size_t d, double c_k, double r,
                                      bool* clamped) {
    check_adaptive_args(n, d, c_k, r, "adaptive_exceedance_count");
    const double exponent = 1.0 / (2.0 * r + 1.0);
    const double raw = std::floor(c_k * std::pow(log_rate(n, d), exponent) *
                                  std::pow(static_cast<double>(n), 2.0 * r * exponent));
    double value = raw;
    if (value < 2.0) value = 2.0;
    if (value > static_cast<double>(n)) value = static_cast<double>(n);
    if (clamped) *clamped = (value != raw);
    return static_cast<std::size_t>(value);
}

double adaptive_threshold(std::size_t n, std::size_t d, double c_kappa, double r, bool* clamped) {
    check_adaptive_args(n, d, c_kappa, r, "adaptive_threshold");
    const double exponent = r / (2.0 * r + 1.0);
    const double raw = c_kappa * std::pow(log_rate(n, d) / static_cast<double>(n), exponent);
    const double cap = 0.5 - 1e-9;
    if (clamped) *clamped = (raw >= cap);
    return std::min(raw, cap);
}

HyperParams adaptive_hyperparams(std::size_t n, std::size_t d, double c_k, double c_kappa,
                                 double r) {
    bool clamp_k = false, clamp_kappa = false;
    HyperParams hp;
    hp.k = adaptive_exceedance_count(n, d, c_k, r, &clamp_k);
    hp.kappa = adaptive_threshold(n, d, c_kappa, r, &clamp_kappa);
    hp.mode = HyperParams::Mode::adaptive;
    hp.clamped = clamp_k || clamp_kappa;
    return hp;
}

double signal_strength(const LoadingMatrix& A) {
    double eta = 0.5;
    bool any = false;
    for (std::size_t j = 0; j < A.d(); ++j) {
        for (std::size_t a = 0; a < A.factors(); ++a) {
            const double v = A(j, a);
            if (std::abs(v) <= kSupportTol || std::abs(v - 1.0) <= kSupportTol) continue;
            eta = std::min(eta, std::min(v, 1.0 - v));
            any = true;
        }
    }
    return any ? eta : 0.5;
}

std::size_t sparsity_index(const LoadingMatrix& A) {
    std::size_t s = 0;
    for (std::size_t j = 0; j < A.d(); ++j) {
        std::size_t nonzero = 0;
        for (std::size_t a = 0; a < A.factors(); ++a)
            if (A(j, a) > kSupportTol) ++nonzero;
        s = std::max(s, nonzero);
    }
    return s;
}

}  // namespace taildep
