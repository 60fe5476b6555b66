#include "taildep/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "taildep/error.hpp"
#include "taildep/rng.hpp"

namespace taildep {

void ModelSpec::validate() const {
    if (d < 2) throw parameter_error("ModelSpec: d must be at least 2");
    if (K < 1 || K > d) throw parameter_error("ModelSpec: need 1 <= K <= d");
    if (s < 1 || s > K) throw parameter_error("ModelSpec: need 1 <= s <= K");
    if (!(eta > 0.0 && eta < 0.5)) throw parameter_error("ModelSpec: eta must lie in (0, 1/2)");
    if (!(factor_alpha > 0.0) || !(noise_alpha > 0.0))
        throw parameter_error("ModelSpec: tail indices must be positive");
}

namespace {

constexpr std::size_t kMaxRejections = 100000;

// Uniform random size-m subset of {0,..,K-1}, ascending.
std::vector<std::size_t> random_positions(Rng& rng, std::size_t K, std::size_t m) {
    std::vector<std::size_t> idx(K);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = i + rng.uniform_below(K - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(m);
    std::sort(idx.begin(), idx.end());
    return idx;
}

// Uniform simplex point with all coordinates in [eta, 1-eta], by rejection.
std::vector<double> constrained_simplex_point(Rng& rng, std::size_t m, double eta,
                                              std::size_t row) {
    std::vector<double> w(m);
    for (std::size_t attempt = 0; attempt < kMaxRejections; ++attempt) {
        double total = 0.0;
        for (double& v : w) {
            v = rng.exponential();
            total += v;
        }
        bool ok = true;
        for (double& v : w) {
            v /= total;
            if (v < eta || v > 1.0 - eta) ok = false;
        }
        if (ok) return w;
    }
    throw generation_error(
        "gen_loading_matrix: row " + std::to_string(row) + " with s_i=" + std::to_string(m) +
        ", eta=" + std::to_string(eta) + " exceeded " + std::to_string(kMaxRejections) +
        " rejection attempts" +
        (static_cast<double>(m) * eta > 1.0 ? " (s_i*eta > 1 is infeasible)" : ""));
}

}  // namespace

LoadingMatrix gen_loading_matrix(const ModelSpec& spec, std::uint64_t seed) {
    spec.validate();
    const std::size_t d = spec.d, K = spec.K;
    Matrix A(d, K, 0.0);

    for (std::size_t j = 0; j < K; ++j) A(j, j) = 1.0;

    for (std::size_t j = K; j < d; ++j) {
        Rng rng(derive_seed(seed, j));
        const std::size_t si = (j == K) ? spec.s : 1 + rng.uniform_below(spec.s);
        const std::vector<std::size_t> positions = random_positions(rng, K, si);
        if (si == 1) {
            A(j, positions[0]) = 1.0;
        } else {
            const std::vector<double> w = constrained_simplex_point(rng, si, spec.eta, j);
            for (std::size_t i = 0; i < si; ++i) A(j, positions[i]) = w[i];
        }
    }
    return LoadingMatrix(std::move(A));
}

std::vector<double> sample_pareto(double alpha, std::size_t count, std::uint64_t seed) {
    if (!(alpha > 0.0)) throw parameter_error("sample_pareto: alpha must be positive");
    Rng rng(seed);
    std::vector<double> out(count);
    for (double& v : out) v = rng.pareto(alpha);
    return out;
}

DataMatrix sample_dataset(const LoadingMatrix& A, const ModelSpec& spec, std::size_t n,
                          std::uint64_t seed) {
    spec.validate();
    if (A.d() != spec.d || A.factors() != spec.K)
        throw input_error("sample_dataset: loading matrix shape does not match spec");
    if (n < 2) throw input_error("sample_dataset: need n >= 2");

    const std::size_t d = spec.d, K = spec.K;
    Rng rng(seed);
    Matrix y(n, d, 0.0);
    std::vector<double> z(K), e;
    if (spec.noise) e.resize(d);

    for (std::size_t i = 0; i < n; ++i) {
        for (double& v : z) v = rng.pareto(spec.factor_alpha);
        if (spec.noise)
            for (double& v : e) v = rng.pareto(spec.noise_alpha);

        for (std::size_t j = 0; j < d; ++j) {
            const double* row = A.row(j);
            double v;
            if (spec.kind == ModelKind::linear) {
                v = 0.0;
                for (std::size_t a = 0; a < K; ++a) v += row[a] * z[a];
                if (spec.noise) v += e[j];
            } else {
                v = 0.0;
                for (std::size_t a = 0; a < K; ++a) v = std::max(v, row[a] * z[a]);
                if (spec.noise) v = std::max(v, e[j]);
            }
            y(i, j) = v;
        }
    }
    return DataMatrix(std::move(y));
}

LoadingMatrix implied_loading(const Matrix& A, double alpha) {
    if (!(alpha > 0.0)) throw parameter_error("implied_loading: alpha must be positive");
    Matrix out(A.rows(), A.cols(), 0.0);
    for (std::size_t j = 0; j < A.rows(); ++j) {
        double denom = 0.0;
        for (std::size_t a = 0; a < A.cols(); ++a) {
            const double v = A(j, a);
            if (!(v >= 0.0)) throw input_error("implied_loading: negative entry");
            denom += std::pow(v, alpha);
        }
        if (denom <= 0.0) throw input_error("implied_loading: zero row");
        for (std::size_t a = 0; a < A.cols(); ++a)
            out(j, a) = std::pow(A(j, a), alpha) / denom;
    }
    return LoadingMatrix(std::move(out));
}

std::string to_string(ModelKind kind) {
    return kind == ModelKind::linear ? "linear" : "max_linear";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "linear") return ModelKind::linear;
    if (name == "max_linear") return ModelKind::max_linear;
    throw parameter_error("unknown model kind: " + name);
}

}  // namespace taildep
