#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "taildep/chi.hpp"
#include "taildep/error.hpp"
#include "taildep/hyperparams.hpp"
#include "taildep/rng.hpp"
#include "taildep/simgen.hpp"

using namespace taildep;

namespace {

ModelSpec make_spec(std::size_t d, std::size_t K, std::size_t s, double eta = 0.2,
                    ModelKind kind = ModelKind::linear, bool noise = false) {
    ModelSpec spec;
    spec.kind = kind;
    spec.noise = noise;
    spec.d = d;
    spec.K = K;
    spec.s = s;
    spec.eta = eta;
    return spec;
}

// Kolmogorov-Smirnov distance of a sample against the Pareto(alpha) cdf.
double ks_distance_pareto(std::vector<double> sample, double alpha) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double cdf = 1.0 - std::pow(sample[i], -alpha);
        worst = std::max(worst, std::abs((i + 1) / n - cdf));
        worst = std::max(worst, std::abs(i / n - cdf));
    }
    return worst;
}

}  // namespace

TEST_CASE("d = K yields the identity matrix") {
    const ModelSpec spec = make_spec(4, 4, 2);
    const LoadingMatrix A = gen_loading_matrix(spec, 9);
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t a = 0; a < 4; ++a) CHECK(A(j, a) == (j == a ? 1.0 : 0.0));
}

TEST_CASE("row K+1 has exactly s nonzero entries") {
    const ModelSpec spec = make_spec(6, 5, 4);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const LoadingMatrix A = gen_loading_matrix(spec, seed);
        std::size_t nonzero = 0;
        for (std::size_t a = 0; a < 5; ++a) nonzero += A(5, a) > kSupportTol;
        CHECK(nonzero == 4);
    }
}

TEST_CASE("generated matrices satisfy all structural invariants") {
    Rng seeds(2718);
    for (int trial = 0; trial < 40; ++trial) {
        const ModelSpec spec = make_spec(25, 5, 4, 0.2);
        const LoadingMatrix A = gen_loading_matrix(spec, seeds.next_u64());

        CHECK(sparsity_index(A) == spec.s);
        CHECK(signal_strength(A) >= spec.eta - 1e-12);

        // pure variable condition: every factor has at least one pure row
        std::vector<char> has_pure(spec.K, 0);
        for (std::size_t j = 0; j < A.d(); ++j) {
            std::size_t nonzero = 0, factor = 0;
            for (std::size_t a = 0; a < spec.K; ++a) {
                const double v = A(j, a);
                CHECK(v >= 0.0);
                if (v > kSupportTol) {
                    ++nonzero;
                    factor = a;
                    // every non-binary entry lies in [eta, 1-eta]
                    if (v < 1.0 - kSupportTol) {
                        CHECK(v >= spec.eta - 1e-12);
                        CHECK(v <= 1.0 - spec.eta + 1e-12);
                    }
                }
            }
            if (nonzero == 1) has_pure[factor] = 1;
        }
        for (std::size_t a = 0; a < spec.K; ++a) CHECK(has_pure[a] == 1);
    }
}

TEST_CASE("generation is bit-identical given the seed and row-stable in d") {
    const ModelSpec spec = make_spec(12, 4, 3);
    const LoadingMatrix a = gen_loading_matrix(spec, 77);
    const LoadingMatrix b = gen_loading_matrix(spec, 77);
    CHECK(a.values() == b.values());

    // enlarging d leaves earlier rows untouched
    ModelSpec wider = spec;
    wider.d = 20;
    const LoadingMatrix c = gen_loading_matrix(wider, 77);
    for (std::size_t j = 0; j < spec.d; ++j)
        for (std::size_t k = 0; k < spec.K; ++k) CHECK(a(j, k) == c(j, k));
}

TEST_CASE("infeasible (s_i, eta) pairs raise a descriptive generation error") {
    // d = K+1 forces the first generated row to have exactly s nonzeros;
    // s * eta > 1 can never satisfy the floor constraint.
    ModelSpec spec = make_spec(4, 3, 3, 0.4);
    CHECK_THROWS_WITH_AS(gen_loading_matrix(spec, 1),
                         doctest::Contains("s_i*eta > 1 is infeasible"), generation_error);
}

TEST_CASE("pareto sampler matches its survival function") {
    const std::vector<double> draws = sample_pareto(1.0, 1000000, 31337);
    std::size_t above_two = 0;
    for (const double v : draws) {
        CHECK(v >= 1.0);
        above_two += v > 2.0;
    }
    const double frac = static_cast<double>(above_two) / static_cast<double>(draws.size());
    CHECK(frac == doctest::Approx(0.5).epsilon(0.004));
}

TEST_CASE("pareto(2) sample mean is near 2") {
    const std::vector<double> draws = sample_pareto(2.0, 1000000, 99);
    double mean = 0.0;
    for (const double v : draws) mean += v;
    mean /= static_cast<double>(draws.size());
    CHECK(std::abs(mean - 2.0) < 0.05);
}

TEST_CASE("identity loading gives i.i.d. Pareto columns") {
    const std::size_t n = 100000;
    ModelSpec spec = make_spec(2, 2, 1);
    Matrix identity(2, 2, {1, 0, 0, 1});
    const LoadingMatrix A(std::move(identity));
    for (const ModelKind kind : {ModelKind::linear, ModelKind::max_linear}) {
        spec.kind = kind;
        const DataMatrix data = sample_dataset(A, spec, n, 555);
        for (std::size_t j = 0; j < 2; ++j) {
            std::vector<double> column(n);
            for (std::size_t i = 0; i < n; ++i) column[i] = data.values()(i, j);
            CHECK(ks_distance_pareto(std::move(column), spec.factor_alpha) < 0.01);
        }
    }
}

TEST_CASE("max-linear pure rows replicate their factor exactly") {
    ModelSpec spec = make_spec(3, 2, 1, 0.2, ModelKind::max_linear, false);
    const LoadingMatrix A(Matrix(3, 2, {1, 0, 0, 1, 1, 0}));
    const DataMatrix data = sample_dataset(A, spec, 500, 31);
    for (std::size_t i = 0; i < data.n(); ++i)
        CHECK(data.values()(i, 0) == data.values()(i, 2));
}

TEST_CASE("samples are strictly positive and datasets are seed-deterministic") {
    const ModelSpec spec = make_spec(6, 3, 2, 0.2, ModelKind::linear, true);
    const LoadingMatrix A = gen_loading_matrix(spec, 5);
    const DataMatrix a = sample_dataset(A, spec, 300, 17);
    const DataMatrix b = sample_dataset(A, spec, 300, 17);
    CHECK(a.values() == b.values());
    for (std::size_t i = 0; i < a.values().size(); ++i) CHECK(a.values().data()[i] > 0.0);
}

TEST_CASE("dimension mismatch is rejected") {
    const ModelSpec spec = make_spec(6, 3, 2);
    const LoadingMatrix wrong(Matrix(3, 2, {1, 0, 0, 1, 0.5, 0.5}));
    CHECK_THROWS_AS(sample_dataset(wrong, spec, 100, 1), input_error);
}

TEST_CASE("implied loading normalizes rows by the alpha-power sums") {
    Matrix raw(2, 2, {3, 1, 0.5, 0.5});
    const LoadingMatrix abar = implied_loading(raw, 2.0);
    CHECK(abar(0, 0) == doctest::Approx(9.0 / 10.0).epsilon(1e-12));
    CHECK(abar(0, 1) == doctest::Approx(1.0 / 10.0).epsilon(1e-12));
    CHECK(abar(1, 0) == doctest::Approx(0.5).epsilon(1e-12));

    // alpha = 1 on a row-stochastic matrix is the identity map
    const LoadingMatrix A(Matrix(2, 2, {0.3, 0.7, 1.0, 0.0}));
    const LoadingMatrix same = implied_loading(A.values(), 1.0);
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t a = 0; a < 2; ++a)
            CHECK(same(j, a) == doctest::Approx(A(j, a)).epsilon(1e-12));
}

TEST_CASE("empirical chi of a max-linear sample sits in the bias envelope") {
    const std::size_t n = 100000;
    const std::size_t k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)) * 10.0);
    const double t = static_cast<double>(n) / static_cast<double>(k);

    ModelSpec spec = make_spec(6, 3, 3, 0.2, ModelKind::max_linear, false);
    const LoadingMatrix A = gen_loading_matrix(spec, 2029);
    const ChiMatrix chi = population_chi(A);
    const ChiMatrix chi_t = preasymptotic_chi_maxlinear(A, t);
    const DataMatrix data = sample_dataset(A, spec, n, 404);
    const ChiMatrix hat = empirical_chi(data, k, 1);

    for (std::size_t j = 0; j < spec.d; ++j) {
        for (std::size_t l = j + 1; l < spec.d; ++l) {
            const double mc_se =
                std::sqrt(std::max(chi_t(j, l) * (1.0 - chi_t(j, l)), 1.0 / t) /
                          static_cast<double>(k));
            const double envelope = (1.0 - chi(j, l)) / t + 4.0 * mc_se;
            CHECK(std::abs(hat(j, l) - chi(j, l)) <= envelope);
        }
    }
}
