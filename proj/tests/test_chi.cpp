#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "taildep/chi.hpp"
#include "taildep/error.hpp"
#include "taildep/rng.hpp"
#include "taildep/simgen.hpp"

using namespace taildep;

namespace {

Matrix columns_to_matrix(const std::vector<std::vector<double>>& cols) {
    const std::size_t n = cols[0].size(), d = cols.size();
    Matrix m(n, d, 0.0);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < n; ++i) m(i, j) = cols[j][i];
    return m;
}

LoadingMatrix make_loading(std::size_t d, std::size_t k, std::vector<double> rows) {
    return LoadingMatrix(Matrix(d, k, std::move(rows)));
}

DataMatrix make_random_data(Rng& rng, std::size_t n, std::size_t d) {
    Matrix m(n, d, 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform01() * 4.0 - 2.0;
    return DataMatrix(std::move(m));
}

// Independent route: ranks by counting (tie-free data), chi by a direct
// O(n^2) scan per pair.
double chi_double_loop(const DataMatrix& data, std::size_t j, std::size_t l, std::size_t k) {
    const std::size_t n = data.n();
    const Matrix& x = data.values();
    std::size_t joint = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t rank_j = 0, rank_l = 0;
        for (std::size_t m = 0; m < n; ++m) {
            rank_j += x(m, j) <= x(i, j);
            rank_l += x(m, l) <= x(i, l);
        }
        joint += (rank_j > n - k) && (rank_l > n - k);
    }
    return static_cast<double>(joint) / static_cast<double>(k);
}

}  // namespace

TEST_CASE("compute_ranks on strictly increasing column") {
    const DataMatrix data(columns_to_matrix({{0.1, 0.4, 0.7, 0.9}, {1, 2, 3, 4}}));
    const RankMatrix r = compute_ranks(data, 7);
    for (std::size_t i = 0; i < 4; ++i) CHECK(r(i, 0) == i + 1);
    r.validate();
}

TEST_CASE("compute_ranks hand-derived permutation") {
    const DataMatrix data(columns_to_matrix({{0.2, 0.8, 0.3, 0.6}, {1, 2, 3, 4}}));
    const RankMatrix r = compute_ranks(data, 99);
    CHECK(r(0, 0) == 1);
    CHECK(r(1, 0) == 4);
    CHECK(r(2, 0) == 2);
    CHECK(r(3, 0) == 3);
}

TEST_CASE("compute_ranks tie-break reaches both orders across seeds") {
    const DataMatrix data(columns_to_matrix({{5, 5}, {1, 2}}));
    std::set<std::uint32_t> first_ranks;
    for (std::uint64_t seed = 0; seed < 64; ++seed) {
        const RankMatrix r = compute_ranks(data, seed);
        r.validate();
        first_ranks.insert(r(0, 0));
    }
    CHECK(first_ranks == std::set<std::uint32_t>{1, 2});
}

TEST_CASE("compute_ranks is deterministic given the seed") {
    Rng rng(5150);
    const DataMatrix data = make_random_data(rng, 40, 3);
    const RankMatrix a = compute_ranks(data, 31337), b = compute_ranks(data, 31337);
    for (std::size_t i = 0; i < 40; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(a(i, j) == b(i, j));
}

TEST_CASE("non-finite data is rejected at construction") {
    Matrix m(2, 2, 1.0);
    m(1, 1) = std::nan("");
    CHECK_THROWS_AS(DataMatrix{std::move(m)}, input_error);
}

TEST_CASE("empirical_chi equals 1 for comonotone columns") {
    std::vector<double> base{0.3, 1.9, 0.01, 5.5, 2.2, 0.7, 3.1, 4.4};
    std::vector<double> transformed;
    for (double v : base) transformed.push_back(std::exp(v));
    const DataMatrix data(columns_to_matrix({base, transformed}));
    for (std::size_t k : {1u, 2u, 4u, 8u}) {
        const ChiMatrix chi = empirical_chi(data, k, 3);
        CHECK(chi(0, 1) == 1.0);
    }
}

TEST_CASE("empirical_chi hand-derived n=4 k=2 case") {
    const DataMatrix data(columns_to_matrix({{0.1, 0.4, 0.7, 0.9}, {0.2, 0.8, 0.3, 0.6}}));
    const ChiMatrix chi = empirical_chi(data, 2, 17);
    CHECK(chi(0, 1) == 0.5);
    CHECK(chi(0, 0) == 1.0);
    CHECK(chi(1, 1) == 1.0);
    chi.validate();
    CHECK(chi.k_used() == 2);
}

TEST_CASE("empirical_chi rejects k out of range") {
    Rng rng(4);
    const DataMatrix data = make_random_data(rng, 10, 2);
    CHECK_THROWS_AS(empirical_chi(data, 0, 1), parameter_error);
    CHECK_THROWS_AS(empirical_chi(data, 11, 1), parameter_error);
    CHECK_NOTHROW(empirical_chi(data, 10, 1));
}

TEST_CASE("rank invariance: chi unchanged under strictly increasing transforms") {
    Rng rng(2024);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 60, d = 4;
        const DataMatrix data = make_random_data(rng, n, d);
        Matrix exp_m(n, d, 0.0), cube_m(n, d, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                const double v = data.values()(i, j);
                exp_m(i, j) = std::exp(v);
                cube_m(i, j) = v * v * v;
            }
        }
        const ChiMatrix base = empirical_chi(data, 12, 555);
        const ChiMatrix via_exp = empirical_chi(DataMatrix(std::move(exp_m)), 12, 555);
        const ChiMatrix via_cube = empirical_chi(DataMatrix(std::move(cube_m)), 12, 555);
        CHECK(base.values() == via_exp.values());
        CHECK(base.values() == via_cube.values());
    }
}

TEST_CASE("empirical_chi agrees with the O(n^2) double-loop oracle on d=2") {
    Rng rng(909);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t n = 50 + 30 * static_cast<std::size_t>(trial);
        const DataMatrix data = make_random_data(rng, std::min<std::size_t>(n, 200), 2);
        for (std::size_t k : {1u, 5u, 17u}) {
            const ChiMatrix chi = empirical_chi(data, k, 1);
            CHECK(chi(0, 1) == doctest::Approx(chi_double_loop(data, 0, 1, k)).epsilon(1e-12));
        }
    }
}

TEST_CASE("population_chi worked examples") {
    const LoadingMatrix identity = make_loading(2, 2, {1, 0, 0, 1});
    CHECK(population_chi(identity)(0, 1) == 0.0);

    const LoadingMatrix repeated = make_loading(2, 2, {0.4, 0.6, 0.4, 0.6});
    CHECK(population_chi(repeated)(0, 1) == doctest::Approx(1.0).epsilon(1e-12));

    const LoadingMatrix mixed = make_loading(3, 2, {1, 0, 0, 1, 0.5, 0.5});
    const ChiMatrix chi = population_chi(mixed);
    CHECK(chi(0, 1) == 0.0);
    CHECK(chi(0, 2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(chi(1, 2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(chi.k_used() == 0);
    chi.validate();
}

TEST_CASE("stdf_eval worked examples") {
    const LoadingMatrix mixed = make_loading(3, 2, {1, 0, 0, 1, 0.5, 0.5});
    CHECK(stdf_eval(mixed, std::vector<double>{1, 0, 0}) == doctest::Approx(1.0));
    CHECK(stdf_eval(mixed, std::vector<double>{0, 1, 0}) == doctest::Approx(1.0));
    CHECK(stdf_eval(mixed, std::vector<double>{1, 1, 1}) == doctest::Approx(2.0));

    const LoadingMatrix identity = make_loading(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
    CHECK(stdf_eval(identity, std::vector<double>{1, 1, 1}) == doctest::Approx(3.0));

    CHECK_THROWS_AS(stdf_eval(mixed, std::vector<double>{1, -0.5, 0}), input_error);
    CHECK_THROWS_AS(stdf_eval(mixed, std::vector<double>{1, 1}), input_error);
}

TEST_CASE("preasymptotic chi worked examples") {
    const LoadingMatrix repeated = make_loading(2, 2, {0.4, 0.6, 0.4, 0.6});
    for (double t : {2.0, 10.0, 100.0})
        CHECK(preasymptotic_chi_maxlinear(repeated, t)(0, 1) == doctest::Approx(1.0).epsilon(1e-12));

    const LoadingMatrix identity = make_loading(2, 2, {1, 0, 0, 1});
    CHECK(preasymptotic_chi_maxlinear(identity, 2.0)(0, 1) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(preasymptotic_chi_maxlinear(identity, 1.0), parameter_error);
    CHECK_THROWS_AS(preasymptotic_chi_maxlinear(identity, 0.5), parameter_error);
}

TEST_CASE("preasymptotic chi converges to population chi as t grows") {
    ModelSpec spec;
    spec.d = 8;
    spec.K = 3;
    spec.s = 3;
    spec.eta = 0.2;
    const LoadingMatrix A = gen_loading_matrix(spec, 42);
    const ChiMatrix limit = population_chi(A);
    const ChiMatrix at_large_t = preasymptotic_chi_maxlinear(A, 1e6);
    for (std::size_t j = 0; j < A.d(); ++j)
        for (std::size_t l = 0; l < A.d(); ++l)
            CHECK(std::abs(at_large_t(j, l) - limit(j, l)) < 1e-5);
}

TEST_CASE("preasymptotic bias envelope |chi_t - chi| <= (1-chi)/t") {
    Rng seeds(77);
    for (int trial = 0; trial < 10; ++trial) {
        ModelSpec spec;
        spec.d = 10;
        spec.K = 4;
        spec.s = 3;
        spec.eta = 0.15;
        const LoadingMatrix A = gen_loading_matrix(spec, seeds.next_u64());
        const ChiMatrix chi = population_chi(A);
        for (double t : {2.0, 10.0, 100.0}) {
            const ChiMatrix chi_t = preasymptotic_chi_maxlinear(A, t);
            for (std::size_t j = 0; j < A.d(); ++j)
                for (std::size_t l = j + 1; l < A.d(); ++l)
                    CHECK(std::abs(chi_t(j, l) - chi(j, l)) <=
                          (1.0 - chi(j, l)) / t + 1e-12);
        }
    }
}

TEST_CASE("every chi output satisfies the type invariants") {
    Rng rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        const DataMatrix data = make_random_data(rng, 37, 5);
        empirical_chi(data, 9, trial).validate();

        ModelSpec spec;
        spec.d = 7;
        spec.K = 3;
        spec.s = 2;
        const LoadingMatrix A = gen_loading_matrix(spec, rng.next_u64());
        population_chi(A).validate();
        preasymptotic_chi_maxlinear(A, 3.5).validate();
    }
}
