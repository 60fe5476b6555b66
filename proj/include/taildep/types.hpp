#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "taildep/matrix.hpp"

namespace taildep {

inline constexpr double kRowSumTol = 1e-9;      // row-sum / k*chi integrality checks
inline constexpr double kSupportTol = 1e-12;    // entries below this count as zero

/// n x d observation matrix, rows = samples. All entries must be finite.
class DataMatrix {
public:
    explicit DataMatrix(Matrix values);

    std::size_t n() const { return values_.rows(); }
    std::size_t d() const { return values_.cols(); }
    const Matrix& values() const { return values_; }

private:
    Matrix values_;
};

/// Column-wise ranks of a DataMatrix; each column is a permutation of 1..n.
class RankMatrix {
public:
    RankMatrix(std::size_t n, std::size_t d)
        : n_(n), d_(d), ranks_(n * d, 0) {}

    std::uint32_t& operator()(std::size_t i, std::size_t j) { return ranks_[i * d_ + j]; }
    std::uint32_t operator()(std::size_t i, std::size_t j) const { return ranks_[i * d_ + j]; }

    std::size_t n() const { return n_; }
    std::size_t d() const { return d_; }

    /// Throws input_error unless every column is a permutation of {1,..,n}.
    void validate() const;

private:
    std::size_t n_ = 0;
    std::size_t d_ = 0;
    std::vector<std::uint32_t> ranks_;
};

/// d x d symmetric tail-correlation matrix with unit diagonal, entries in
/// [0,1]. k_used is the exceedance count for empirical matrices and 0 for
/// population matrices.
class ChiMatrix {
public:
    ChiMatrix(Matrix values, std::size_t k_used)
        : values_(std::move(values)), k_used_(k_used) {}

    double operator()(std::size_t j, std::size_t l) const { return values_(j, l); }
    std::size_t d() const { return values_.rows(); }
    std::size_t k_used() const { return k_used_; }
    const Matrix& values() const { return values_; }

    /// Full invariant check: symmetry, unit diagonal, range, and (for
    /// empirical matrices) integrality of k_used * chi.
    void validate() const;

private:
    Matrix values_;
    std::size_t k_used_ = 0;
};

/// d x K nonnegative matrix with unit row sums and no zero column.
class LoadingMatrix {
public:
    explicit LoadingMatrix(Matrix values);

    double operator()(std::size_t j, std::size_t a) const { return values_(j, a); }
    std::size_t d() const { return values_.rows(); }
    std::size_t factors() const { return values_.cols(); }
    const double* row(std::size_t j) const { return values_.row(j); }
    const Matrix& values() const { return values_; }

private:
    Matrix values_;
};

}  // namespace taildep
