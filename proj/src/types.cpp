#include "taildep/types.hpp"

#include <cmath>
#include <string>

#include "taildep/error.hpp"

namespace taildep {

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
    if (values_.rows() < 2 || values_.cols() < 2)
        throw input_error("DataMatrix: need n >= 2 and d >= 2, got " +
                          std::to_string(values_.rows()) + " x " + std::to_string(values_.cols()));
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_.data()[i]))
            throw input_error("DataMatrix: non-finite entry at flat index " + std::to_string(i));
    }
}

void RankMatrix::validate() const {
    std::vector<char> seen(n_);
    for (std::size_t j = 0; j < d_; ++j) {
        std::fill(seen.begin(), seen.end(), 0);
        for (std::size_t i = 0; i < n_; ++i) {
            const std::uint32_t r = (*this)(i, j);
            if (r < 1 || r > n_ || seen[r - 1])
                throw input_error("RankMatrix: column " + std::to_string(j) +
                                  " is not a permutation of 1..n");
            seen[r - 1] = 1;
        }
    }
}

void ChiMatrix::validate() const {
    const std::size_t d = values_.rows();
    if (values_.cols() != d) throw input_error("ChiMatrix: not square");
    for (std::size_t j = 0; j < d; ++j) {
        if (values_(j, j) != 1.0)
            throw input_error("ChiMatrix: diagonal entry " + std::to_string(j) + " is not 1");
        for (std::size_t l = 0; l < d; ++l) {
            const double v = values_(j, l);
            if (v != values_(l, j)) throw input_error("ChiMatrix: not symmetric");
            if (!(v >= 0.0 && v <= 1.0)) throw input_error("ChiMatrix: entry outside [0,1]");
            if (k_used_ > 0 && j != l) {
                const double scaled = v * static_cast<double>(k_used_);
                if (std::abs(scaled - std::round(scaled)) > kRowSumTol)
                    throw input_error("ChiMatrix: k_used * chi is not an integer");
            }
        }
    }
}

LoadingMatrix::LoadingMatrix(Matrix values) : values_(std::move(values)) {
    const std::size_t d = values_.rows(), k = values_.cols();
    if (d == 0 || k == 0) throw input_error("LoadingMatrix: empty");
    std::vector<char> col_positive(k, 0);
    for (std::size_t j = 0; j < d; ++j) {
        double row_sum = 0.0;
        for (std::size_t a = 0; a < k; ++a) {
            const double v = values_(j, a);
            if (!(v >= 0.0))
                throw input_error("LoadingMatrix: negative or non-finite entry at row " +
                                  std::to_string(j));
            if (v > 0.0) col_positive[a] = 1;
            row_sum += v;
        }
        if (std::abs(row_sum - 1.0) > kRowSumTol)
            throw input_error("LoadingMatrix: row " + std::to_string(j) +
                              " sums to " + std::to_string(row_sum) + ", expected 1");
    }
    for (std::size_t a = 0; a < k; ++a)
        if (!col_positive[a])
            throw input_error("LoadingMatrix: column " + std::to_string(a) +
                              " has no positive entry");
}

}  // namespace taildep
