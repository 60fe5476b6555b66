#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "taildep/types.hpp"

namespace taildep {

enum class ModelKind { linear, max_linear };

/// Synthetic factor-model configuration: d observed variables, K factors
/// with Pareto(factor_alpha) tails, optional Pareto(noise_alpha) noise,
/// loading matrices with signal strength eta and row sparsity s.
struct ModelSpec {
    ModelKind kind = ModelKind::linear;
    bool noise = false;
    std::size_t d = 2;
    std::size_t K = 1;
    double eta = 0.2;
    std::size_t s = 1;
    double factor_alpha = 1.0;
    double noise_alpha = 2.0;

    /// Throws parameter_error unless d >= 2, 1 <= s <= K <= d,
    /// eta in (0, 1/2), and both tail indices are positive.
    void validate() const;
};

/// Random pure-variable loading matrix: rows 1..K form the identity block,
/// row K+1 has exactly s nonzero entries, and every further row has
/// s_i ~ Uniform{1..s} nonzeros at uniform positions. Nonzero entries of a
/// non-pure row are uniform on the simplex, rejected until they all lie in
/// [eta, 1-eta]; rows with s_i = 1 become additional pure rows. Each row
/// draws from its own sub-stream, so enlarging d leaves earlier rows
/// unchanged. Throws generation_error when a row's (s_i, eta) combination
/// cannot be satisfied (e.g. s_i * eta > 1).
LoadingMatrix gen_loading_matrix(const ModelSpec& spec, std::uint64_t seed);

/// i.i.d. draws with survival function P(Z > x) = x^{-alpha} for x >= 1.
std::vector<double> sample_pareto(double alpha, std::size_t count, std::uint64_t seed);

/// n samples from the (max-)linear factor model with loading matrix A:
/// linear Y = A Z (+ E), max-linear Y_j = max_a A_ja Z_a (v E_j).
DataMatrix sample_dataset(const LoadingMatrix& A, const ModelSpec& spec, std::size_t n,
                          std::uint64_t seed);

/// Tail loading matrix implied by simulating with loadings A and tail index
/// alpha: entry (j,a) = A_ja^alpha / sum_b A_jb^alpha. Identity when the
/// rows of A already sum to 1 and alpha = 1.
LoadingMatrix implied_loading(const Matrix& A, double alpha);

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

}  // namespace taildep
