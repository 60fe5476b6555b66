#pragma once

#include <cstdint>
#include <vector>

#include "taildep/types.hpp"

namespace taildep {

/// Undirected graph on [d] with bitset adjacency rows. Diagonal is always
/// false; edges are stored symmetrically.
class ThresholdGraph {
public:
    explicit ThresholdGraph(std::size_t d)
        : d_(d), words_(d == 0 ? 0 : (d + 63) / 64), adj_(d * words_, 0) {}

    void add_edge(std::size_t j, std::size_t l);
    bool adjacent(std::size_t j, std::size_t l) const {
        return (adj_[j * words_ + (l >> 6)] >> (l & 63)) & 1u;
    }

    std::size_t d() const { return d_; }
    std::size_t words() const { return words_; }
    const std::uint64_t* row(std::size_t j) const { return adj_.data() + j * words_; }

private:
    std::size_t d_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> adj_;
};

/// Output of the pure-variable search: estimated factor count, the clique of
/// factor representatives, the pure-variable set, and its partition.
/// partition[a] is sorted and contains exactly clique[a] among the clique
/// vertices; blocks are disjoint and their union is pure_set.
struct PureVarResult {
    std::size_t k_hat = 0;
    std::vector<std::size_t> clique;
    std::vector<std::size_t> pure_set;
    std::vector<std::vector<std::size_t>> partition;

    /// Throws input_error if any structural invariant is violated.
    void validate(std::size_t d) const;
};

/// Graph with an edge (j,l), j != l, whenever chi(j,l) <= kappa.
ThresholdGraph build_graph(const ChiMatrix& chi, double kappa);

/// Exact maximum clique; among maximum cliques returns the lexicographically
/// smallest vertex list (ascending order). Branch-and-bound with pivoting
/// over a degeneracy vertex ordering.
std::vector<std::size_t> max_clique(const ThresholdGraph& g);

/// Greedy maximal clique along the degeneracy order; linear-time alternative
/// for very large d. Not exact, so the recovery guarantees that hold for
/// max_clique do not apply.
std::vector<std::size_t> greedy_clique(const ThresholdGraph& g);

/// Pure-variable search: threshold chi into a graph, take a maximum clique
/// as factor representatives, and attach every variable l with
/// chi(rep, l) >= 1 - kappa to the representative's block. If the raw blocks
/// overlap, a contested index goes to the block whose representative has the
/// larger chi value (ties to the smaller representative index), so the
/// result is always a valid partition.
PureVarResult pure_var(const ChiMatrix& chi, double kappa, bool use_greedy_clique = false);

}  // namespace taildep
