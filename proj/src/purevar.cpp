#include "taildep/purevar.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <string>

#include "taildep/error.hpp"

namespace taildep {

void ThresholdGraph::add_edge(std::size_t j, std::size_t l) {
    if (j == l) return;
    adj_[j * words_ + (l >> 6)] |= std::uint64_t{1} << (l & 63);
    adj_[l * words_ + (j >> 6)] |= std::uint64_t{1} << (j & 63);
}

void PureVarResult::validate(std::size_t d) const {
    if (clique.size() != k_hat || k_hat == 0)
        throw input_error("PureVarResult: |clique| != k_hat or empty");
    if (partition.size() != k_hat) throw input_error("PureVarResult: partition size != k_hat");

    std::vector<char> covered(d, 0);
    std::size_t total = 0;
    for (std::size_t a = 0; a < k_hat; ++a) {
        const auto& block = partition[a];
        if (block.empty()) throw input_error("PureVarResult: empty partition block");
        if (!std::is_sorted(block.begin(), block.end()))
            throw input_error("PureVarResult: unsorted partition block");
        std::size_t clique_members = 0;
        for (const std::size_t v : block) {
            if (v >= d) throw input_error("PureVarResult: vertex out of range");
            if (covered[v]) throw input_error("PureVarResult: overlapping blocks");
            covered[v] = 1;
            if (std::binary_search(clique.begin(), clique.end(), v)) ++clique_members;
        }
        if (clique_members != 1 ||
            !std::binary_search(block.begin(), block.end(), clique[a]))
            throw input_error("PureVarResult: block " + std::to_string(a) +
                              " does not contain exactly its clique vertex");
        total += block.size();
    }
    if (total != pure_set.size()) throw input_error("PureVarResult: blocks do not cover pure_set");
    for (const std::size_t v : pure_set)
        if (!covered[v]) throw input_error("PureVarResult: pure_set not covered by blocks");
    if (!std::is_sorted(clique.begin(), clique.end()) ||
        !std::is_sorted(pure_set.begin(), pure_set.end()))
        throw input_error("PureVarResult: clique or pure_set not sorted");
    for (const std::size_t v : clique)
        if (!std::binary_search(pure_set.begin(), pure_set.end(), v))
            throw input_error("PureVarResult: clique not contained in pure_set");
}

ThresholdGraph build_graph(const ChiMatrix& chi, double kappa) {
    if (!(kappa > 0.0 && kappa < 0.5))
        throw parameter_error("build_graph: kappa must lie in (0, 1/2), got " +
                              std::to_string(kappa));
    const std::size_t d = chi.d();
    ThresholdGraph g(d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t l = j + 1; l < d; ++l)
            if (chi(j, l) <= kappa) g.add_edge(j, l);
    return g;
}

namespace {

// Word-level vertex set operations used by the clique search.
using Words = std::vector<std::uint64_t>;

std::size_t count_bits(const Words& w) {
    std::size_t c = 0;
    for (const std::uint64_t x : w) c += std::popcount(x);
    return c;
}

void intersect_row(const Words& w, const std::uint64_t* row, Words& out) {
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] & row[i];
}

template <typename F>
void for_each_bit(const Words& w, F&& f) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        std::uint64_t x = w[i];
        while (x) {
            f(i * 64 + static_cast<std::size_t>(std::countr_zero(x)));
            x &= x - 1;
        }
    }
}

// Smallest-last (degeneracy) vertex ordering.
std::vector<std::size_t> degeneracy_order(const ThresholdGraph& g) {
    const std::size_t d = g.d();
    std::vector<std::size_t> degree(d, 0), order;
    order.reserve(d);
    std::vector<char> removed(d, 0);
    for (std::size_t v = 0; v < d; ++v)
        for (std::size_t u = 0; u < d; ++u)
            if (g.adjacent(v, u)) ++degree[v];
    for (std::size_t step = 0; step < d; ++step) {
        std::size_t best = d, best_deg = std::numeric_limits<std::size_t>::max();
        for (std::size_t v = 0; v < d; ++v)
            if (!removed[v] && degree[v] < best_deg) {
                best = v;
                best_deg = degree[v];
            }
        removed[best] = 1;
        order.push_back(best);
        for (std::size_t u = 0; u < d; ++u)
            if (!removed[u] && g.adjacent(best, u)) --degree[u];
    }
    return order;
}

class CliqueSearch {
public:
    explicit CliqueSearch(const ThresholdGraph& g) : g_(g) {}

    // Size of a maximum clique.
    std::size_t max_size() {
        const std::size_t d = g_.d();
        if (d == 0) return 0;
        best_ = 1;  // any vertex is a clique
        const std::vector<std::size_t> order = degeneracy_order(g_);
        std::vector<char> processed(d, 0);
        Words cand(g_.words());
        for (const std::size_t v : order) {
            // candidates: later neighbors in the degeneracy order
            for (std::size_t i = 0; i < cand.size(); ++i) cand[i] = g_.row(v)[i];
            for (std::size_t u = 0; u < d; ++u)
                if (processed[u]) cand[u >> 6] &= ~(std::uint64_t{1} << (u & 63));
            expand(1, cand);
            processed[v] = 1;
        }
        return best_;
    }

    // Does `cand` contain a clique of size >= need?
    bool contains_clique(const Words& cand, std::size_t need) {
        if (need == 0) return true;
        found_ = false;
        target_ = need;
        probe(0, cand);
        return found_;
    }

private:
    void expand(std::size_t r_size, Words& p) {
        std::size_t p_count = count_bits(p);
        if (p_count == 0) {
            best_ = std::max(best_, r_size);
            return;
        }
        if (r_size + p_count <= best_) return;

        // Branch on P \ N(pivot); the pivot itself is always in there since
        // the graph has no self-loops.
        const std::size_t pivot = choose_pivot(p);
        Words ext(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) ext[i] = p[i] & ~g_.row(pivot)[i];
        Words child(p.size());
        for_each_bit(ext, [&](std::size_t v) {
            if (r_size + count_bits(p) <= best_) return;
            intersect_row(p, g_.row(v), child);
            expand(r_size + 1, child);
            p[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
        });
    }

    void probe(std::size_t r_size, const Words& p) {
        if (found_) return;
        if (r_size >= target_) {
            found_ = true;
            return;
        }
        const std::size_t p_count = count_bits(p);
        if (r_size + p_count < target_) return;

        Words rest = p;
        Words child(p.size());
        for_each_bit(p, [&](std::size_t v) {
            if (found_) return;
            if (r_size + count_bits(rest) < target_) return;
            intersect_row(rest, g_.row(v), child);
            probe(r_size + 1, child);
            rest[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
        });
    }

    std::size_t choose_pivot(const Words& p) const {
        std::size_t pivot = 0, best_cover = 0;
        bool first = true;
        Words tmp(p.size());
        for_each_bit(p, [&](std::size_t u) {
            intersect_row(p, g_.row(u), tmp);
            const std::size_t cover = count_bits(tmp);
            if (first || cover > best_cover) {
                pivot = u;
                best_cover = cover;
                first = false;
            }
        });
        return pivot;
    }

    const ThresholdGraph& g_;
    std::size_t best_ = 0;
    std::size_t target_ = 0;
    bool found_ = false;
};

}  // namespace

std::vector<std::size_t> max_clique(const ThresholdGraph& g) {
    const std::size_t d = g.d();
    if (d == 0) throw input_error("max_clique: empty graph");

    CliqueSearch search(g);
    const std::size_t omega = search.max_size();

    // Build the lexicographically smallest maximum clique: fix vertices in
    // ascending order whenever a completion to size omega still exists.
    std::vector<std::size_t> result;
    result.reserve(omega);
    Words cand(g.words(), 0);
    for (std::size_t v = 0; v < d; ++v) cand[v >> 6] |= std::uint64_t{1} << (v & 63);

    std::size_t need = omega;
    Words sub(g.words());
    for (std::size_t v = 0; v < d && need > 0; ++v) {
        if (!((cand[v >> 6] >> (v & 63)) & 1u)) continue;
        intersect_row(cand, g.row(v), sub);
        if (search.contains_clique(sub, need - 1)) {
            result.push_back(v);
            cand = sub;
            --need;
        }
    }
    return result;
}

std::vector<std::size_t> greedy_clique(const ThresholdGraph& g) {
    const std::size_t d = g.d();
    if (d == 0) throw input_error("greedy_clique: empty graph");
    // Take vertices in reverse degeneracy order, keeping each one that is
    // adjacent to everything taken so far.
    const std::vector<std::size_t> order = degeneracy_order(g);
    std::vector<std::size_t> clique;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const std::size_t v = *it;
        const bool compatible = std::all_of(clique.begin(), clique.end(),
                                            [&](std::size_t u) { return g.adjacent(v, u); });
        if (compatible) clique.push_back(v);
    }
    std::sort(clique.begin(), clique.end());
    return clique;
}

PureVarResult pure_var(const ChiMatrix& chi, double kappa, bool use_greedy_clique) {
    const ThresholdGraph g = build_graph(chi, kappa);
    const std::size_t d = chi.d();

    PureVarResult res;
    res.clique = use_greedy_clique ? greedy_clique(g) : max_clique(g);
    res.k_hat = res.clique.size();
    res.partition.assign(res.k_hat, {});

    // Representatives always belong to their own block. Clique vertices are
    // pairwise adjacent, so chi <= kappa < 1 - kappa between them and no
    // representative can be claimed by another block.
    std::vector<char> in_clique(d, 0);
    for (std::size_t a = 0; a < res.k_hat; ++a) {
        in_clique[res.clique[a]] = 1;
        res.partition[a].push_back(res.clique[a]);
    }

    const double attach = 1.0 - kappa;
    for (std::size_t l = 0; l < d; ++l) {
        if (in_clique[l]) continue;
        std::size_t best_a = res.k_hat;
        double best_v = 0.0;
        for (std::size_t a = 0; a < res.k_hat; ++a) {
            const double v = chi(res.clique[a], l);
            if (v >= attach && (best_a == res.k_hat || v > best_v)) {
                best_a = a;
                best_v = v;
            }
        }
        if (best_a < res.k_hat) res.partition[best_a].push_back(l);
    }

    for (auto& block : res.partition) {
        std::sort(block.begin(), block.end());
        res.pure_set.insert(res.pure_set.end(), block.begin(), block.end());
    }
    std::sort(res.pure_set.begin(), res.pure_set.end());
    return res;
}

}  // namespace taildep
