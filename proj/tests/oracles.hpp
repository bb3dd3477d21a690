#pragma once

// Brute-force reference implementations used to cross-check the library.
// They work on vertex multiplicity matrices and never call the canonical
// labeling or automorphism code under test.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "spinelab/graph.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<int>>;  // diagonal holds loop counts

inline Matrix multiplicities(const spinelab::HalfEdgeGraph& g) {
    const int n = g.vertex_count();
    Matrix m(n, std::vector<int>(n, 0));
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [a, b] = g.endpoints(e);
        if (a == b) {
            ++m[a][a];
        } else {
            ++m[a][b];
            ++m[b][a];
        }
    }
    return m;
}

inline Matrix permuted(const Matrix& m, const std::vector<int>& perm) {
    const int n = static_cast<int>(m.size());
    Matrix out(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[perm[i]][perm[j]] = m[i][j];
    return out;
}

// Smallest relabeled matrix over all vertex permutations.
inline Matrix canonical(const Matrix& m) {
    std::vector<int> perm(m.size());
    std::iota(perm.begin(), perm.end(), 0);
    Matrix best = m;
    do {
        Matrix c = permuted(m, perm);
        if (c < best) best = c;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

inline bool isomorphic(const spinelab::HalfEdgeGraph& a, const spinelab::HalfEdgeGraph& b) {
    if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
    return canonical(multiplicities(a)) == canonical(multiplicities(b));
}

inline std::uint64_t factorial(int k) {
    std::uint64_t f = 1;
    for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

// |Aut| in the half-edge model: each multiplicity-preserving vertex
// permutation extends in prod m_ij! * prod (l_v! 2^l_v) ways.
inline std::uint64_t automorphism_count(const Matrix& m) {
    const int n = static_cast<int>(m.size());
    std::uint64_t per = 1;
    for (int i = 0; i < n; ++i) {
        per *= factorial(m[i][i]) << m[i][i];
        for (int j = i + 1; j < n; ++j) per *= factorial(m[i][j]);
    }
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t count = 0;
    do {
        if (permuted(m, perm) == m) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count * per;
}

inline bool connected(const Matrix& m) {
    const int n = static_cast<int>(m.size());
    if (n == 0) return false;
    std::vector<int> seen(n, 0), stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w = 0; w < n; ++w)
            if (m[v][w] > 0 && !seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
    }
    return std::all_of(seen.begin(), seen.end(), [](int s) { return s; });
}

inline bool admissible(const Matrix& m) {
    const int n = static_cast<int>(m.size());
    if (!connected(m)) return false;
    for (int v = 0; v < n; ++v) {
        int val = 2 * m[v][v];
        for (int w = 0; w < n; ++w)
            if (w != v) val += m[v][w];
        if (val < 3) return false;
    }
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (m[a][b] == 1) {
                Matrix cut = m;
                cut[a][b] = cut[b][a] = 0;
                if (!connected(cut)) return false;
            }
    return true;
}

inline spinelab::HalfEdgeGraph to_graph(const Matrix& m) {
    std::vector<std::pair<int, int>> edges;
    const int n = static_cast<int>(m.size());
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = 0; k < m[i][j]; ++k) edges.emplace_back(i, j);
    return spinelab::HalfEdgeGraph::from_edges(n, edges);
}

namespace detail {
inline void fill(Matrix& m, int idx, int budget, const std::vector<std::pair<int, int>>& slots,
                 std::set<Matrix>& out) {
    if (idx == static_cast<int>(slots.size())) {
        if (budget == 0 && admissible(m)) out.insert(canonical(m));
        return;
    }
    auto [i, j] = slots[idx];
    for (int k = 0; k <= budget; ++k) {
        m[i][j] = m[j][i] = k;
        fill(m, idx + 1, budget - k, slots, out);
    }
    m[i][j] = m[j][i] = 0;
}
}  // namespace detail

// Admissible multigraphs of the rank, as canonical matrices.
inline std::set<Matrix> admissible_of_rank(int rank) {
    std::set<Matrix> out;
    for (int e = rank; e <= 3 * rank - 3; ++e) {
        const int v = e - rank + 1;
        if (2 * e < 3 * v) continue;
        std::vector<std::pair<int, int>> slots;
        for (int i = 0; i < v; ++i)
            for (int j = i; j < v; ++j) slots.emplace_back(i, j);
        Matrix m(v, std::vector<int>(v, 0));
        detail::fill(m, 0, e, slots, out);
    }
    return out;
}

// Edge subset is acyclic: no loops and |E| = |V| - components of the subgraph.
inline bool acyclic(const spinelab::HalfEdgeGraph& g, const std::vector<int>& edges) {
    const int n = g.vertex_count();
    std::vector<std::vector<int>> adj(n);
    for (int e : edges) {
        auto [a, b] = g.endpoints(e);
        if (a == b) return false;
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<int> seen(n, 0);
    int comps = 0;
    for (int s = 0; s < n; ++s) {
        if (seen[s]) continue;
        ++comps;
        std::vector<int> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
    }
    return static_cast<int>(edges.size()) == n - comps;
}

inline std::vector<std::vector<int>> forests_by_subsets(const spinelab::HalfEdgeGraph& g) {
    std::vector<std::vector<int>> out;
    const int m = g.edge_count();
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        std::vector<int> edges;
        for (int e = 0; e < m; ++e)
            if (mask >> e & 1u) edges.push_back(e);
        if (acyclic(g, edges)) out.push_back(edges);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Random relabeling of vertices and half-edges.
inline spinelab::HalfEdgeGraph shuffled(const spinelab::HalfEdgeGraph& g, std::mt19937& rng) {
    std::vector<int> vp(g.vertex_count()), hp(g.half_edge_count());
    std::iota(vp.begin(), vp.end(), 0);
    std::iota(hp.begin(), hp.end(), 0);
    std::shuffle(vp.begin(), vp.end(), rng);
    std::shuffle(hp.begin(), hp.end(), rng);
    return spinelab::relabel(g, vp, hp);
}

}  // namespace oracle
