#include "spinelab/spine.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "spinelab/field.hpp"

namespace spinelab {

namespace {

struct MatrixSearch {
    int v;
    std::vector<int> remaining;
    std::vector<std::vector<int>> m;
    std::set<CanonicalForm> seen;
    std::vector<HalfEdgeGraph> found;
    std::uint64_t configurations = 0;
    std::uint64_t cap;
    int rank;

    HalfEdgeGraph build() const {
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < v; ++i)
            for (int j = i; j < v; ++j)
                for (int k = 0; k < m[i][j]; ++k) edges.emplace_back(i, j);
        return HalfEdgeGraph::from_edges(v, edges);
    }

    void finish() {
        if (++configurations > cap) {
            std::ostringstream os;
            os << "admissible enumeration for rank " << rank << " exceeded " << cap
               << " configurations; classes found so far: " << found.size();
            throw ResourceError(os.str());
        }
        HalfEdgeGraph g = build();
        if (!is_admissible(g)) return;
        auto rep = canonical_representative(g);
        auto form = canonical_form(rep.graph);
        if (seen.insert(form).second) found.push_back(std::move(rep.graph));
    }

    // Fill entry (i, j) with i <= j, row-major.
    void fill(int i, int j) {
        if (i == v) {
            finish();
            return;
        }
        if (j == v) {
            if (remaining[i] != 0) return;
            fill(i + 1, i + 1);
            return;
        }
        if (i == j) {
            for (int loops = remaining[i] / 2; loops >= 0; --loops) {
                m[i][i] = loops;
                remaining[i] -= 2 * loops;
                fill(i, j + 1);
                remaining[i] += 2 * loops;
            }
            m[i][i] = 0;
            return;
        }
        int capacity = 0;
        for (int k = j; k < v; ++k) capacity += remaining[k];
        if (capacity < remaining[i]) return;
        const int hi = std::min(remaining[i], remaining[j]);
        for (int mult = hi; mult >= 0; --mult) {
            m[i][j] = m[j][i] = mult;
            remaining[i] -= mult;
            remaining[j] -= mult;
            fill(i, j + 1);
            remaining[i] += mult;
            remaining[j] += mult;
        }
        m[i][j] = m[j][i] = 0;
    }
};

void degree_sequences(int v, int total, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == v) {
        if (total == 0) out.push_back(cur);
        return;
    }
    const int left = v - static_cast<int>(cur.size());
    for (int d = std::min(max_part, total - 3 * (left - 1)); d >= 3; --d) {
        if (d * left < total) break;
        cur.push_back(d);
        degree_sequences(v, total - d, d, cur, out);
        cur.pop_back();
    }
}

bool graph_order(const HalfEdgeGraph& a, const HalfEdgeGraph& b) {
    if (a.edge_count() != b.edge_count()) return a.edge_count() < b.edge_count();
    if (a.vertex_count() != b.vertex_count()) return a.vertex_count() < b.vertex_count();
    return canonical_form(a) < canonical_form(b);
}

using Bits = std::vector<std::uint64_t>;

Bits stabilizer_bits(const AutGroup& grp, const Forest& f) {
    Bits b((grp.order() + 63) / 64, 0);
    const auto& els = grp.elements();
    for (std::size_t i = 0; i < els.size(); ++i)
        if (apply(grp.graph(), els[i], f) == f) b[i / 64] |= std::uint64_t{1} << (i % 64);
    return b;
}

std::uint64_t popcount(const Bits& b) {
    std::uint64_t n = 0;
    for (auto w : b) n += static_cast<std::uint64_t>(__builtin_popcountll(w));
    return n;
}

ForestChain image(const HalfEdgeGraph& g, const GraphAutomorphism& a, const ForestChain& c) {
    ForestChain out;
    for (const auto& f : c.forests) out.forests.push_back(apply(g, a, f));
    return out;
}

ForestChain canonical_chain(const AutGroup& grp, const ForestChain& c) {
    ForestChain best = c;
    for (const auto& a : grp.elements()) {
        ForestChain img = image(grp.graph(), a, c);
        if (img < best) best = std::move(img);
    }
    return best;
}

struct ChainSearch {
    const AutGroup& grp;
    std::uint64_t p;
    int dim;
    std::vector<Forest> singular;
    std::vector<Bits> stab;
    std::set<ForestChain> seen;
    std::vector<ForestChain> reps;

    void record(const ForestChain& chain) {
        if (seen.count(chain)) return;
        std::set<ForestChain> orbit;
        for (const auto& a : grp.elements()) orbit.insert(image(grp.graph(), a, chain));
        seen.insert(orbit.begin(), orbit.end());
        reps.push_back(*orbit.begin());
    }

    void extend(std::vector<int>& idx, const Bits& iso) {
        if (static_cast<int>(idx.size()) == dim) {
            ForestChain c;
            for (int i : idx) c.forests.push_back(singular[i]);
            record(c);
            return;
        }
        for (std::size_t k = 0; k < singular.size(); ++k) {
            if (!idx.empty()) {
                const Forest& last = singular[idx.back()];
                if (singular[k].size() >= last.size() || !singular[k].is_subset_of(last)) continue;
            }
            Bits next = iso;
            for (std::size_t w = 0; w < next.size(); ++w) next[w] &= stab[k][w];
            if (popcount(next) % p != 0) continue;
            idx.push_back(static_cast<int>(k));
            extend(idx, next);
            idx.pop_back();
        }
    }
};

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

std::vector<HalfEdgeGraph> enumerate_admissible_graphs(int rank, const EnumerationLimits& limits) {
    if (rank < 2) throw GraphError("enumerate_admissible requires rank >= 2");
    std::vector<HalfEdgeGraph> all;
    std::uint64_t used = 0;
    for (int v = 1; v <= 2 * rank - 2; ++v) {
        const int e = rank + v - 1;
        if (e > 3 * rank - 3) break;
        std::vector<std::vector<int>> seqs;
        std::vector<int> cur;
        degree_sequences(v, 2 * e, 2 * e, cur, seqs);
        MatrixSearch search{v, {}, std::vector<std::vector<int>>(v, std::vector<int>(v, 0)), {}, {}, used,
                            limits.max_configurations, rank};
        for (const auto& d : seqs) {
            search.remaining = d;
            search.fill(0, 0);
        }
        used = search.configurations;
        for (auto& g : search.found) all.push_back(std::move(g));
    }
    std::sort(all.begin(), all.end(), graph_order);
    return all;
}

std::vector<CanonicalForm> enumerate_admissible(int rank, const EnumerationLimits& limits) {
    std::vector<CanonicalForm> out;
    for (const auto& g : enumerate_admissible_graphs(rank, limits)) out.push_back(canonical_form(g));
    return out;
}

std::vector<SingularGraph> singular_graphs(int p, int rank, const EnumerationLimits& limits) {
    std::vector<SingularGraph> out;
    for (auto& g : enumerate_admissible_graphs(rank, limits)) {
        // By Cauchy's theorem an element of order p exists iff p divides |Aut|.
        if (automorphism_group_order(g) % static_cast<std::uint64_t>(p) != 0) continue;
        SingularGraph s;
        s.form = canonical_form(g);
        s.group = automorphism_group(g);
        s.graph = std::move(g);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<QuotientCell> enumerate_cells(const std::vector<SingularGraph>& census, int p, int dim) {
    std::vector<QuotientCell> out;
    for (std::size_t t = 0; t < census.size(); ++t) {
        const AutGroup& grp = census[t].group;
        if (dim == 0) {
            QuotientCell c;
            c.dim = 0;
            c.top = static_cast<int>(t);
            c.isotropy = grp;
            c.vertices = {static_cast<int>(t)};
            out.push_back(std::move(c));
            continue;
        }
        ChainSearch search{grp, static_cast<std::uint64_t>(p), dim, {}, {}, {}, {}};
        for (const auto& f : enumerate_forests(grp.graph())) {
            if (f.empty()) continue;
            Bits b = stabilizer_bits(grp, f);
            if (popcount(b) % static_cast<std::uint64_t>(p) != 0) continue;
            search.singular.push_back(f);
            search.stab.push_back(std::move(b));
        }
        std::vector<int> idx;
        Bits all(((grp.order() + 63) / 64), ~std::uint64_t{0});
        search.extend(idx, all);
        std::sort(search.reps.begin(), search.reps.end());
        for (const auto& rep : search.reps) {
            std::vector<GraphAutomorphism> iso;
            for (const auto& a : grp.elements())
                if (image(grp.graph(), a, rep) == rep) iso.push_back(a);
            QuotientCell c;
            c.dim = dim;
            c.top = static_cast<int>(t);
            c.chain = rep;
            c.isotropy = subgroup_from_elements(grp.graph(), std::move(iso));
            out.push_back(std::move(c));
        }
    }
    return out;
}

QuotientComplex quotient_complex(int p, int rank, const EnumerationLimits& limits) {
    return quotient_complex(p, rank, singular_graphs(p, rank, limits));
}

QuotientComplex quotient_complex(int p, int rank, std::vector<SingularGraph> census) {
    QuotientComplex qc;
    qc.p = p;
    qc.rank = rank;
    qc.graphs = std::move(census);
    std::map<CanonicalForm, int> by_form;
    for (std::size_t i = 0; i < qc.graphs.size(); ++i) by_form[qc.graphs[i].form] = static_cast<int>(i);

    for (int d = 0; d <= 2 * rank - 3; ++d) {
        auto cells = enumerate_cells(qc.graphs, p, d);
        if (cells.empty()) break;
        qc.cells.push_back(std::move(cells));
    }
    std::vector<std::map<std::pair<int, ForestChain>, int>> lookup(qc.cells.size());
    for (std::size_t d = 0; d < qc.cells.size(); ++d)
        for (std::size_t i = 0; i < qc.cells[d].size(); ++i)
            lookup[d][{qc.cells[d][i].top, qc.cells[d][i].chain}] = static_cast<int>(i);

    auto census_index = [&](const HalfEdgeGraph& g) {
        auto it = by_form.find(canonical_form(g));
        if (it == by_form.end()) throw std::logic_error("face graph is not in the singular census");
        return it->second;
    };
    auto find_cell = [&](int d, int top, const ForestChain& chain) {
        if (d == 0) return top;
        const ForestChain rep = canonical_chain(qc.graphs[top].group, chain);
        auto it = lookup[d].find({top, rep});
        if (it == lookup[d].end()) throw std::logic_error("face chain is not a cell of the complex");
        return it->second;
    };

    for (std::size_t d = 1; d < qc.cells.size(); ++d) {
        for (auto& cell : qc.cells[d]) {
            const HalfEdgeGraph& top = qc.graphs[cell.top].graph;
            const int k = static_cast<int>(d);
            cell.faces.assign(k + 1, -1);
            cell.vertices.assign(k + 1, cell.top);
            for (int i = 0; i < k; ++i) {
                ForestChain sub;
                for (int m = 0; m < k; ++m)
                    if (m != i) sub.forests.push_back(cell.chain.forests[m]);
                cell.faces[i] = find_cell(k - 1, cell.top, sub);
                cell.vertices[i] = census_index(collapse(top, cell.chain.forests[i]));
            }
            const Collapse col = collapse_with_map(top, cell.chain.forests[k - 1]);
            const auto rep = canonical_representative(col.graph);
            const int j = census_index(rep.graph);
            ForestChain sub;
            for (int m = 0; m + 1 < k; ++m)
                sub.forests.push_back(transport(col.graph, rep.graph, rep.iso, col.image(top, cell.chain.forests[m])));
            cell.faces[k] = find_cell(k - 1, j, sub);
        }
    }

    UnionFind uf(static_cast<int>(qc.graphs.size()));
    if (qc.cells.size() > 1)
        for (const auto& e : qc.cells[1]) uf.unite(e.faces[0], e.faces[1]);
    std::map<int, int> comp_id;
    qc.component_of_vertex.assign(qc.graphs.size(), -1);
    for (std::size_t v = 0; v < qc.graphs.size(); ++v) {
        const int r = uf.find(static_cast<int>(v));
        auto it = comp_id.find(r);
        if (it == comp_id.end()) it = comp_id.emplace(r, static_cast<int>(comp_id.size())).first;
        qc.component_of_vertex[v] = it->second;
    }
    qc.component_count = static_cast<int>(comp_id.size());
    return qc;
}

int simplicial_identity_violations(const QuotientComplex& qc) {
    int bad = 0;
    for (int d = 2; d <= qc.max_dim(); ++d) {
        for (const auto& cell : qc.cells[d]) {
            for (int j = 1; j <= d; ++j)
                for (int i = 0; i < j; ++i) {
                    const int a = qc.cells[d - 1][cell.faces[j]].faces[i];
                    const int b = qc.cells[d - 1][cell.faces[i]].faces[j - 1];
                    if (a != b) ++bad;
                }
        }
    }
    return bad;
}

std::vector<int> reduced_homology(const QuotientComplex& qc, int component, std::uint64_t p) {
    const PrimeField F(p);
    const int top = qc.max_dim();
    std::vector<std::vector<int>> members(top + 1);
    std::vector<std::map<int, int>> local(top + 1);
    for (int d = 0; d <= top; ++d)
        for (std::size_t i = 0; i < qc.cells[d].size(); ++i)
            if (component < 0 || qc.component_of(d, static_cast<int>(i)) == component) {
                local[d][static_cast<int>(i)] = static_cast<int>(members[d].size());
                members[d].push_back(static_cast<int>(i));
            }
    // rank of boundary d -> d-1; d = 0 is the augmentation.
    std::vector<int> ranks(top + 2, 0);
    for (int d = 0; d <= top; ++d) {
        const int cols = static_cast<int>(members[d].size());
        if (cols == 0) continue;
        const int rows = d == 0 ? 1 : static_cast<int>(members[d - 1].size());
        FpMatrix m(rows, cols, p);
        for (int c = 0; c < cols; ++c) {
            if (d == 0) {
                m.at(0, c) = 1;
                continue;
            }
            const auto& cell = qc.cells[d][members[d][c]];
            for (int i = 0; i <= d; ++i) {
                const int r = local[d - 1].at(cell.faces[i]);
                m.at(r, c) = (i % 2 == 0) ? F.add(m.at(r, c), 1) : F.sub(m.at(r, c), 1);
            }
        }
        ranks[d] = m.rank();
    }
    std::vector<int> betti(top + 1, 0);
    for (int d = 0; d <= top; ++d)
        betti[d] = static_cast<int>(members[d].size()) - ranks[d] - ranks[d + 1];
    return betti;
}

GraphSignature signature(const SingularGraph& g) {
    return {g.graph.vertex_count(), g.graph.edge_count(), g.graph.loop_count(), g.graph.degree_sequence(),
            g.group.order()};
}

std::vector<std::string> match_names(const QuotientComplex& qc, const std::vector<TableOneEntry>& table,
                                     const std::vector<TableTwoEntry>& relations) {
    const std::size_t n = qc.graphs.size();
    std::vector<std::vector<std::string>> candidates(n);
    for (std::size_t i = 0; i < n; ++i) {
        const GraphSignature s = signature(qc.graphs[i]);
        for (const auto& t : table)
            if (GraphSignature{t.vertices, t.edges, t.loops, t.degrees, t.aut_order} == s)
                candidates[i].push_back(t.name);
    }
    std::vector<std::string> names(n);
    for (std::size_t i = 0; i < n; ++i)
        if (candidates[i].size() == 1) names[i] = candidates[i].front();

    using Relation = std::tuple<int, std::string, std::uint64_t>;
    auto computed_relations = [&](int v) {
        std::multiset<Relation> out;
        if (qc.cells.size() < 2) return out;
        for (const auto& e : qc.cells[1]) {
            const int top = e.faces[0], bottom = e.faces[1];
            if (top == v) out.insert({0, names[bottom], e.isotropy.order()});
            if (bottom == v) out.insert({1, names[top], e.isotropy.order()});
        }
        return out;
    };
    auto table_relations = [&](const std::string& name) {
        std::multiset<Relation> out;
        for (const auto& r : relations) {
            if (r.top == name) out.insert({0, r.bottom, r.isotropy_order});
            if (r.bottom == name) out.insert({1, r.top, r.isotropy_order});
        }
        return out;
    };

    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!names[i].empty() || candidates[i].size() < 2) continue;
            const auto mine = computed_relations(static_cast<int>(i));
            bool complete = true;
            for (const auto& r : mine)
                if (std::get<1>(r).empty()) complete = false;
            if (!complete) continue;
            std::vector<std::string> fits;
            for (const auto& c : candidates[i])
                if (table_relations(c) == mine) fits.push_back(c);
            if (fits.size() == 1) {
                names[i] = fits.front();
                progress = true;
            }
        }
    }
    std::set<std::string> used;
    for (std::size_t i = 0; i < n; ++i) {
        if (candidates[i].empty())
            throw NameError("no table entry matches census graph " + std::to_string(i));
        if (candidates[i].size() > 1 && names[i].empty())
            throw NameError("ambiguous name for census graph " + std::to_string(i) +
                            ": signature shared by several table entries and collapse relations do not decide");
        if (!names[i].empty() && !used.insert(names[i]).second)
            throw NameError("table name '" + names[i] + "' matches more than one census graph");
    }
    return names;
}

}  // namespace spinelab
