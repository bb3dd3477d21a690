#include "spinelab/equivariant.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "spinelab/canon.hpp"
#include "spinelab/field.hpp"

namespace spinelab {

std::vector<GraphAutomorphism> EquivariantGraph::group_elements() const {
    return generated_subgroup(graph, generators).elements();
}

bool EquivariantGraph::trivial() const {
    for (const auto& g : generators)
        if (!g.is_identity()) return false;
    return true;
}

ZpGraph make_zp_graph(HalfEdgeGraph g, GraphAutomorphism action, int p) {
    if (!is_automorphism(g, action)) throw EquivariantError("action is not an automorphism of the graph");
    if (action.order() != p)
        throw EquivariantError("action has order " + std::to_string(action.order()) + ", expected " + std::to_string(p));
    ZpGraph z;
    z.graph = std::move(g);
    z.generators = {std::move(action)};
    z.p = p;
    return z;
}

EquivariantGraph make_equivariant_graph(HalfEdgeGraph g, std::vector<GraphAutomorphism> gens, int p) {
    for (const auto& a : gens) {
        if (!is_automorphism(g, a)) throw EquivariantError("generator is not an automorphism of the graph");
        if (a.order() != p && !a.is_identity()) throw EquivariantError("generator order is not p");
    }
    EquivariantGraph z;
    z.graph = std::move(g);
    z.generators = std::move(gens);
    z.p = p;
    return z;
}

nlohmann::ordered_json to_json(const EquivariantGraph& zg) {
    nlohmann::ordered_json j = to_json(zg.graph);
    j["action_vperm"] = zg.action().vperm;
    j["action_hperm"] = zg.action().hperm;
    j["p"] = zg.p;
    if (zg.generators.size() > 1) {
        nlohmann::ordered_json extra = nlohmann::ordered_json::array();
        for (std::size_t i = 1; i < zg.generators.size(); ++i) extra.push_back(to_json(zg.generators[i]));
        j["extra_generators"] = extra;
    }
    return j;
}

EquivariantGraph equivariant_from_json(const nlohmann::json& j) {
    HalfEdgeGraph g = graph_from_json(j);
    GraphAutomorphism a;
    int p = 0;
    std::vector<GraphAutomorphism> gens;
    try {
        a.vperm = j.at("action_vperm").get<std::vector<int>>();
        a.hperm = j.at("action_hperm").get<std::vector<int>>();
        p = j.at("p").get<int>();
        gens.push_back(a);
        if (j.contains("extra_generators"))
            for (const auto& x : j.at("extra_generators")) gens.push_back(automorphism_from_json(x));
    } catch (const nlohmann::json::exception& e) {
        throw EquivariantError(std::string("malformed equivariant graph JSON: ") + e.what());
    }
    if (gens.size() == 1) return make_zp_graph(std::move(g), std::move(gens.front()), p);
    return make_equivariant_graph(std::move(g), std::move(gens), p);
}

namespace {

// Edges fixed (with both half-edges) by every generator that share endpoints
// and forest membership are interchangeable; all but one per class are
// dropped and the survivor carries the class size as a color.
struct TwinCompression {
    std::vector<int> multiplicity;  // per half-edge: 0 = dropped, else class size
};

TwinCompression compress_twins(const HalfEdgeGraph& g, const std::vector<GraphAutomorphism>& gens,
                               const Forest& forest) {
    TwinCompression tc;
    tc.multiplicity.assign(g.half_edge_count(), 1);
    std::map<std::tuple<int, int, bool>, std::vector<int>> classes;
    for (int e = 0; e < g.edge_count(); ++e) {
        const int h = g.edge_half(e);
        bool fixed = true;
        for (const auto& a : gens)
            if (a.hperm[h] != h || a.hperm[g.sigma(h)] != g.sigma(h)) fixed = false;
        if (!fixed) continue;
        // Orient non-loop twins the same way: key on (source, target) of h.
        classes[{g.source(h), g.target(h), forest.contains(e)}].push_back(e);
    }
    std::map<std::tuple<int, int, bool>, std::vector<int>> merged;
    for (auto& [key, edges] : classes) {
        auto [s, t, f] = key;
        auto& dst = merged[{std::min(s, t), std::max(s, t), f}];
        dst.insert(dst.end(), edges.begin(), edges.end());
    }
    for (auto& [key, edges] : merged) {
        std::sort(edges.begin(), edges.end());
        const int m = static_cast<int>(edges.size());
        for (int i = 0; i < m; ++i) {
            const int h = g.edge_half(edges[i]);
            tc.multiplicity[h] = tc.multiplicity[g.sigma(h)] = (i == 0 ? m : 0);
        }
    }
    return tc;
}

ColoredStructure action_structure(const HalfEdgeGraph& g, const std::vector<GraphAutomorphism>& gens,
                                  const Forest& forest, const TwinCompression& tc) {
    const int V = g.vertex_count(), H = g.half_edge_count();
    std::vector<int> point(H, -1);
    int n = V;
    for (int h = 0; h < H; ++h)
        if (tc.multiplicity[h] > 0) point[h] = n++;
    ColoredStructure s(n);
    for (int h = 0; h < H; ++h) {
        if (point[h] < 0) continue;
        const int x = point[h];
        s.color[x] = 1 + (forest.contains(g.edge_of(h)) ? 1u : 0u) + 2u * static_cast<std::uint32_t>(tc.multiplicity[h]);
        s.at(x, point[g.sigma(h)]) |= 1u;
        s.at(x, g.target(h)) |= 2u;
    }
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const std::uint32_t bit = 4u << i;
        for (int v = 0; v < V; ++v) s.at(v, gens[i].vperm[v]) |= bit;
        for (int h = 0; h < H; ++h)
            if (point[h] >= 0) s.at(point[h], point[gens[i].hperm[h]]) |= bit;
    }
    return s;
}

int gcd(int a, int b) { return b == 0 ? a : gcd(b, a % b); }

}  // namespace

EquivariantCode equivariant_form(const EquivariantGraph& zg, const Forest& forest) {
    std::vector<std::vector<GraphAutomorphism>> tuples;
    if (zg.generators.size() == 1) {
        const GraphAutomorphism& g = zg.generators.front();
        const int n = g.order();
        for (int k = 1; k <= std::max(1, n - 1); ++k)
            if (n == 1 || gcd(k, n) == 1) tuples.push_back({g.power(k)});
    } else {
        const auto els = zg.group_elements();
        const std::size_t r = zg.generators.size();
        std::vector<std::size_t> idx(r, 0);
        while (true) {
            std::vector<GraphAutomorphism> t;
            for (auto i : idx) t.push_back(els[i]);
            if (generated_subgroup(zg.graph, t).order() == els.size()) tuples.push_back(std::move(t));
            std::size_t pos = 0;
            while (pos < r && ++idx[pos] == els.size()) idx[pos++] = 0;
            if (pos == r) break;
        }
    }
    const TwinCompression tc = compress_twins(zg.graph, zg.generators, forest);
    EquivariantCode best;
    for (const auto& t : tuples) {
        auto code = canonical_labeling(action_structure(zg.graph, t, forest, tc)).code;
        if (best.empty() || code < best) best = std::move(code);
    }
    return best;
}

bool equivariantly_isomorphic(const EquivariantGraph& a, const EquivariantGraph& b) {
    return a.generators.size() == b.generators.size() && equivariant_form(a) == equivariant_form(b);
}

std::vector<std::vector<int>> edge_orbits(const EquivariantGraph& zg) {
    const HalfEdgeGraph& g = zg.graph;
    std::vector<int> comp(g.edge_count(), -1);
    std::vector<std::vector<int>> out;
    for (int e = 0; e < g.edge_count(); ++e) {
        if (comp[e] >= 0) continue;
        std::vector<int> orbit{e}, stack{e};
        comp[e] = static_cast<int>(out.size());
        while (!stack.empty()) {
            const int cur = stack.back();
            stack.pop_back();
            for (const auto& a : zg.generators) {
                const int img = g.edge_of(a.hperm[g.edge_half(cur)]);
                if (comp[img] < 0) {
                    comp[img] = comp[e];
                    orbit.push_back(img);
                    stack.push_back(img);
                }
            }
        }
        std::sort(orbit.begin(), orbit.end());
        out.push_back(std::move(orbit));
    }
    return out;
}

bool is_invariant(const EquivariantGraph& zg, const Forest& f) {
    for (const auto& a : zg.generators)
        if (!(apply(zg.graph, a, f) == f)) return false;
    return true;
}

bool is_reduced(const EquivariantGraph& zg) {
    // A nonempty invariant forest contains an orbit, and subsets of forests
    // are forests, so it suffices to test single orbits.
    for (const auto& orbit : edge_orbits(zg))
        if (is_forest(zg.graph, Forest(orbit))) return false;
    return true;
}

std::vector<Forest> invariant_forests(const EquivariantGraph& zg) {
    std::vector<Forest> out;
    for (auto& f : enumerate_forests(zg.graph))
        if (!f.empty() && is_invariant(zg, f)) out.push_back(std::move(f));
    return out;
}

EquivariantGraph collapse(const EquivariantGraph& zg, const Forest& f) {
    if (!is_invariant(zg, f)) throw EquivariantError("collapse: forest is not invariant");
    const Collapse col = collapse_with_map(zg.graph, f);
    EquivariantGraph out;
    out.graph = col.graph;
    out.p = zg.p;
    for (const auto& a : zg.generators) {
        GraphAutomorphism b = GraphAutomorphism::identity(col.graph);
        for (int v = 0; v < zg.graph.vertex_count(); ++v) b.vperm[col.vertex_map[v]] = col.vertex_map[a.vperm[v]];
        for (int h = 0; h < zg.graph.half_edge_count(); ++h) {
            const int n = col.half_edge_map[h];
            if (n >= 0) b.hperm[n] = col.half_edge_map[a.hperm[h]];
        }
        out.generators.push_back(std::move(b));
    }
    return out;
}

namespace {

// Graph assembled from vertex and edge orbits; edges keep orientation under
// the action.
struct Builder {
    explicit Builder(int prime) : p(prime) {}
    int p;
    int vertices = 0;
    std::vector<int> vperm;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> eperm;

    int fixed_vertex() {
        vperm.push_back(vertices);
        return vertices++;
    }
    int free_orbit() {
        const int base = vertices;
        for (int k = 0; k < p; ++k) vperm.push_back(base + (k + 1) % p);
        vertices += p;
        return base;
    }
    void fixed_edge(int a, int b) {
        eperm.push_back(static_cast<int>(edges.size()));
        edges.emplace_back(a, b);
    }
    // Edge k joins ends(k); the action sends edge k to edge k+1.
    template <typename Ends>
    void edge_orbit(Ends ends) {
        const int base = static_cast<int>(edges.size());
        for (int k = 0; k < p; ++k) {
            edges.push_back(ends(k));
            eperm.push_back(base + (k + 1) % p);
        }
    }
    ZpGraph build() const {
        HalfEdgeGraph g = HalfEdgeGraph::from_edges(vertices, edges);
        GraphAutomorphism a;
        a.vperm = vperm;
        a.hperm.resize(g.half_edge_count());
        for (std::size_t i = 0; i < edges.size(); ++i) {
            a.hperm[2 * i] = 2 * eperm[i];
            a.hperm[2 * i + 1] = 2 * eperm[i] + 1;
        }
        ZpGraph z;
        z.graph = std::move(g);
        z.generators = {std::move(a)};
        z.p = p;
        if (!is_automorphism(z.graph, z.action())) throw std::logic_error("builder produced an invalid action");
        return z;
    }
};

void compositions(int total, int slots, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == slots - 1) {
        cur.push_back(total);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int x = 0; x <= total; ++x) {
        cur.push_back(x);
        compositions(total - x, slots, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> compositions(int total, int slots) {
    std::vector<std::vector<int>> out;
    if (slots == 0) {
        if (total == 0) out.push_back({});
        return out;
    }
    std::vector<int> cur;
    compositions(total, slots, cur, out);
    return out;
}

// Smallest s with g^s(a) = b, or -1.
int shift_between(const GraphAutomorphism& g, int a, int b, int p) {
    int cur = a;
    for (int s = 0; s < p; ++s) {
        if (cur == b) return s;
        cur = g.vperm[cur];
    }
    return -1;
}

}  // namespace

std::string describe_reduced(const EquivariantGraph& zg) {
    const HalfEdgeGraph& g = zg.graph;
    const GraphAutomorphism& a = zg.action();
    std::vector<int> fixed;
    int free_vertices = 0;
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (a.vperm[v] == v)
            fixed.push_back(v);
        else
            ++free_vertices;
    }
    const int r = rank(g);
    std::ostringstream os;
    if (free_vertices == 0) {
        if (fixed.size() == 1) {
            os << "R" << r;
        } else if (fixed.size() == 2) {
            int s = g.loops_at(fixed[0]), t = g.loops_at(fixed[1]);
            if (s > t) std::swap(s, t);
            os << "Theta" << zg.p - 1 << "^{" << s << "," << t << "}";
        } else if (fixed.size() == 3) {
            os << "Theta" << zg.p - 1 << "vTheta" << zg.p - 1 << "(diag)";
        } else {
            os << "fixed" << fixed.size() << "v" << g.edge_count() << "e";
        }
        return os.str();
    }
    if (fixed.empty()) {
        std::vector<int> volts;
        for (const auto& orbit : edge_orbits(zg)) {
            auto [x, y] = g.endpoints(orbit.front());
            const int s = shift_between(a, x, y, zg.p);
            volts.push_back(std::min(s, zg.p - s));
        }
        std::sort(volts.begin(), volts.end());
        os << "free[";
        for (std::size_t i = 0; i < volts.size(); ++i) os << (i ? "," : "") << volts[i];
        os << "]";
        return os.str();
    }
    os << "mixed" << fixed.size() << "+" << free_vertices << "v" << g.edge_count() << "e";
    return os.str();
}

std::vector<ReducedClass> classify_reduced(int p, int rank_n, int max_edges) {
    std::vector<ReducedClass> out;
    std::set<EquivariantCode> seen;
    auto consider = [&](const ZpGraph& z) {
        if (z.graph.edge_count() > max_edges) return;
        if (z.trivial() || !is_admissible(z.graph) || !is_reduced(z)) return;
        auto form = equivariant_form(z);
        if (!seen.insert(form).second) return;
        out.push_back({describe_reduced(z), z, std::move(form)});
    };

    // Only fixed vertices: fixed loops, p-bundles between fixed vertices and
    // p-orbits of loops. Fixed non-loop edges and stars are forests.
    const int fmax = (rank_n + p - 1) / (p - 1);
    for (int f = 1; f <= fmax; ++f) {
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < f; ++i)
            for (int j = i + 1; j < f; ++j) pairs.emplace_back(i, j);
        const int slots = static_cast<int>(pairs.size()) + f;
        for (int T = 0; p * T <= rank_n + f - 1; ++T) {
            const int L = rank_n + f - 1 - p * T;
            if (L + p * T > max_edges) continue;
            for (const auto& orb : compositions(T, slots)) {
                for (const auto& loops : compositions(L, f)) {
                    Builder b{p};
                    for (int i = 0; i < f; ++i) b.fixed_vertex();
                    for (std::size_t k = 0; k < pairs.size(); ++k)
                        for (int c = 0; c < orb[k]; ++c) {
                            auto [i, j] = pairs[k];
                            b.edge_orbit([i = i, j = j](int) { return std::make_pair(i, j); });
                        }
                    for (int i = 0; i < f; ++i) {
                        for (int c = 0; c < orb[pairs.size() + i]; ++c)
                            b.edge_orbit([i](int) { return std::make_pair(i, i); });
                        for (int c = 0; c < loops[i]; ++c) b.fixed_edge(i, i);
                    }
                    consider(b.build());
                }
            }
        }
    }

    // One free vertex orbit and no fixed vertices: edge orbits u_k -> u_{k+s}.
    if ((rank_n - 1) % p == 0) {
        const int d = (rank_n - 1) / p + 1;
        if (p * d <= max_edges) {
            const int smax = (p - 1) / 2;
            std::vector<int> volts(d, 0);
            while (true) {
                Builder b{p};
                const int base = b.free_orbit();
                for (int s : volts)
                    b.edge_orbit([&, s](int k) { return std::make_pair(base + k, base + (k + s) % p); });
                consider(b.build());
                int pos = d - 1;
                while (pos >= 0 && volts[pos] == smax) --pos;
                if (pos < 0) break;
                ++volts[pos];
                for (int q = pos + 1; q < d; ++q) volts[q] = volts[pos];
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const ReducedClass& a, const ReducedClass& b) {
        if (a.graph.graph.vertex_count() != b.graph.graph.vertex_count())
            return a.graph.graph.vertex_count() < b.graph.graph.vertex_count();
        if (a.name != b.name) return a.name < b.name;
        return a.form < b.form;
    });
    return out;
}

std::vector<ReducedClass> classify_reduced(int p) {
    if (p < 3 || !is_prime(static_cast<std::uint64_t>(p))) throw EquivariantError("classify_reduced requires an odd prime");
    const int n = 2 * (p - 1);
    return classify_reduced(p, n, 3 * n - 3);
}

std::vector<NielsenMove> nielsen_moves(const EquivariantGraph& zg) {
    const HalfEdgeGraph& g = zg.graph;
    const int H = g.half_edge_count();
    const auto els = zg.group_elements();
    std::vector<int> orbit(H, -1);
    int next = 0;
    for (int h = 0; h < H; ++h) {
        if (orbit[h] >= 0) continue;
        for (const auto& a : els) orbit[a.hperm[h]] = next;
        ++next;
    }
    std::vector<std::vector<char>> stab(H, std::vector<char>(els.size(), 0));
    for (int h = 0; h < H; ++h)
        for (std::size_t i = 0; i < els.size(); ++i) stab[h][i] = els[i].hperm[h] == h;

    std::vector<NielsenMove> out;
    for (int e1 = 0; e1 < H; ++e1) {
        for (int e2 = 0; e2 < H; ++e2) {
            if (g.target(e1) != g.target(e2)) continue;
            if (orbit[e2] == orbit[e1] || orbit[e2] == orbit[g.sigma(e1)]) continue;
            bool contained = true;
            for (std::size_t i = 0; i < els.size(); ++i)
                if (stab[e1][i] && !stab[e2][i]) contained = false;
            if (!contained) continue;
            std::vector<int> target = g.target_map();
            for (const auto& a : els) target[a.hperm[e1]] = g.target(g.sigma(a.hperm[e2]));
            EquivariantGraph r;
            r.graph = HalfEdgeGraph(g.vertex_count(), g.sigma_map(), std::move(target));
            r.generators = zg.generators;
            r.p = zg.p;
            for (const auto& a : r.generators)
                if (!is_automorphism(r.graph, a)) throw std::logic_error("Nielsen move broke equivariance");
            out.push_back({e1, e2, std::move(r)});
        }
    }
    return out;
}

std::vector<EquivariantGraph> reductions(const EquivariantGraph& zg) {
    std::vector<EquivariantGraph> out;
    std::set<EquivariantCode> done, emitted;
    std::vector<EquivariantGraph> stack{zg};
    done.insert(equivariant_form(zg));
    while (!stack.empty()) {
        EquivariantGraph cur = std::move(stack.back());
        stack.pop_back();
        bool reduced = true;
        for (const auto& orbit : edge_orbits(cur)) {
            Forest f(orbit);
            if (!is_forest(cur.graph, f)) continue;
            reduced = false;
            EquivariantGraph nxt = collapse(cur, f);
            if (done.insert(equivariant_form(nxt)).second) stack.push_back(std::move(nxt));
        }
        if (reduced && emitted.insert(equivariant_form(cur)).second) out.push_back(std::move(cur));
    }
    return out;
}

std::vector<ReducedClass> nielsen_closure(const EquivariantGraph& zg, std::size_t max_classes) {
    if (!is_reduced(zg)) throw EquivariantError("nielsen_closure requires a reduced graph");
    std::vector<ReducedClass> classes;
    std::set<EquivariantCode> seen;
    std::deque<EquivariantGraph> queue;
    auto add = [&](const EquivariantGraph& x) {
        auto form = equivariant_form(x);
        if (!seen.insert(form).second) return;
        if (seen.size() > max_classes) throw ResourceError("Nielsen closure exceeds class cap");
        classes.push_back({describe_reduced(x), x, std::move(form)});
        queue.push_back(x);
    };
    add(zg);
    while (!queue.empty()) {
        EquivariantGraph cur = std::move(queue.front());
        queue.pop_front();
        for (const auto& mv : nielsen_moves(cur))
            for (const auto& r : reductions(mv.result)) add(r);
    }
    return classes;
}

bool has_fixed_vertex(const EquivariantGraph& zg) {
    for (int v = 0; v < zg.graph.vertex_count(); ++v) {
        bool fixed = true;
        for (const auto& a : zg.generators)
            if (a.vperm[v] != v) fixed = false;
        if (fixed) return true;
    }
    return false;
}

namespace {

struct Draft {
    int vertices;
    std::vector<int> sigma, target;
    GraphAutomorphism act;

    explicit Draft(const ZpGraph& z)
        : vertices(z.graph.vertex_count()), sigma(z.graph.sigma_map()), target(z.graph.target_map()), act(z.action()) {}

    int add_vertex(int image) {
        act.vperm.push_back(image);
        return vertices++;
    }
    // New edge; returns its first half-edge (target b); the other targets a.
    int add_edge(int a, int b) {
        const int h = static_cast<int>(sigma.size());
        sigma.push_back(h + 1);
        sigma.push_back(h);
        target.push_back(b);
        target.push_back(a);
        act.hperm.push_back(h);
        act.hperm.push_back(h + 1);
        return h;
    }
    Expansion finish(ExpansionKind kind, int first_new_half, int p) const {
        Expansion e;
        e.kind = kind;
        e.graph.graph = HalfEdgeGraph(vertices, sigma, target);
        e.graph.generators = {act};
        e.graph.p = p;
        std::vector<int> edges;
        for (int h = first_new_half; h < static_cast<int>(sigma.size()); h += 2) edges.push_back(e.graph.graph.edge_of(h));
        e.forest = Forest(std::move(edges));
        return e;
    }
};

std::vector<std::vector<int>> local_orbits(const ZpGraph& z, const std::vector<int>& halves) {
    std::vector<std::vector<int>> out;
    std::set<int> seen;
    for (int h : halves) {
        if (seen.count(h)) continue;
        std::vector<int> orbit;
        int cur = h;
        do {
            orbit.push_back(cur);
            seen.insert(cur);
            cur = z.action().hperm[cur];
        } while (cur != h);
        out.push_back(std::move(orbit));
    }
    return out;
}

}  // namespace

std::vector<Expansion> equivariant_expansions(const ZpGraph& zg, int edge_budget) {
    if (zg.generators.size() != 1) throw EquivariantError("expansions are defined for cyclic actions");
    const HalfEdgeGraph& g = zg.graph;
    const GraphAutomorphism& a = zg.action();
    const int p = zg.p;
    const int E = g.edge_count();
    std::vector<Expansion> out;
    std::set<EquivariantCode> seen;
    auto consider = [&](Expansion e) {
        if (!is_admissible(e.graph.graph)) return;
        if (!is_invariant(e.graph, e.forest)) throw std::logic_error("expansion forest is not invariant");
        e.form = equivariant_form(e.graph, e.forest);
        if (seen.insert(e.form).second) out.push_back(std::move(e));
    };
    std::vector<GraphAutomorphism> powers{GraphAutomorphism::identity(g)};
    for (int k = 1; k < p; ++k) powers.push_back(compose(a, powers.back()));

    for (int v = 0; v < g.vertex_count(); ++v) {
        const auto halves = g.half_edges_at(v);
        if (a.vperm[v] == v) {
            const auto orbits = local_orbits(zg, halves);
            // Fixed split: move a union of orbits not containing the first
            // half-edge to a new fixed vertex joined by a fixed edge.
            if (E + 1 <= edge_budget) {
                const int k = static_cast<int>(orbits.size());
                for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
                    if (mask & 1) continue;
                    int moved = 0;
                    for (int i = 0; i < k; ++i)
                        if (mask >> i & 1) moved += static_cast<int>(orbits[i].size());
                    if (moved < 2 || static_cast<int>(halves.size()) - moved < 2) continue;
                    Draft d(zg);
                    const int w = d.add_vertex(d.vertices);
                    for (int i = 0; i < k; ++i)
                        if (mask >> i & 1)
                            for (int h : orbits[i]) d.target[h] = w;
                    const int h0 = d.add_edge(v, w);
                    consider(d.finish(ExpansionKind::FixedSplit, h0, p));
                }
            }
            // Star blow-up: free orbits at v move to p new leaves.
            if (E + p <= edge_budget) {
                std::vector<std::vector<int>> free;
                for (const auto& o : orbits)
                    if (static_cast<int>(o.size()) == p) free.push_back(o);
                const int k = static_cast<int>(free.size());
                for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
                    std::vector<int> chosen;
                    for (int i = 0; i < k; ++i)
                        if (mask >> i & 1) chosen.push_back(i);
                    if (chosen.size() < 2) continue;
                    std::vector<int> offset(chosen.size(), 0);
                    while (true) {
                        Draft d(zg);
                        const int base = d.vertices;
                        for (int j = 0; j < p; ++j) d.add_vertex(base + (j + 1) % p);
                        for (std::size_t c = 0; c < chosen.size(); ++c) {
                            const int h = free[chosen[c]].front();
                            for (int j = 0; j < p; ++j) d.target[powers[j].hperm[h]] = base + (j + offset[c]) % p;
                        }
                        const int h0 = static_cast<int>(d.sigma.size());
                        for (int j = 0; j < p; ++j) d.add_edge(v, base + j);
                        for (int j = 0; j < p; ++j) {
                            d.act.hperm[h0 + 2 * j] = h0 + 2 * ((j + 1) % p);
                            d.act.hperm[h0 + 2 * j + 1] = h0 + 2 * ((j + 1) % p) + 1;
                        }
                        consider(d.finish(ExpansionKind::StarBlowUp, h0, p));
                        std::size_t pos = 1;
                        while (pos < offset.size() && ++offset[pos] == p) offset[pos++] = 0;
                        if (pos >= offset.size()) break;
                    }
                }
            }
        } else if (E + p <= edge_budget) {
            // Free split, once per vertex orbit (at its smallest vertex).
            bool smallest = true;
            for (int j = 1; j < p; ++j)
                if (powers[j].vperm[v] < v) smallest = false;
            if (!smallest) continue;
            const int k = static_cast<int>(halves.size());
            if (k >= 63) throw ResourceError("vertex valency too large for split enumeration");
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
                if (mask & 1) continue;
                const int moved = __builtin_popcountll(mask);
                if (moved < 2 || k - moved < 2) continue;
                Draft d(zg);
                const int base = d.vertices;
                for (int j = 0; j < p; ++j) d.add_vertex(base + (j + 1) % p);
                for (int i = 0; i < k; ++i)
                    if (mask >> i & 1)
                        for (int j = 0; j < p; ++j) d.target[powers[j].hperm[halves[i]]] = base + j;
                const int h0 = static_cast<int>(d.sigma.size());
                for (int j = 0; j < p; ++j) d.add_edge(powers[j].vperm[v], base + j);
                for (int j = 0; j < p; ++j) {
                    d.act.hperm[h0 + 2 * j] = h0 + 2 * ((j + 1) % p);
                    d.act.hperm[h0 + 2 * j + 1] = h0 + 2 * ((j + 1) % p) + 1;
                }
                consider(d.finish(ExpansionKind::FreeSplit, h0, p));
            }
        }
    }
    return out;
}

std::vector<ZpGraph> enumerate_zp_graphs(int p, int rank_n, int max_edges, std::size_t max_classes) {
    if (max_edges > 3 * rank_n - 3) throw EquivariantError("edge budget exceeds 3*rank-3");
    std::vector<ZpGraph> out;
    std::set<EquivariantCode> seen;
    std::deque<ZpGraph> queue;
    for (auto& c : classify_reduced(p, rank_n, max_edges)) {
        if (seen.insert(c.form).second) {
            out.push_back(c.graph);
            queue.push_back(c.graph);
        }
    }
    while (!queue.empty()) {
        ZpGraph cur = std::move(queue.front());
        queue.pop_front();
        for (auto& e : equivariant_expansions(cur, max_edges)) {
            auto form = equivariant_form(e.graph);
            if (!seen.insert(form).second) continue;
            if (seen.size() > max_classes) throw ResourceError("Z/p graph enumeration exceeds class cap");
            out.push_back(e.graph);
            queue.push_back(std::move(e.graph));
        }
    }
    return out;
}

namespace zp {

ZpGraph rose(int p, int loops) {
    if (loops < p) throw EquivariantError("rose needs at least p loops");
    Builder b{p};
    b.fixed_vertex();
    b.edge_orbit([](int) { return std::make_pair(0, 0); });
    for (int i = p; i < loops; ++i) b.fixed_edge(0, 0);
    return b.build();
}

ZpGraph theta(int p, int s, int t) {
    Builder b{p};
    b.fixed_vertex();
    b.fixed_vertex();
    b.edge_orbit([](int) { return std::make_pair(0, 1); });
    for (int i = 0; i < s; ++i) b.fixed_edge(0, 0);
    for (int i = 0; i < t; ++i) b.fixed_edge(1, 1);
    return b.build();
}

ZpGraph wedge_diagonal(int p) {
    Builder b{p};
    for (int i = 0; i < 3; ++i) b.fixed_vertex();
    b.edge_orbit([](int) { return std::make_pair(0, 1); });
    b.edge_orbit([](int) { return std::make_pair(1, 2); });
    return b.build();
}

ZpGraph wedge_one_factor(int p) {
    Builder b{p};
    for (int i = 0; i < 3; ++i) b.fixed_vertex();
    b.edge_orbit([](int) { return std::make_pair(0, 1); });
    for (int i = 0; i < p; ++i) b.fixed_edge(1, 2);
    return b.build();
}

EquivariantGraph wedge_product_action(int p) {
    ZpGraph first = wedge_one_factor(p);
    // Second generator: rotate the bundle between vertices 1 and 2 only.
    GraphAutomorphism second = GraphAutomorphism::identity(first.graph);
    for (int k = 0; k < p; ++k) {
        const int e = p + k, img = p + (k + 1) % p;
        second.hperm[2 * e] = 2 * img;
        second.hperm[2 * e + 1] = 2 * img + 1;
    }
    return make_equivariant_graph(first.graph, {first.action(), second}, p);
}

ZpGraph complete_bipartite_p3(int p) {
    Builder b{p};
    const int base = b.free_orbit();
    for (int j = 0; j < 3; ++j) b.fixed_vertex();
    for (int j = 0; j < 3; ++j) b.edge_orbit([&, j](int k) { return std::make_pair(base + k, p + j); });
    return b.build();
}

}  // namespace zp

}  // namespace spinelab
