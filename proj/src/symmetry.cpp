#include "spinelab/symmetry.hpp"

#include <numeric>
#include <sstream>

#include "spinelab/canon.hpp"

namespace spinelab {

GraphAutomorphism GraphAutomorphism::identity(const HalfEdgeGraph& g) {
    GraphAutomorphism a;
    a.vperm.resize(g.vertex_count());
    a.hperm.resize(g.half_edge_count());
    std::iota(a.vperm.begin(), a.vperm.end(), 0);
    std::iota(a.hperm.begin(), a.hperm.end(), 0);
    return a;
}

bool GraphAutomorphism::is_identity() const {
    for (std::size_t i = 0; i < vperm.size(); ++i)
        if (vperm[i] != static_cast<int>(i)) return false;
    for (std::size_t i = 0; i < hperm.size(); ++i)
        if (hperm[i] != static_cast<int>(i)) return false;
    return true;
}

GraphAutomorphism compose(const GraphAutomorphism& a, const GraphAutomorphism& b) {
    GraphAutomorphism c;
    c.vperm.resize(b.vperm.size());
    c.hperm.resize(b.hperm.size());
    for (std::size_t i = 0; i < b.vperm.size(); ++i) c.vperm[i] = a.vperm[b.vperm[i]];
    for (std::size_t i = 0; i < b.hperm.size(); ++i) c.hperm[i] = a.hperm[b.hperm[i]];
    return c;
}

GraphAutomorphism GraphAutomorphism::inverse() const {
    GraphAutomorphism c;
    c.vperm.resize(vperm.size());
    c.hperm.resize(hperm.size());
    for (std::size_t i = 0; i < vperm.size(); ++i) c.vperm[vperm[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < hperm.size(); ++i) c.hperm[hperm[i]] = static_cast<int>(i);
    return c;
}

int GraphAutomorphism::order() const {
    GraphAutomorphism cur = *this;
    int k = 1;
    while (!cur.is_identity()) {
        cur = compose(*this, cur);
        ++k;
    }
    return k;
}

GraphAutomorphism GraphAutomorphism::power(int k) const {
    GraphAutomorphism out;
    out.vperm.resize(vperm.size());
    out.hperm.resize(hperm.size());
    std::iota(out.vperm.begin(), out.vperm.end(), 0);
    std::iota(out.hperm.begin(), out.hperm.end(), 0);
    const int n = order();
    k = ((k % n) + n) % n;
    for (int i = 0; i < k; ++i) out = compose(*this, out);
    return out;
}

bool is_automorphism(const HalfEdgeGraph& g, const GraphAutomorphism& a) {
    if (static_cast<int>(a.vperm.size()) != g.vertex_count() ||
        static_cast<int>(a.hperm.size()) != g.half_edge_count())
        return false;
    std::vector<int> seen_v(g.vertex_count(), 0), seen_h(g.half_edge_count(), 0);
    for (int v : a.vperm) {
        if (v < 0 || v >= g.vertex_count() || seen_v[v]) return false;
        seen_v[v] = 1;
    }
    for (int h : a.hperm) {
        if (h < 0 || h >= g.half_edge_count() || seen_h[h]) return false;
        seen_h[h] = 1;
    }
    for (int h = 0; h < g.half_edge_count(); ++h) {
        if (a.hperm[g.sigma(h)] != g.sigma(a.hperm[h])) return false;
        if (g.target(a.hperm[h]) != a.vperm[g.target(h)]) return false;
    }
    return true;
}

Forest apply(const HalfEdgeGraph& g, const GraphAutomorphism& a, const Forest& f) {
    std::vector<int> edges;
    edges.reserve(f.size());
    for (int e : f.edges) edges.push_back(g.edge_of(a.hperm[g.edge_half(e)]));
    return Forest(std::move(edges));
}

nlohmann::ordered_json to_json(const GraphAutomorphism& a) {
    nlohmann::ordered_json j;
    j["vperm"] = a.vperm;
    j["hperm"] = a.hperm;
    return j;
}

GraphAutomorphism automorphism_from_json(const nlohmann::json& j) {
    GraphAutomorphism a;
    try {
        a.vperm = j.at("vperm").get<std::vector<int>>();
        a.hperm = j.at("hperm").get<std::vector<int>>();
    } catch (const nlohmann::json::exception& e) {
        throw GraphError(std::string("malformed automorphism JSON: ") + e.what());
    }
    return a;
}

std::string CanonicalForm::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < code.size(); ++i) os << (i ? "." : "") << code[i];
    return os.str();
}

namespace {

ColoredStructure vertex_structure(const HalfEdgeGraph& g) {
    const auto m = g.multiplicity_matrix();
    ColoredStructure s(g.vertex_count());
    for (int x = 0; x < g.vertex_count(); ++x) {
        s.color[x] = static_cast<std::uint32_t>(m[x][x]);
        for (int y = 0; y < g.vertex_count(); ++y)
            if (x != y) s.at(x, y) = static_cast<std::uint32_t>(m[x][y]);
    }
    return s;
}

using EdgeClasses = std::map<std::pair<int, int>, std::vector<int>>;

EdgeClasses edge_classes(const HalfEdgeGraph& g) {
    EdgeClasses classes;
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [a, b] = g.endpoints(e);
        classes[{std::min(a, b), std::max(a, b)}].push_back(e);
    }
    return classes;
}

// Half-edge of edge e2 (in g2) corresponding to half-edge h of edge e1 in g1.
int matching_half(const HalfEdgeGraph& g1, int h, const HalfEdgeGraph& g2, int e2, const std::vector<int>& vmap) {
    const int rep1 = g1.edge_half(g1.edge_of(h));
    const int rep2 = g2.edge_half(e2);
    if (g1.is_loop(g1.edge_of(h))) return h == rep1 ? rep2 : g2.sigma(rep2);
    const int want = vmap[g1.target(h)];
    return g2.target(rep2) == want ? rep2 : g2.sigma(rep2);
}

// Extend a vertex bijection g1 -> g2 preserving multiplicities to half-edges,
// matching parallel edges in index order.
Isomorphism lift(const HalfEdgeGraph& g1, const HalfEdgeGraph& g2, const std::vector<int>& vmap) {
    const EdgeClasses c1 = edge_classes(g1), c2 = edge_classes(g2);
    Isomorphism iso;
    iso.vertex_map = vmap;
    iso.half_edge_map.assign(g1.half_edge_count(), -1);
    for (const auto& [key, edges] : c1) {
        const int a = vmap[key.first], b = vmap[key.second];
        auto it = c2.find({std::min(a, b), std::max(a, b)});
        if (it == c2.end() || it->second.size() != edges.size())
            throw std::logic_error("lift: vertex map does not preserve multiplicities");
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const int h = g1.edge_half(edges[k]);
            iso.half_edge_map[h] = matching_half(g1, h, g2, it->second[k], vmap);
            iso.half_edge_map[g1.sigma(h)] = g2.sigma(iso.half_edge_map[h]);
        }
    }
    return iso;
}

GraphAutomorphism as_automorphism(const Isomorphism& iso) { return {iso.vertex_map, iso.half_edge_map}; }

Isomorphism invert(const Isomorphism& iso) {
    Isomorphism out;
    out.vertex_map.resize(iso.vertex_map.size());
    out.half_edge_map.resize(iso.half_edge_map.size());
    for (std::size_t i = 0; i < iso.vertex_map.size(); ++i) out.vertex_map[iso.vertex_map[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < iso.half_edge_map.size(); ++i)
        out.half_edge_map[iso.half_edge_map[i]] = static_cast<int>(i);
    return out;
}

Isomorphism chain(const Isomorphism& first, const Isomorphism& second) {
    Isomorphism out;
    out.vertex_map.resize(first.vertex_map.size());
    out.half_edge_map.resize(first.half_edge_map.size());
    for (std::size_t i = 0; i < first.vertex_map.size(); ++i)
        out.vertex_map[i] = second.vertex_map[first.vertex_map[i]];
    for (std::size_t i = 0; i < first.half_edge_map.size(); ++i)
        out.half_edge_map[i] = second.half_edge_map[first.half_edge_map[i]];
    return out;
}

std::uint64_t factorial(int n) {
    std::uint64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
    return r;
}

std::uint64_t kernel_order(const HalfEdgeGraph& g) {
    std::uint64_t k = 1;
    for (const auto& [key, edges] : edge_classes(g)) {
        const int m = static_cast<int>(edges.size());
        k *= factorial(m);
        if (key.first == key.second) k <<= m;
    }
    return k;
}

// Swap parallel edges e and f (same endpoints), fixing everything else.
GraphAutomorphism edge_swap(const HalfEdgeGraph& g, int e, int f) {
    GraphAutomorphism a = GraphAutomorphism::identity(g);
    const int he = g.edge_half(e), hf = g.edge_half(f);
    int he2 = g.sigma(he), hf_match = hf;
    if (!g.is_loop(e) && g.target(hf) != g.target(he)) hf_match = g.sigma(hf);
    a.hperm[he] = hf_match;
    a.hperm[hf_match] = he;
    a.hperm[he2] = g.sigma(hf_match);
    a.hperm[g.sigma(hf_match)] = he2;
    return a;
}

GraphAutomorphism loop_flip(const HalfEdgeGraph& g, int e) {
    GraphAutomorphism a = GraphAutomorphism::identity(g);
    const int h = g.edge_half(e);
    a.hperm[h] = g.sigma(h);
    a.hperm[g.sigma(h)] = h;
    return a;
}

std::vector<GraphAutomorphism> kernel_elements(const HalfEdgeGraph& g) {
    std::vector<GraphAutomorphism> out{GraphAutomorphism::identity(g)};
    for (const auto& [key, edges] : edge_classes(g)) {
        const bool loops = key.first == key.second;
        const int m = static_cast<int>(edges.size());
        std::vector<int> perm(m);
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<GraphAutomorphism> local;
        do {
            for (int flips = 0; flips < (loops ? (1 << m) : 1); ++flips) {
                GraphAutomorphism a = GraphAutomorphism::identity(g);
                for (int k = 0; k < m; ++k) {
                    const int src = g.edge_half(edges[k]);
                    int dst = g.edge_half(edges[perm[k]]);
                    if (loops) {
                        if (flips & (1 << k)) dst = g.sigma(dst);
                    } else if (g.target(dst) != g.target(src)) {
                        dst = g.sigma(dst);
                    }
                    a.hperm[src] = dst;
                    a.hperm[g.sigma(src)] = g.sigma(dst);
                }
                local.push_back(std::move(a));
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        std::vector<GraphAutomorphism> next;
        next.reserve(out.size() * local.size());
        for (const auto& x : out)
            for (const auto& y : local) next.push_back(compose(y, x));
        out.swap(next);
    }
    return out;
}

std::vector<GraphAutomorphism> closure_of(const HalfEdgeGraph& g, const std::vector<GraphAutomorphism>& gens,
                                          std::uint64_t cap) {
    std::set<GraphAutomorphism> seen{GraphAutomorphism::identity(g)};
    std::vector<GraphAutomorphism> stack{GraphAutomorphism::identity(g)};
    while (!stack.empty()) {
        GraphAutomorphism cur = std::move(stack.back());
        stack.pop_back();
        for (const auto& s : gens) {
            GraphAutomorphism nxt = compose(s, cur);
            if (seen.insert(nxt).second) {
                if (seen.size() > cap) throw ResourceError("subgroup closure exceeds element cap");
                stack.push_back(std::move(nxt));
            }
        }
    }
    return {seen.begin(), seen.end()};
}

std::vector<GraphAutomorphism> generating_set(const HalfEdgeGraph& g, const std::vector<GraphAutomorphism>& elements) {
    std::vector<GraphAutomorphism> gens;
    std::set<GraphAutomorphism> span{GraphAutomorphism::identity(g)};
    for (const auto& a : elements) {
        if (span.count(a)) continue;
        gens.push_back(a);
        auto c = closure_of(g, gens, elements.size());
        span = std::set<GraphAutomorphism>(c.begin(), c.end());
        if (span.size() == elements.size()) break;
    }
    return gens;
}

}  // namespace

CanonicalForm canonical_form(const HalfEdgeGraph& g) {
    return CanonicalForm{canonical_labeling(vertex_structure(g)).code};
}

CanonicalRepresentative canonical_representative(const HalfEdgeGraph& g) {
    const CanonicalLabeling lab = canonical_labeling(vertex_structure(g));
    const auto m = g.multiplicity_matrix();
    const int n = g.vertex_count();
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = 0; k < m[lab.order[i]][lab.order[j]]; ++k) edges.emplace_back(i, j);
    CanonicalRepresentative out;
    out.graph = HalfEdgeGraph::from_edges(n, edges);
    out.iso = lift(g, out.graph, lab.position);
    return out;
}

std::optional<Isomorphism> find_isomorphism(const HalfEdgeGraph& from, const HalfEdgeGraph& to) {
    if (from.vertex_count() != to.vertex_count() || from.half_edge_count() != to.half_edge_count())
        return std::nullopt;
    const auto a = canonical_representative(from);
    const auto b = canonical_representative(to);
    if (!(a.graph == b.graph)) return std::nullopt;
    return chain(a.iso, invert(b.iso));
}

bool isomorphic(const HalfEdgeGraph& a, const HalfEdgeGraph& b) { return find_isomorphism(a, b).has_value(); }

GraphAutomorphism transport(const Isomorphism& iso, const GraphAutomorphism& a) {
    const GraphAutomorphism f = as_automorphism(iso);
    return compose(compose(f, a), f.inverse());
}

Forest transport(const HalfEdgeGraph& from, const HalfEdgeGraph& to, const Isomorphism& iso, const Forest& f) {
    std::vector<int> edges;
    for (int e : f.edges) edges.push_back(to.edge_of(iso.half_edge_map[from.edge_half(e)]));
    return Forest(std::move(edges));
}

AutGroup::AutGroup(HalfEdgeGraph g, std::vector<GraphAutomorphism> elements, std::vector<GraphAutomorphism> generators)
    : graph_(std::move(g)), elements_(std::move(elements)), generators_(std::move(generators)) {
    std::sort(elements_.begin(), elements_.end());
}

bool AutGroup::contains(const GraphAutomorphism& a) const {
    return std::binary_search(elements_.begin(), elements_.end(), a);
}

std::uint64_t automorphism_group_order(const HalfEdgeGraph& g) {
    const auto vaut = structure_automorphisms(vertex_structure(g), kDefaultElementCap);
    return vaut.size() * kernel_order(g);
}

AutGroup automorphism_group(const HalfEdgeGraph& g, std::uint64_t cap) {
    const auto vaut = structure_automorphisms(vertex_structure(g), cap);
    const std::uint64_t total = vaut.size() * kernel_order(g);
    if (total > cap)
        throw ResourceError("automorphism group of order " + std::to_string(total) + " exceeds element cap " +
                            std::to_string(cap));
    const auto kernel = kernel_elements(g);
    std::vector<GraphAutomorphism> elements;
    elements.reserve(total);
    std::vector<GraphAutomorphism> lifts;
    for (const auto& pi : vaut) lifts.push_back(as_automorphism(lift(g, g, pi)));
    for (const auto& l : lifts)
        for (const auto& k : kernel) elements.push_back(compose(l, k));

    // Generators: lifts of a generating set of the vertex action, plus
    // adjacent swaps and one flip per loop class.
    std::vector<GraphAutomorphism> gens;
    {
        std::vector<std::vector<int>> chosen;
        auto close = [&]() {
            std::set<std::vector<int>> s;
            std::vector<int> id(g.vertex_count());
            std::iota(id.begin(), id.end(), 0);
            s.insert(id);
            std::vector<std::vector<int>> st{id};
            while (!st.empty()) {
                auto cur = st.back();
                st.pop_back();
                for (const auto& c : chosen) {
                    std::vector<int> nx(cur.size());
                    for (std::size_t i = 0; i < cur.size(); ++i) nx[i] = c[cur[i]];
                    if (s.insert(nx).second) st.push_back(nx);
                }
            }
            return s;
        };
        std::set<std::vector<int>> span = close();
        for (std::size_t i = 0; i < vaut.size(); ++i) {
            if (span.count(vaut[i])) continue;
            chosen.push_back(vaut[i]);
            gens.push_back(lifts[i]);
            span = close();
        }
    }
    for (const auto& [key, edges] : edge_classes(g)) {
        for (std::size_t k = 0; k + 1 < edges.size(); ++k) gens.push_back(edge_swap(g, edges[k], edges[k + 1]));
        if (key.first == key.second) gens.push_back(loop_flip(g, edges.front()));
    }
    return AutGroup(g, std::move(elements), std::move(gens));
}

AutGroup generated_subgroup(const HalfEdgeGraph& g, const std::vector<GraphAutomorphism>& gens, std::uint64_t cap) {
    return AutGroup(g, closure_of(g, gens, cap), gens);
}

AutGroup subgroup_from_elements(const HalfEdgeGraph& g, std::vector<GraphAutomorphism> elements) {
    std::sort(elements.begin(), elements.end());
    auto gens = generating_set(g, elements);
    return AutGroup(g, std::move(elements), std::move(gens));
}

std::vector<GraphAutomorphism> elements_of_order(const AutGroup& grp, int k) {
    std::vector<GraphAutomorphism> out;
    for (const auto& a : grp.elements())
        if (a.order() == k) out.push_back(a);
    return out;
}

std::uint64_t sylow_p_order(std::uint64_t order, std::uint64_t p) {
    std::uint64_t r = 1;
    while (order > 0 && order % p == 0) {
        order /= p;
        r *= p;
    }
    return r;
}

std::uint64_t sylow_p_order(const AutGroup& grp, std::uint64_t p) { return sylow_p_order(grp.order(), p); }

std::vector<GraphAutomorphism> centralizer(const AutGroup& grp, const GraphAutomorphism& a) {
    std::vector<GraphAutomorphism> out;
    for (const auto& b : grp.elements())
        if (compose(a, b) == compose(b, a)) out.push_back(b);
    return out;
}

bool is_abelian(const std::vector<GraphAutomorphism>& elements) {
    for (std::size_t i = 0; i < elements.size(); ++i)
        for (std::size_t j = i + 1; j < elements.size(); ++j)
            if (!(compose(elements[i], elements[j]) == compose(elements[j], elements[i]))) return false;
    return true;
}

std::uint64_t abelianization_order(const AutGroup& grp) {
    const auto& gens = grp.generators();
    std::vector<GraphAutomorphism> comm;
    for (const auto& a : gens)
        for (const auto& b : gens)
            comm.push_back(compose(compose(a, b), compose(a.inverse(), b.inverse())));
    // Normal closure: add conjugates of the current generators until stable.
    while (true) {
        auto sub = closure_of(grp.graph(), comm, grp.order());
        std::set<GraphAutomorphism> span(sub.begin(), sub.end());
        bool grew = false;
        for (const auto& c : std::vector<GraphAutomorphism>(comm)) {
            for (const auto& s : gens) {
                GraphAutomorphism conj = compose(compose(s, c), s.inverse());
                if (!span.count(conj)) {
                    comm.push_back(conj);
                    grew = true;
                }
            }
        }
        if (!grew) return grp.order() / span.size();
    }
}

AutGroup forest_stabilizer(const AutGroup& grp, const Forest& f) {
    std::vector<GraphAutomorphism> stab;
    for (const auto& a : grp.elements())
        if (apply(grp.graph(), a, f) == f) stab.push_back(a);
    return subgroup_from_elements(grp.graph(), std::move(stab));
}

}  // namespace spinelab
