#include "spinelab/graph.hpp"

#include <algorithm>
#include <numeric>

namespace spinelab {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a < b) std::swap(a, b);
        parent[a] = b;
        return true;
    }
};

}  // namespace

Forest::Forest(std::vector<int> e) : edges(std::move(e)) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

bool Forest::contains(int e) const { return std::binary_search(edges.begin(), edges.end(), e); }

bool Forest::is_subset_of(const Forest& other) const {
    return std::includes(other.edges.begin(), other.edges.end(), edges.begin(), edges.end());
}

HalfEdgeGraph::HalfEdgeGraph(int vertices, std::vector<int> sigma, std::vector<int> target)
    : vertices_(vertices), sigma_(std::move(sigma)), target_(std::move(target)) {
    const int m = static_cast<int>(sigma_.size());
    if (vertices_ < 0) throw GraphError("negative vertex count");
    if (static_cast<int>(target_.size()) != m) throw GraphError("sigma and target lengths differ");
    for (int h = 0; h < m; ++h) {
        const int s = sigma_[h];
        if (s < 0 || s >= m) throw GraphError("sigma out of range at half-edge " + std::to_string(h));
        if (s == h) throw GraphError("sigma has a fixed point at half-edge " + std::to_string(h));
        if (sigma_[s] != h) throw GraphError("sigma is not an involution at half-edge " + std::to_string(h));
        if (target_[h] < 0 || target_[h] >= vertices_)
            throw GraphError("target out of range at half-edge " + std::to_string(h));
    }
    index_edges();
}

void HalfEdgeGraph::index_edges() {
    const int m = half_edge_count();
    edge_of_.assign(m, -1);
    edge_rep_.clear();
    for (int h = 0; h < m; ++h) {
        if (h < sigma_[h]) {
            edge_of_[h] = edge_of_[sigma_[h]] = static_cast<int>(edge_rep_.size());
            edge_rep_.push_back(h);
        }
    }
}

HalfEdgeGraph HalfEdgeGraph::from_edges(int vertices, const std::vector<std::pair<int, int>>& edges) {
    std::vector<int> sigma, target;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const int h = static_cast<int>(2 * i);
        sigma.push_back(h + 1);
        sigma.push_back(h);
        target.push_back(edges[i].second);
        target.push_back(edges[i].first);
    }
    return HalfEdgeGraph(vertices, std::move(sigma), std::move(target));
}

std::pair<int, int> HalfEdgeGraph::endpoints(int e) const {
    const int h = edge_rep_[e];
    return {target_[sigma_[h]], target_[h]};
}

bool HalfEdgeGraph::is_loop(int e) const {
    auto [a, b] = endpoints(e);
    return a == b;
}

int HalfEdgeGraph::valency(int v) const {
    return static_cast<int>(std::count(target_.begin(), target_.end(), v));
}

int HalfEdgeGraph::loop_count() const {
    int n = 0;
    for (int e = 0; e < edge_count(); ++e) n += is_loop(e) ? 1 : 0;
    return n;
}

int HalfEdgeGraph::loops_at(int v) const {
    int n = 0;
    for (int e = 0; e < edge_count(); ++e) {
        auto [a, b] = endpoints(e);
        if (a == v && b == v) ++n;
    }
    return n;
}

std::vector<int> HalfEdgeGraph::degree_sequence() const {
    std::vector<int> d(vertices_, 0);
    for (int t : target_) ++d[t];
    std::sort(d.rbegin(), d.rend());
    return d;
}

std::vector<int> HalfEdgeGraph::half_edges_at(int v) const {
    std::vector<int> out;
    for (int h = 0; h < half_edge_count(); ++h)
        if (target_[h] == v) out.push_back(h);
    return out;
}

std::vector<std::vector<int>> HalfEdgeGraph::multiplicity_matrix() const {
    std::vector<std::vector<int>> m(vertices_, std::vector<int>(vertices_, 0));
    for (int e = 0; e < edge_count(); ++e) {
        auto [a, b] = endpoints(e);
        if (a == b) {
            ++m[a][a];
        } else {
            ++m[a][b];
            ++m[b][a];
        }
    }
    return m;
}

int HalfEdgeGraph::component_count() const {
    UnionFind uf(vertices_);
    int comps = vertices_;
    for (int e = 0; e < edge_count(); ++e) {
        auto [a, b] = endpoints(e);
        if (uf.unite(a, b)) --comps;
    }
    return comps;
}

bool HalfEdgeGraph::is_connected() const { return vertices_ > 0 && component_count() == 1; }

bool HalfEdgeGraph::is_bridge(int e) const {
    auto [a, b] = endpoints(e);
    if (a == b) return false;
    UnionFind uf(vertices_);
    for (int f = 0; f < edge_count(); ++f) {
        if (f == e) continue;
        auto [x, y] = endpoints(f);
        uf.unite(x, y);
    }
    return uf.find(a) != uf.find(b);
}

int rank(const HalfEdgeGraph& g) { return g.edge_count() - g.vertex_count() + g.component_count(); }

bool is_admissible(const HalfEdgeGraph& g) {
    if (!g.is_connected()) return false;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.valency(v) < 3) return false;
    for (int e = 0; e < g.edge_count(); ++e)
        if (g.is_bridge(e)) return false;
    return true;
}

bool is_forest(const HalfEdgeGraph& g, const Forest& f) {
    UnionFind uf(g.vertex_count());
    for (int e : f.edges) {
        if (e < 0 || e >= g.edge_count()) return false;
        auto [a, b] = g.endpoints(e);
        if (!uf.unite(a, b)) return false;
    }
    return true;
}

namespace {

void forest_dfs(const HalfEdgeGraph& g, int next, std::vector<int>& current, UnionFind uf,
                std::vector<Forest>& out) {
    for (int e = next; e < g.edge_count(); ++e) {
        auto [a, b] = g.endpoints(e);
        UnionFind branch = uf;
        if (!branch.unite(a, b)) continue;
        current.push_back(e);
        out.emplace_back(current);
        forest_dfs(g, e + 1, current, branch, out);
        current.pop_back();
    }
}

}  // namespace

std::vector<Forest> enumerate_forests(const HalfEdgeGraph& g) {
    std::vector<Forest> out;
    out.emplace_back();
    std::vector<int> current;
    forest_dfs(g, 0, current, UnionFind(g.vertex_count()), out);
    return out;
}

Forest Collapse::image(const HalfEdgeGraph& old, const Forest& f) const {
    std::vector<int> edges;
    for (int e : f.edges) {
        const int h = half_edge_map[old.edge_half(e)];
        if (h >= 0) edges.push_back(graph.edge_of(h));
    }
    return Forest(std::move(edges));
}

Collapse collapse_with_map(const HalfEdgeGraph& g, const Forest& f) {
    if (!is_forest(g, f)) throw GraphError("collapse: edge set is not a forest (cycle detected)");
    UnionFind uf(g.vertex_count());
    for (int e : f.edges) {
        auto [a, b] = g.endpoints(e);
        uf.unite(a, b);
    }
    Collapse c;
    c.vertex_map.assign(g.vertex_count(), -1);
    // Classes are numbered by their smallest original vertex.
    std::vector<int> class_id(g.vertex_count(), -1);
    int next = 0;
    for (int v = 0; v < g.vertex_count(); ++v) {
        const int r = uf.find(v);
        if (class_id[r] < 0) class_id[r] = next++;
        c.vertex_map[v] = class_id[r];
    }
    c.half_edge_map.assign(g.half_edge_count(), -1);
    int nh = 0;
    for (int h = 0; h < g.half_edge_count(); ++h)
        if (!f.contains(g.edge_of(h))) c.half_edge_map[h] = nh++;
    std::vector<int> sigma(nh), target(nh);
    for (int h = 0; h < g.half_edge_count(); ++h) {
        const int n = c.half_edge_map[h];
        if (n < 0) continue;
        sigma[n] = c.half_edge_map[g.sigma(h)];
        target[n] = c.vertex_map[g.target(h)];
    }
    c.graph = HalfEdgeGraph(next, std::move(sigma), std::move(target));
    return c;
}

HalfEdgeGraph collapse(const HalfEdgeGraph& g, const Forest& f) { return collapse_with_map(g, f).graph; }

HalfEdgeGraph relabel(const HalfEdgeGraph& g, const std::vector<int>& vperm, const std::vector<int>& hperm) {
    const int m = g.half_edge_count();
    std::vector<int> sigma(m), target(m);
    for (int h = 0; h < m; ++h) {
        sigma[hperm[h]] = hperm[g.sigma(h)];
        target[hperm[h]] = vperm[g.target(h)];
    }
    return HalfEdgeGraph(g.vertex_count(), std::move(sigma), std::move(target));
}

nlohmann::ordered_json to_json(const HalfEdgeGraph& g) {
    nlohmann::ordered_json j;
    j["vertices"] = g.vertex_count();
    j["half_edges"] = g.half_edge_count();
    j["sigma"] = g.sigma_map();
    j["target"] = g.target_map();
    return j;
}

HalfEdgeGraph graph_from_json(const nlohmann::json& j) {
    try {
        const int n = j.at("vertices").get<int>();
        auto sigma = j.at("sigma").get<std::vector<int>>();
        auto target = j.at("target").get<std::vector<int>>();
        if (j.contains("half_edges") && j.at("half_edges").get<int>() != static_cast<int>(sigma.size()))
            throw GraphError("half_edges does not match sigma length");
        return HalfEdgeGraph(n, std::move(sigma), std::move(target));
    } catch (const nlohmann::json::exception& e) {
        throw GraphError(std::string("malformed graph JSON: ") + e.what());
    }
}

namespace graphs {

HalfEdgeGraph rose(int loops) {
    return HalfEdgeGraph::from_edges(1, std::vector<std::pair<int, int>>(loops, {0, 0}));
}

HalfEdgeGraph theta(int parallel) {
    return HalfEdgeGraph::from_edges(2, std::vector<std::pair<int, int>>(parallel, {0, 1}));
}

HalfEdgeGraph complete_bipartite(int a, int b) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) edges.emplace_back(i, a + j);
    return HalfEdgeGraph::from_edges(a + b, edges);
}

}  // namespace graphs

}  // namespace spinelab
