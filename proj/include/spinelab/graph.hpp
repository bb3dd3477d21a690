#pragma once

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace spinelab {

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A set of geometric edges, stored sorted.
struct Forest {
    std::vector<int> edges;

    Forest() = default;
    explicit Forest(std::vector<int> e);

    bool empty() const { return edges.empty(); }
    std::size_t size() const { return edges.size(); }
    bool contains(int e) const;
    bool is_subset_of(const Forest& other) const;

    auto operator<=>(const Forest&) const = default;
};

// Multigraph in the half-edge model: sigma is a fixed-point-free involution
// on half-edges, target maps a half-edge to the vertex it points into.
// Geometric edge i is the sigma-orbit whose smaller member is the i-th smallest
// such representative.
class HalfEdgeGraph {
public:
    HalfEdgeGraph() = default;
    HalfEdgeGraph(int vertices, std::vector<int> sigma, std::vector<int> target);

    // Edge i becomes half-edges 2i (target b) and 2i+1 (target a) for (a, b).
    static HalfEdgeGraph from_edges(int vertices, const std::vector<std::pair<int, int>>& edges);

    int vertex_count() const { return vertices_; }
    int half_edge_count() const { return static_cast<int>(sigma_.size()); }
    int edge_count() const { return static_cast<int>(edge_rep_.size()); }

    int sigma(int h) const { return sigma_[h]; }
    int target(int h) const { return target_[h]; }
    int source(int h) const { return target_[sigma_[h]]; }
    const std::vector<int>& sigma_map() const { return sigma_; }
    const std::vector<int>& target_map() const { return target_; }

    int edge_of(int h) const { return edge_of_[h]; }
    // Smaller half-edge of edge e.
    int edge_half(int e) const { return edge_rep_[e]; }
    std::pair<int, int> endpoints(int e) const;
    bool is_loop(int e) const;

    int valency(int v) const;
    int loop_count() const;
    int loops_at(int v) const;
    std::vector<int> degree_sequence() const;  // sorted descending
    std::vector<int> half_edges_at(int v) const;

    // Symmetric vertex multiplicity matrix; diagonal counts loops.
    std::vector<std::vector<int>> multiplicity_matrix() const;

    int component_count() const;
    bool is_connected() const;
    bool is_bridge(int e) const;

    bool operator==(const HalfEdgeGraph& o) const {
        return vertices_ == o.vertices_ && sigma_ == o.sigma_ && target_ == o.target_;
    }

private:
    int vertices_ = 0;
    std::vector<int> sigma_;
    std::vector<int> target_;
    std::vector<int> edge_of_;
    std::vector<int> edge_rep_;

    void index_edges();
};

int rank(const HalfEdgeGraph& g);
bool is_admissible(const HalfEdgeGraph& g);
bool is_forest(const HalfEdgeGraph& g, const Forest& f);

// All acyclic edge subsets, empty one first, lexicographic on sorted edge lists.
std::vector<Forest> enumerate_forests(const HalfEdgeGraph& g);

struct Collapse {
    HalfEdgeGraph graph;
    std::vector<int> vertex_map;     // old vertex -> new vertex
    std::vector<int> half_edge_map;  // old half-edge -> new half-edge, -1 if collapsed

    // Image of a forest containing the collapsed one, in new edge indices.
    Forest image(const HalfEdgeGraph& old, const Forest& f) const;
};

Collapse collapse_with_map(const HalfEdgeGraph& g, const Forest& f);
HalfEdgeGraph collapse(const HalfEdgeGraph& g, const Forest& f);

// Apply vertex and half-edge relabelings (new index = perm[old]).
HalfEdgeGraph relabel(const HalfEdgeGraph& g, const std::vector<int>& vperm,
                      const std::vector<int>& hperm);

nlohmann::ordered_json to_json(const HalfEdgeGraph& g);
HalfEdgeGraph graph_from_json(const nlohmann::json& j);

// Small library of named graphs.
namespace graphs {
HalfEdgeGraph rose(int loops);
HalfEdgeGraph theta(int parallel);  // two vertices, `parallel` edges
HalfEdgeGraph complete_bipartite(int a, int b);
}  // namespace graphs

}  // namespace spinelab
