#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinelab/graph.hpp"
#include "spinelab/symmetry.hpp"

namespace spinelab {

class EquivariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A graph with a finite group of automorphisms given by generators. A Z/p
// graph is the one-generator case.
struct EquivariantGraph {
    HalfEdgeGraph graph;
    std::vector<GraphAutomorphism> generators;
    int p = 3;

    std::vector<GraphAutomorphism> group_elements() const;
    const GraphAutomorphism& action() const { return generators.front(); }
    bool trivial() const;
};

using ZpGraph = EquivariantGraph;

// Validates that `action` is an automorphism of order exactly p.
ZpGraph make_zp_graph(HalfEdgeGraph g, GraphAutomorphism action, int p);
EquivariantGraph make_equivariant_graph(HalfEdgeGraph g, std::vector<GraphAutomorphism> gens, int p);

nlohmann::ordered_json to_json(const EquivariantGraph& zg);
EquivariantGraph equivariant_from_json(const nlohmann::json& j);

using EquivariantCode = std::vector<std::uint32_t>;

// Invariant under isomorphisms conjugating the acting subgroups (any
// generating tuple of the same size is tried). Forest edges, if given, are
// colored.
EquivariantCode equivariant_form(const EquivariantGraph& zg, const Forest& forest = {});
bool equivariantly_isomorphic(const EquivariantGraph& a, const EquivariantGraph& b);

// Edge orbits under the group, each sorted.
std::vector<std::vector<int>> edge_orbits(const EquivariantGraph& zg);
bool is_invariant(const EquivariantGraph& zg, const Forest& f);
bool is_reduced(const EquivariantGraph& zg);
// Brute force: every nonempty invariant forest.
std::vector<Forest> invariant_forests(const EquivariantGraph& zg);

// Collapse an invariant forest, carrying the induced action.
EquivariantGraph collapse(const EquivariantGraph& zg, const Forest& f);

struct ReducedClass {
    std::string name;
    EquivariantGraph graph;
    EquivariantCode form;
};

// Reduced admissible Z/p graphs of the given rank, generated from quotient
// data; one representative per equivariant isomorphism class.
std::vector<ReducedClass> classify_reduced(int p, int rank, int max_edges);
// Rank 2(p-1) with the 3n-3 edge budget.
std::vector<ReducedClass> classify_reduced(int p);
std::string describe_reduced(const EquivariantGraph& zg);

struct NielsenMove {
    int e1 = 0;
    int e2 = 0;
    EquivariantGraph result;
};

std::vector<NielsenMove> nielsen_moves(const EquivariantGraph& zg);
// All reduced graphs reachable by collapsing invariant forests step by step.
std::vector<EquivariantGraph> reductions(const EquivariantGraph& zg);
std::vector<ReducedClass> nielsen_closure(const EquivariantGraph& zg, std::size_t max_classes = 100000);

enum class ExpansionKind { FixedSplit, StarBlowUp, FreeSplit };

struct Expansion {
    ExpansionKind kind;
    EquivariantGraph graph;
    Forest forest;
    EquivariantCode form;
};

// Minimal admissible equivariant expansions within the edge budget, one per
// class of (graph, forest).
std::vector<Expansion> equivariant_expansions(const ZpGraph& zg, int edge_budget);

// Every admissible Z/p graph of the rank within the edge budget, up to
// equivariant isomorphism.
std::vector<ZpGraph> enumerate_zp_graphs(int p, int rank, int max_edges, std::size_t max_classes = 200000);

bool has_fixed_vertex(const EquivariantGraph& zg);

namespace zp {
ZpGraph rose(int p, int loops);                 // p loops cycled, the rest fixed
ZpGraph theta(int p, int s, int t);             // p-bundle with s and t fixed loops
ZpGraph wedge_diagonal(int p);                  // both bundles rotated together
ZpGraph wedge_one_factor(int p);                // first bundle rotated only
EquivariantGraph wedge_product_action(int p);   // the two rotations separately
ZpGraph complete_bipartite_p3(int p);           // K_{p,3}, rotating the p-block
}  // namespace zp

}  // namespace spinelab
