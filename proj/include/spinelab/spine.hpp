#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spinelab/graph.hpp"
#include "spinelab/symmetry.hpp"

namespace spinelab {

class NameError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EnumerationLimits {
    std::uint64_t max_configurations = 200'000'000;
};

// Canonical representatives of all admissible graphs of the given rank,
// sorted by (edges, vertices, canonical form).
std::vector<HalfEdgeGraph> enumerate_admissible_graphs(int rank, const EnumerationLimits& limits = {});
std::vector<CanonicalForm> enumerate_admissible(int rank, const EnumerationLimits& limits = {});

struct SingularGraph {
    CanonicalForm form;
    HalfEdgeGraph graph;  // canonical representative
    AutGroup group;
};

std::vector<SingularGraph> singular_graphs(int p, int rank, const EnumerationLimits& limits = {});

struct ForestChain {
    std::vector<Forest> forests;  // strictly decreasing, all nonempty
    auto operator<=>(const ForestChain&) const = default;
};

struct QuotientCell {
    int dim = 0;
    int top = 0;  // index into the graph census
    ForestChain chain;
    AutGroup isotropy;
    std::vector<int> faces;     // faces[i] = index (in dim-1) of the face omitting vertex i
    std::vector<int> vertices;  // census index of vertex i: top/tau_i for i < dim, top for i = dim
};

struct QuotientComplex {
    int p = 3;
    int rank = 4;
    std::vector<SingularGraph> graphs;
    std::vector<std::vector<QuotientCell>> cells;  // by dimension; cells[0] mirrors graphs
    std::vector<int> component_of_vertex;
    int component_count = 0;

    int component_of(int dim, int index) const { return component_of_vertex[cells[dim][index].top]; }
    int max_dim() const { return static_cast<int>(cells.size()) - 1; }
};

// Cells of one dimension over the given census (faces left empty).
std::vector<QuotientCell> enumerate_cells(const std::vector<SingularGraph>& census, int p, int dim);
QuotientComplex quotient_complex(int p, int rank, const EnumerationLimits& limits = {});
QuotientComplex quotient_complex(int p, int rank, std::vector<SingularGraph> census);

// Checks d_i d_j = d_{j-1} d_i for i < j on every cell; returns the number of violations.
int simplicial_identity_violations(const QuotientComplex& qc);

// Reduced Betti numbers over F_p of a component (or the whole complex when component < 0).
std::vector<int> reduced_homology(const QuotientComplex& qc, int component, std::uint64_t p);

struct TableOneEntry {
    std::string name;
    int vertices = 0;
    int edges = 0;
    int loops = 0;
    std::vector<int> degrees;  // descending
    std::uint64_t aut_order = 0;
};

struct TableTwoEntry {
    std::string top;
    std::string bottom;
    std::uint64_t isotropy_order = 0;
};

struct GraphSignature {
    int vertices, edges, loops;
    std::vector<int> degrees;
    std::uint64_t aut_order;
    auto operator<=>(const GraphSignature&) const = default;
};

GraphSignature signature(const SingularGraph& g);

// Assigns a name to every census graph by signature lookup; ties are broken by
// comparing the collapse relations of the computed 1-cells against `relations`.
std::vector<std::string> match_names(const QuotientComplex& qc, const std::vector<TableOneEntry>& table,
                                     const std::vector<TableTwoEntry>& relations);

}  // namespace spinelab
