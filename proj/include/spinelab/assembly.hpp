#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spinelab/algebra.hpp"
#include "spinelab/series.hpp"
#include "spinelab/spine.hpp"

namespace spinelab {

class AssemblyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CellKey {
    int dim = 0;
    int index = 0;
    auto operator<=>(const CellKey&) const = default;
};

// Restriction from the coefficients of a face to those of the cell.
struct FaceMap {
    bool identity = true;
    AlgebraMorphism map;
    std::string label = "identity";
};

struct CoefficientRule {
    std::map<CellKey, AlgebraPtr> coefficients;
    std::map<std::pair<CellKey, int>, FaceMap> faces;  // missing entries are identities

    const FaceMap& face(const CellKey& cell, int i) const;
};

struct E1Page {
    std::uint64_t p = 3;
    int bound = 0;
    std::vector<std::vector<CellKey>> cells;         // by s
    std::vector<std::vector<GradedDims>> dims;       // by s, per cell
    std::vector<std::vector<FpMatrix>> coboundary;   // [s][q]: E1^{s,q} -> E1^{s+1,q}

    int max_s() const { return static_cast<int>(cells.size()) - 1; }
    std::int64_t dim(int s, int q) const;
    // Number of (s, q) with d1 d1 != 0.
    int square_violations() const;
};

// Cells of one component (or all when component < 0).
E1Page build_e1(const QuotientComplex& qc, const CoefficientRule& rule, int component, int bound);

// E2^{s,q} dims, indexed [s] then q.
std::vector<GradedDims> e2_dims(const E1Page& page);

// Total dims; requires E2 to vanish for s >= 2, so that the sequence
// degenerates at E2.
GradedDims equivariant_cohomology(const E1Page& page, int bound);

// Coefficient algebras and restrictions for p = 3, rank 4, read from fixtures.
struct AssemblyInputs {
    AlgebraPtr sigma3;     // F3[z4] (x) Lambda(w3)
    AlgebraPtr wreath_k;   // F3[x4,x8] (x) Lambda(u3,u7), vertex K33
    AlgebraPtr wreath_2;   // F3[y4,y8] (x) Lambda(v3,v7), vertex Theta2 v Theta2
    AlgebraMorphism alpha;  // wreath_k -> sigma3
    AlgebraMorphism beta;   // wreath_2 -> sigma3
};

// Invariant-theoretic model of H*(Sigma_p wr Z/2) with its restrictions to a
// factor and to the diagonal copy of Sigma_p.
struct WreathModel {
    AlgebraPtr ambient;       // F_p[c_1,c_2] (x) Lambda(d_1,d_2)
    GroupAction swap;
    std::vector<Element> invariant_generators;  // c, c', d, d' in ambient
    AlgebraPtr presentation;  // free on the invariant generators
    AlgebraPtr edge;          // H*(Sigma_p)
    AlgebraMorphism factor;   // presentation -> edge
    AlgebraMorphism diagonal;
};

WreathModel wreath_model(std::uint64_t p, int bound = 40);

enum class WreathEmbedding { Factor, Diagonal };

// Type of an order-p element of a vertex group with Sylow subgroup of order
// p^2, by fixed-point count: factor elements fix the larger subgraph.
WreathEmbedding classify_embedding(const AutGroup& vertex_group, const GraphAutomorphism& g, std::uint64_t p);

// Automorphism induced on the census graph `target` by collapsing an
// invariant forest.
GraphAutomorphism induced_on_collapse(const HalfEdgeGraph& top, const Forest& f, const GraphAutomorphism& g,
                                      const HalfEdgeGraph& target);

struct CellCoefficientInfo {
    CellKey cell;
    std::uint64_t isotropy_order = 0;
    std::uint64_t sylow_order = 0;
    int normalizer_quotient = 0;  // |N(P)/C(P)| for cyclic Sylow of order p
};

struct WreathFaceInfo {
    CellKey cell;
    int face = 0;
    int vertex = 0;
    WreathEmbedding type = WreathEmbedding::Factor;
};

struct RuleReport {
    std::vector<CellCoefficientInfo> cells;
    std::vector<WreathFaceInfo> wreath_faces;
    bool derived_maps_match_inputs = false;
};

// Coefficients from the isotropy groups: cyclic Sylow of order p with
// N/C of order p-1 gives H*(Sigma_p); order p^2 vertices give the wreath
// algebra. Faces between Sigma_p-type cells are identities; faces at wreath
// vertices are the factor or diagonal restriction.
CoefficientRule standard_rule(const QuotientComplex& qc, const AssemblyInputs& in, RuleReport* report = nullptr);

struct ComponentIds {
    int rose = -1;
    int theta11 = -1;
    int k33 = -1;
};

ComponentIds locate_components(const QuotientComplex& qc);

// Relative cochains of a component modulo the closed critical edge, constant
// coefficients.
struct RetractionCheck {
    int critical_edge = -1;
    std::vector<int> relative_betti;
    bool acyclic = false;
    bool outside_cells_sigma_type = false;
};

RetractionCheck critical_edge_retraction(const QuotientComplex& qc, int component, const RuleReport& report);

// dims of {(u, v) : f1(u) = f2(v)} given degree-wise matrices; needs f1 or
// f2 surjective in each degree.
GradedDims amalgam_cohomology(const GradedDims& h1, const GradedDims& h2, const GradedDims& h12,
                              const std::vector<FpMatrix>& f1, const std::vector<FpMatrix>& f2, int bound);
GradedDims amalgam_cohomology(const AlgebraMorphism& f1, const AlgebraMorphism& f2, int bound);

struct ComponentResult {
    std::string which;
    int component = -1;
    int vertex_count = 0;
    std::vector<int> cell_counts;  // by dimension
    GradedDims dims;
    std::string method;
};

struct AssemblyReport {
    int bound = 0;
    ComponentResult rose, theta11, k33;
    GradedDims k33_via_e1;
    RetractionCheck retraction;
    GradedDims total;
    GradedDims expected;
    PowerSeriesRat closed_form;
    bool derived_maps_match_inputs = false;
    bool e1_squares_zero = false;
    bool matches_from_degree_6 = false;
};

ComponentResult component_cohomology(const QuotientComplex& qc, const AssemblyInputs& in, const std::string& which,
                                     int bound);
AssemblyReport corollary12(const QuotientComplex& qc, const AssemblyInputs& in, int bound);

struct PipelineReport {
    std::uint64_t p = 0;
    int bound = 0;
    GradedDims eq_dims;
    GradedDims n2_dims;
    GradedDims kernel_dims;
    GradedDims m_tensor_kernel_dims;
    bool identity_holds = false;
    bool p3_excluded_route = false;  // p = 3 is outside the normalizer-poset reduction
};

// aut_input stands for H*(Aut(F_{p-1})); restriction maps it onto
// H*(N_{Sigma_p}(Z/p)) presented by cohomology_of_metacyclic(p, p-1).
PipelineReport theorem14_pipeline(std::uint64_t p, const AlgebraPtr& aut_input, const AlgebraMorphism& restriction,
                                   int bound);

}  // namespace spinelab
