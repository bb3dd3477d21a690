#include "spinelab/report.hpp"

#include <sstream>

namespace spinelab {

const char* const kClosedFormModule = "F3[r4,r8] ⊗ Λ(s3){1, t7, t̃7, t8}";

namespace {

std::string join_ints(const std::vector<int>& v, const char* sep = ",") {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? sep : "") << v[i];
    return os.str();
}

std::string join(const std::vector<std::string>& v, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

nlohmann::ordered_json dims_json(const GradedDims& d, int from_degree) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (int k = from_degree; k <= d.bound(); ++k) j[std::to_string(k)] = d[k];
    return j;
}

std::string census_markdown(const Corpus& c) {
    std::ostringstream os;
    os << "## " << c.p << "-singular admissible graphs of rank " << c.rank << "\n\n";
    os << "| # | graph | vertices | edges | loops | degrees | Aut order | Sylow " << c.p << " |\n";
    os << "|---|---|---|---|---|---|---|---|\n";
    int i = 0;
    for (const auto& g : c.graphs)
        os << "| " << i++ << " | " << g.name << " | " << g.graph.vertex_count() << " | " << g.graph.edge_count() << " | "
           << g.graph.loop_count() << " | " << join_ints(g.graph.degree_sequence()) << " | " << g.aut_order << " | "
           << g.sylow_p_order << " |\n";
    os << "\n" << c.graphs.size() << " graphs.\n";
    return os.str();
}

std::string cells_markdown(const Corpus& c, int dim) {
    std::ostringstream os;
    os << "## " << dim << "-cells\n\n";
    os << "| # | vertices of the cell | forests | faces | isotropy order |\n";
    os << "|---|---|---|---|---|\n";
    int i = 0;
    for (const auto* cell : c.cells_of_dim(dim)) {
        std::vector<std::string> forests;
        for (const auto& f : cell->forests) forests.push_back("{" + join_ints(f) + "}");
        os << "| " << i++ << " | " << join(cell->vertices, ", ") << " | " << join(forests, " ⊃ ") << " | "
           << join_ints(cell->faces) << " | " << cell->isotropy_order << " |\n";
    }
    os << "\n" << i << " cells.\n";
    return os.str();
}

std::string corpus_markdown(const Corpus& c) {
    std::ostringstream os;
    os << "# Singular locus, p = " << c.p << ", rank " << c.rank << "\n\n" << census_markdown(c);
    int top = 0;
    for (const auto& cell : c.cells) top = std::max(top, cell.dim);
    for (int d = 1; d <= top; ++d) os << "\n" << cells_markdown(c, d);
    return os.str();
}

std::string component_markdown(const ComponentResult& r, int from_degree) {
    std::ostringstream os;
    os << "## Component " << r.which << "\n\n";
    os << "vertices: " << r.vertex_count << "; cells by dimension: " << join_ints(r.cell_counts, " / ")
       << "; method: " << r.method << "\n\n";
    os << "| degree | dim |\n|---|---|\n";
    for (int d = from_degree; d <= r.dims.bound(); ++d) os << "| " << d << " | " << r.dims[d] << " |\n";
    return os.str();
}

nlohmann::ordered_json to_json(const ComponentResult& r) {
    nlohmann::ordered_json j;
    j["which"] = r.which;
    j["component"] = r.component;
    j["vertex_count"] = r.vertex_count;
    j["cell_counts"] = r.cell_counts;
    j["method"] = r.method;
    j["dims"] = dims_json(r.dims);
    return j;
}

std::string assembly_markdown(const AssemblyReport& r, int from_degree) {
    std::ostringstream os;
    os << "## Equivariant cohomology of the singular locus, p = 3, rank 4\n\n";
    os << "Closed form: 2 · (F3[a4] ⊗ Λ(b3)) ⊕ " << kClosedFormModule << "\n\n";
    os << "Poincaré series of the K33 summand: " << r.closed_form.to_string() << "\n\n";
    os << "| degree | rose | Θ2^{1,1} | K33 | total | expected | match |\n";
    os << "|---|---|---|---|---|---|---|\n";
    for (int d = from_degree; d <= r.bound; ++d)
        os << "| " << d << " | " << r.rose.dims[d] << " | " << r.theta11.dims[d] << " | " << r.k33.dims[d] << " | "
           << r.total[d] << " | " << r.expected[d] << " | " << yes_no(r.total[d] == r.expected[d]) << " |\n";
    os << "\nChecks: face maps derived from isotropy agree with the supplied restrictions: "
       << yes_no(r.derived_maps_match_inputs) << "; d1 d1 = 0 on the full E1 page: " << yes_no(r.e1_squares_zero)
       << "; K33 amalgam agrees with its E1 page: " << yes_no(r.k33.dims == r.k33_via_e1)
       << "; relative complex modulo the critical edge acyclic: " << yes_no(r.retraction.acyclic)
       << "; agreement in degrees " << from_degree << ".." << r.bound << ": " << yes_no(r.matches_from_degree_6)
       << "\n";
    return os.str();
}

nlohmann::ordered_json to_json(const AssemblyReport& r, int from_degree) {
    nlohmann::ordered_json j;
    j["bound"] = r.bound;
    j["from_degree"] = from_degree;
    j["closed_form"] = std::string("2 (F3[a4] ⊗ Λ(b3)) ⊕ ") + kClosedFormModule;
    j["k33_series"] = r.closed_form.to_string();
    j["components"] = {to_json(r.rose), to_json(r.theta11), to_json(r.k33)};
    j["total"] = dims_json(r.total, from_degree);
    j["expected"] = dims_json(r.expected, from_degree);
    j["derived_maps_match_inputs"] = r.derived_maps_match_inputs;
    j["e1_squares_zero"] = r.e1_squares_zero;
    j["k33_amalgam_matches_e1"] = r.k33.dims == r.k33_via_e1;
    j["critical_edge_retraction"] = {{"critical_edge", r.retraction.critical_edge},
                                     {"relative_betti", r.retraction.relative_betti},
                                     {"acyclic", r.retraction.acyclic},
                                     {"outside_cells_sigma_type", r.retraction.outside_cells_sigma_type}};
    j["matches"] = r.matches_from_degree_6;
    return j;
}

std::string pipeline_markdown(const PipelineReport& r) {
    std::ostringstream os;
    os << "## Normalizer amalgam pipeline, p = " << r.p << "\n\n";
    if (r.p3_excluded_route) os << "Note: p = 3 lies outside the normalizer-poset reduction; mechanics only.\n\n";
    os << "| degree | Eq | N2 | ker | M ⊗ ker | N2 + M ⊗ ker |\n|---|---|---|---|---|---|\n";
    for (int d = 0; d <= r.bound; ++d)
        os << "| " << d << " | " << r.eq_dims[d] << " | " << r.n2_dims[d] << " | " << r.kernel_dims[d] << " | "
           << r.m_tensor_kernel_dims[d] << " | " << r.n2_dims[d] + r.m_tensor_kernel_dims[d] << " |\n";
    os << "\nIdentity dim Eq = dim N2 + dim (M ⊗ ker) through degree " << r.bound << ": " << yes_no(r.identity_holds)
       << "\n";
    return os.str();
}

nlohmann::ordered_json to_json(const PipelineReport& r) {
    nlohmann::ordered_json j;
    j["p"] = r.p;
    j["bound"] = r.bound;
    j["eq"] = dims_json(r.eq_dims);
    j["n2"] = dims_json(r.n2_dims);
    j["kernel"] = dims_json(r.kernel_dims);
    j["m_tensor_kernel"] = dims_json(r.m_tensor_kernel_dims);
    j["identity_holds"] = r.identity_holds;
    j["p3_excluded_route"] = r.p3_excluded_route;
    return j;
}

}  // namespace spinelab
