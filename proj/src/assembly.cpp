#include "spinelab/assembly.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace spinelab {

const FaceMap& CoefficientRule::face(const CellKey& cell, int i) const {
    static const FaceMap identity_map{};
    auto it = faces.find({cell, i});
    return it == faces.end() ? identity_map : it->second;
}

std::int64_t E1Page::dim(int s, int q) const {
    if (s < 0 || s > max_s()) return 0;
    std::int64_t total = 0;
    for (const auto& d : dims[s]) total += d[q];
    return total;
}

int E1Page::square_violations() const {
    int bad = 0;
    for (int s = 0; s + 2 <= max_s(); ++s)
        for (int q = 0; q <= bound; ++q) {
            const FpMatrix& a = coboundary[s][q];
            const FpMatrix& b = coboundary[s + 1][q];
            if (a.cols() == 0 || b.rows() == 0) continue;
            if (!(b * a).is_zero()) ++bad;
        }
    return bad;
}

namespace {

int component_of_cell(const QuotientComplex& qc, int d, int i) { return qc.component_of(d, i); }

FpMatrix zero_matrix(int rows, int cols, std::uint64_t p) { return FpMatrix(rows, cols, p); }

}  // namespace

E1Page build_e1(const QuotientComplex& qc, const CoefficientRule& rule, int component, int bound) {
    E1Page page;
    page.p = static_cast<std::uint64_t>(qc.p);
    page.bound = bound;
    for (int d = 0; d <= qc.max_dim(); ++d) {
        std::vector<CellKey> keys;
        for (int i = 0; i < static_cast<int>(qc.cells[d].size()); ++i)
            if (component < 0 || component_of_cell(qc, d, i) == component) keys.push_back({d, i});
        if (keys.empty()) break;
        page.cells.push_back(std::move(keys));
    }
    auto coefficient = [&](const CellKey& k) -> const AlgebraPtr& {
        auto it = rule.coefficients.find(k);
        if (it == rule.coefficients.end())
            throw AssemblyError("coefficient rule does not cover cell " + std::to_string(k.dim) + ":" +
                                std::to_string(k.index));
        return it->second;
    };
    page.dims.resize(page.cells.size());
    for (std::size_t s = 0; s < page.cells.size(); ++s)
        for (const auto& k : page.cells[s]) page.dims[s].push_back(coefficient(k)->dimensions(bound));

    page.coboundary.resize(page.cells.size());
    for (int s = 0; s < page.max_s(); ++s) {
        std::map<int, int> col_cell;
        for (std::size_t j = 0; j < page.cells[s].size(); ++j) col_cell[page.cells[s][j].index] = static_cast<int>(j);
        for (int q = 0; q <= bound; ++q) {
            std::vector<int> col_off(page.cells[s].size() + 1, 0), row_off(page.cells[s + 1].size() + 1, 0);
            for (std::size_t j = 0; j < page.cells[s].size(); ++j)
                col_off[j + 1] = col_off[j] + static_cast<int>(page.dims[s][j][q]);
            for (std::size_t j = 0; j < page.cells[s + 1].size(); ++j)
                row_off[j + 1] = row_off[j] + static_cast<int>(page.dims[s + 1][j][q]);
            FpMatrix D = zero_matrix(row_off.back(), col_off.back(), page.p);
            const PrimeField& F = D.field();
            for (std::size_t r = 0; r < page.cells[s + 1].size(); ++r) {
                const CellKey sigma = page.cells[s + 1][r];
                const QuotientCell& cell = qc.cells[sigma.dim][sigma.index];
                for (int i = 0; i <= sigma.dim; ++i) {
                    const CellKey tau{sigma.dim - 1, cell.faces[i]};
                    const int c = col_cell.at(tau.index);
                    const int nr = row_off[r + 1] - row_off[r], nc = col_off[c + 1] - col_off[c];
                    if (nr == 0 && nc == 0) continue;
                    const FaceMap& fm = rule.face(sigma, i);
                    FpMatrix block;
                    if (fm.identity) {
                        if (!coefficient(tau)->same_shape(*coefficient(sigma)) || nr != nc)
                            throw AssemblyError("identity face between unequal coefficients at cell " +
                                                std::to_string(sigma.dim) + ":" + std::to_string(sigma.index));
                        block = FpMatrix::identity(nr, page.p);
                    } else {
                        block = fm.map.matrix_in_degree(q);
                    }
                    const Fp sign = i % 2 == 0 ? 1 : page.p - 1;
                    for (int a = 0; a < nr; ++a)
                        for (int b = 0; b < nc; ++b) {
                            Fp& x = D.at(row_off[r] + a, col_off[c] + b);
                            x = F.add(x, F.mul(sign, block.at(a, b)));
                        }
                }
            }
            page.coboundary[s].push_back(std::move(D));
        }
    }
    return page;
}

std::vector<GradedDims> e2_dims(const E1Page& page) {
    const int S = page.max_s();
    std::vector<std::vector<int>> rank(S + 1, std::vector<int>(page.bound + 1, 0));
    for (int s = 0; s < S; ++s)
        for (int q = 0; q <= page.bound; ++q) rank[s][q] = page.coboundary[s][q].rank();
    std::vector<GradedDims> out;
    for (int s = 0; s <= S; ++s) {
        GradedDims g(page.bound);
        for (int q = 0; q <= page.bound; ++q) {
            std::int64_t ker = page.dim(s, q) - (s < S ? rank[s][q] : 0);
            std::int64_t im = s > 0 ? rank[s - 1][q] : 0;
            g.dims[q] = ker - im;
        }
        out.push_back(g);
    }
    return out;
}

GradedDims equivariant_cohomology(const E1Page& page, int bound) {
    if (bound > page.bound) throw AssemblyError("requested bound exceeds the page bound");
    auto e2 = e2_dims(page);
    for (std::size_t s = 2; s < e2.size(); ++s)
        for (int q = 0; q <= page.bound; ++q)
            if (e2[s][q] != 0)
                throw AssemblyError("E2 is not concentrated in s <= 1 (E2^{" + std::to_string(s) + "," +
                                    std::to_string(q) + "} != 0); higher differentials are not handled");
    GradedDims out(bound);
    for (int n = 0; n <= bound; ++n)
        for (int s = 0; s <= std::min(1, page.max_s()) && s <= n; ++s) out.dims[n] += e2[s][n - s];
    return out;
}

// ---------------------------------------------------------------------------

WreathModel wreath_model(std::uint64_t p, int bound) {
    const int e = static_cast<int>(2 * p - 2), o = static_cast<int>(2 * p - 3);
    const std::string ce = "c" + std::to_string(e), dd = "d" + std::to_string(o);
    WreathModel wm;
    wm.ambient = GradedAlgebra::make(p,
                                     {{ce + "1", e, GenKind::Polynomial},
                                      {ce + "2", e, GenKind::Polynomial},
                                      {dd + "1", o, GenKind::Exterior},
                                      {dd + "2", o, GenKind::Exterior}},
                                     "wreath ambient");
    wm.swap = GroupAction{{MonomialSubstitution{{{1, 1}, {1, 0}, {1, 3}, {1, 2}}}}};
    auto g = [&](const std::string& n) { return Element::generator(wm.ambient, n); };
    Element c1 = g(ce + "1"), c2 = g(ce + "2"), d1 = g(dd + "1"), d2 = g(dd + "2");
    wm.invariant_generators = {c1 + c2, (c1 - c2).pow(2), d1 + d2, (c1 - c2) * (d1 - d2)};
    wm.presentation = GradedAlgebra::make(p,
                                          {{ce, e, GenKind::Polynomial},
                                           {"c" + std::to_string(2 * e), 2 * e, GenKind::Polynomial},
                                           {dd, o, GenKind::Exterior},
                                           {"d" + std::to_string(o + e), o + e, GenKind::Exterior}},
                                          "wreath invariants");
    for (const auto& x : wm.invariant_generators)
        if (!is_invariant(wm.ambient, wm.swap, x)) throw AssemblyError("wreath generator is not invariant");
    if (!(invariants(wm.ambient, wm.swap, bound) == wm.presentation->dimensions(bound)))
        throw AssemblyError("wreath invariants are not free on the four generators");

    const std::string z = "z" + std::to_string(e), w = "w" + std::to_string(o);
    wm.edge = GradedAlgebra::make(p, {{z, e, GenKind::Polynomial}, {w, o, GenKind::Exterior}}, "edge");
    Element ez = Element::generator(wm.edge, z), ew = Element::generator(wm.edge, w);
    Element zero = Element::zero(wm.edge);
    auto restriction = [&](const Element& a, const Element& b, const Element& c, const Element& d) {
        return AlgebraMorphism::from_images(wm.ambient, wm.edge,
                                            {{ce + "1", a}, {ce + "2", b}, {dd + "1", c}, {dd + "2", d}});
    };
    const AlgebraMorphism to_factor = restriction(ez, zero, ew, zero);
    const AlgebraMorphism to_diagonal = restriction(ez, ez, ew, ew);
    auto through = [&](const AlgebraMorphism& r) {
        std::map<std::string, Element> images;
        const auto& gens = wm.presentation->generators();
        for (std::size_t i = 0; i < gens.size(); ++i) images.emplace(gens[i].name, r.apply(wm.invariant_generators[i]));
        return AlgebraMorphism::from_images(wm.presentation, wm.edge, images);
    };
    wm.factor = through(to_factor);
    wm.diagonal = through(to_diagonal);
    return wm;
}

namespace {

int fixed_points(const HalfEdgeGraph& g, const GraphAutomorphism& a) {
    int n = 0;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (a.vperm[v] == v) ++n;
    for (int e = 0; e < g.edge_count(); ++e) {
        const int h = g.edge_half(e);
        if (a.hperm[h] == h || a.hperm[h] == g.sigma(h)) ++n;
    }
    return n;
}

std::optional<GraphAutomorphism> element_of_order(const AutGroup& grp, int k) {
    auto els = elements_of_order(grp, k);
    if (els.empty()) return std::nullopt;
    return els.front();
}

// |N(P)/C(P)| for P the cyclic subgroup generated by g, computed within grp.
int normalizer_quotient(const AutGroup& grp, const GraphAutomorphism& g) {
    std::set<GraphAutomorphism> powers;
    GraphAutomorphism x = g;
    for (int i = 0; i < g.order(); ++i) {
        powers.insert(x);
        x = compose(x, g);
    }
    std::set<GraphAutomorphism> conj;
    for (const auto& h : grp.elements()) {
        GraphAutomorphism c = compose(compose(h, g), h.inverse());
        if (powers.count(c)) conj.insert(c);
    }
    return static_cast<int>(conj.size());
}

HalfEdgeGraph k33_graph() { return graphs::complete_bipartite(3, 3); }

HalfEdgeGraph theta2_wedge_theta2() {
    return HalfEdgeGraph::from_edges(3, {{0, 1}, {0, 1}, {0, 1}, {0, 2}, {0, 2}, {0, 2}});
}

HalfEdgeGraph theta2_11() { return HalfEdgeGraph::from_edges(2, {{0, 1}, {0, 1}, {0, 1}, {0, 0}, {1, 1}}); }

int census_index_of(const QuotientComplex& qc, const HalfEdgeGraph& g) {
    const CanonicalForm f = canonical_form(g);
    for (std::size_t i = 0; i < qc.graphs.size(); ++i)
        if (qc.graphs[i].form == f) return static_cast<int>(i);
    return -1;
}

}  // namespace

WreathEmbedding classify_embedding(const AutGroup& vertex_group, const GraphAutomorphism& g, std::uint64_t p) {
    const int k = static_cast<int>(p);
    if (g.order() != k) throw AssemblyError("classify_embedding: element does not have order p");
    if (!vertex_group.contains(g)) throw AssemblyError("classify_embedding: element is not in the vertex group");
    std::set<int> counts;
    for (const auto& h : elements_of_order(vertex_group, k)) counts.insert(fixed_points(vertex_group.graph(), h));
    if (counts.size() != 2)
        throw AssemblyError("order-p elements of the vertex group do not split into two fixed-point types");
    return fixed_points(vertex_group.graph(), g) == *counts.rbegin() ? WreathEmbedding::Factor
                                                                     : WreathEmbedding::Diagonal;
}

GraphAutomorphism induced_on_collapse(const HalfEdgeGraph& top, const Forest& f, const GraphAutomorphism& g,
                                      const HalfEdgeGraph& target) {
    if (!(apply(top, g, f) == f)) throw AssemblyError("induced_on_collapse: forest is not invariant");
    const Collapse col = collapse_with_map(top, f);
    GraphAutomorphism b = GraphAutomorphism::identity(col.graph);
    for (int v = 0; v < top.vertex_count(); ++v) b.vperm[col.vertex_map[v]] = col.vertex_map[g.vperm[v]];
    for (int h = 0; h < top.half_edge_count(); ++h) {
        const int n = col.half_edge_map[h];
        if (n >= 0) b.hperm[n] = col.half_edge_map[g.hperm[h]];
    }
    const auto rep = canonical_representative(col.graph);
    if (rep.graph == target) return transport(rep.iso, b);
    auto iso = find_isomorphism(col.graph, target);
    if (!iso) throw AssemblyError("induced_on_collapse: collapsed graph is not the target");
    return transport(*iso, b);
}

CoefficientRule standard_rule(const QuotientComplex& qc, const AssemblyInputs& in, RuleReport* report) {
    const std::uint64_t p = static_cast<std::uint64_t>(qc.p);
    if (in.sigma3->prime() != p) throw AssemblyError("coefficient inputs are over the wrong prime");
    const WreathModel wm = wreath_model(p);
    if (!wm.edge->same_shape(*in.sigma3) || !wm.presentation->same_shape(*in.wreath_k) ||
        !wm.presentation->same_shape(*in.wreath_2))
        throw AssemblyError("coefficient inputs do not have the shape of the wreath model");

    const int k33 = census_index_of(qc, k33_graph());
    const int t22 = census_index_of(qc, theta2_wedge_theta2());

    CoefficientRule rule;
    RuleReport rep;
    std::map<CellKey, std::uint64_t> sylow;
    for (int d = 0; d <= qc.max_dim(); ++d) {
        for (int i = 0; i < static_cast<int>(qc.cells[d].size()); ++i) {
            const CellKey key{d, i};
            const AutGroup& G = d == 0 ? qc.graphs[i].group : qc.cells[d][i].isotropy;
            CellCoefficientInfo info;
            info.cell = key;
            info.isotropy_order = G.order();
            info.sylow_order = sylow_p_order(G, p);
            sylow[key] = info.sylow_order;
            if (info.sylow_order == p) {
                auto g = element_of_order(G, static_cast<int>(p));
                info.normalizer_quotient = normalizer_quotient(G, *g);
                if (info.normalizer_quotient != static_cast<int>(p - 1))
                    throw AssemblyError("cell " + std::to_string(d) + ":" + std::to_string(i) +
                                        " has N(P)/C(P) of order " + std::to_string(info.normalizer_quotient) +
                                        "; no coefficient rule");
                rule.coefficients[key] = in.sigma3;
            } else if (info.sylow_order == p * p && d == 0) {
                if (i == k33)
                    rule.coefficients[key] = in.wreath_k;
                else if (i == t22)
                    rule.coefficients[key] = in.wreath_2;
                else
                    rule.coefficients[key] = wm.presentation;
            } else {
                throw AssemblyError("no coefficient rule for cell " + std::to_string(d) + ":" + std::to_string(i) +
                                    " with Sylow order " + std::to_string(info.sylow_order));
            }
            rep.cells.push_back(info);
        }
    }

    int critical = -1;
    for (int d = 1; d <= qc.max_dim(); ++d) {
        for (int i = 0; i < static_cast<int>(qc.cells[d].size()); ++i) {
            const QuotientCell& cell = qc.cells[d][i];
            const CellKey key{d, i};
            int wreath_faces = 0;
            for (int f = 0; f <= d; ++f) {
                const CellKey tau{d - 1, cell.faces[f]};
                if (sylow[tau] != p * p) continue;
                ++wreath_faces;
                if (d != 1) throw AssemblyError("wreath coefficients on a cell of positive dimension");
                const auto g = element_of_order(cell.isotropy, static_cast<int>(p));
                const HalfEdgeGraph& top = qc.graphs[cell.top].graph;
                const GraphAutomorphism gv =
                    f == 0 ? *g : induced_on_collapse(top, cell.chain.forests[0], *g, qc.graphs[tau.index].graph);
                const WreathEmbedding type = classify_embedding(qc.graphs[tau.index].group, gv, p);
                FaceMap fm;
                fm.identity = false;
                fm.label = type == WreathEmbedding::Factor ? "factor" : "diagonal";
                fm.map = (type == WreathEmbedding::Factor ? wm.factor : wm.diagonal)
                             .rebased(rule.coefficients.at(tau), rule.coefficients.at(key));
                rule.faces[{key, f}] = fm;
                rep.wreath_faces.push_back({key, f, tau.index, type});
            }
            if (wreath_faces == 2) critical = i;
        }
    }

    rep.derived_maps_match_inputs = false;
    if (critical >= 0 && k33 >= 0 && t22 >= 0) {
        const CellKey e{1, critical};
        const QuotientCell& cell = qc.cells[1][critical];
        const int top_face = 0, bottom_face = 1;
        const bool oriented = cell.faces[top_face] == k33 && cell.faces[bottom_face] == t22;
        if (oriented) {
            const FaceMap& a = rule.face(e, top_face);
            const FaceMap& b = rule.face(e, bottom_face);
            rep.derived_maps_match_inputs = !a.identity && !b.identity && morphisms_equal(a.map, in.alpha, 24) &&
                                            morphisms_equal(b.map, in.beta, 24);
        }
    }
    if (report) *report = rep;
    return rule;
}

ComponentIds locate_components(const QuotientComplex& qc) {
    ComponentIds ids;
    const int r = census_index_of(qc, graphs::rose(4));
    const int t = census_index_of(qc, theta2_11());
    const int k = census_index_of(qc, k33_graph());
    if (r < 0 || t < 0 || k < 0) throw AssemblyError("rank-4 component base graphs are missing from the census");
    ids.rose = qc.component_of_vertex[r];
    ids.theta11 = qc.component_of_vertex[t];
    ids.k33 = qc.component_of_vertex[k];
    return ids;
}

RetractionCheck critical_edge_retraction(const QuotientComplex& qc, int component, const RuleReport& report) {
    const std::uint64_t p = static_cast<std::uint64_t>(qc.p);
    std::map<CellKey, const CellCoefficientInfo*> info;
    for (const auto& c : report.cells) info[c.cell] = &c;
    RetractionCheck rc;
    if (qc.max_dim() < 1) return rc;
    for (int i = 0; i < static_cast<int>(qc.cells[1].size()); ++i) {
        if (qc.component_of(1, i) != component) continue;
        const auto& f = qc.cells[1][i].faces;
        if (info.at({0, f[0]})->sylow_order == p * p && info.at({0, f[1]})->sylow_order == p * p) {
            if (rc.critical_edge >= 0) throw AssemblyError("more than one critical edge");
            rc.critical_edge = i;
        }
    }
    if (rc.critical_edge < 0) throw AssemblyError("component has no critical edge");
    std::set<CellKey> closure{{1, rc.critical_edge},
                              {0, qc.cells[1][rc.critical_edge].faces[0]},
                              {0, qc.cells[1][rc.critical_edge].faces[1]}};
    std::vector<std::vector<int>> members(qc.max_dim() + 1);
    std::vector<std::map<int, int>> local(qc.max_dim() + 1);
    rc.outside_cells_sigma_type = true;
    for (int d = 0; d <= qc.max_dim(); ++d)
        for (int i = 0; i < static_cast<int>(qc.cells[d].size()); ++i) {
            if (qc.component_of(d, i) != component || closure.count({d, i})) continue;
            local[d][i] = static_cast<int>(members[d].size());
            members[d].push_back(i);
            const auto* ci = info.at({d, i});
            if (ci->sylow_order != p || ci->normalizer_quotient != static_cast<int>(p - 1))
                rc.outside_cells_sigma_type = false;
        }
    const PrimeField F(p);
    std::vector<int> ranks(qc.max_dim() + 2, 0);
    for (int d = 1; d <= qc.max_dim(); ++d) {
        const int cols = static_cast<int>(members[d].size()), rows = static_cast<int>(members[d - 1].size());
        if (cols == 0 || rows == 0) continue;
        FpMatrix m(rows, cols, p);
        for (int c = 0; c < cols; ++c) {
            const auto& cell = qc.cells[d][members[d][c]];
            for (int i = 0; i <= d; ++i) {
                auto it = local[d - 1].find(cell.faces[i]);
                if (it == local[d - 1].end()) continue;  // face lies in the critical edge
                Fp& x = m.at(it->second, c);
                x = i % 2 == 0 ? F.add(x, 1) : F.sub(x, 1);
            }
        }
        ranks[d] = m.rank();
    }
    rc.relative_betti.assign(qc.max_dim() + 1, 0);
    rc.acyclic = true;
    for (int d = 0; d <= qc.max_dim(); ++d) {
        rc.relative_betti[d] = static_cast<int>(members[d].size()) - ranks[d] - ranks[d + 1];
        if (rc.relative_betti[d] != 0) rc.acyclic = false;
    }
    return rc;
}

GradedDims amalgam_cohomology(const GradedDims& h1, const GradedDims& h2, const GradedDims& h12,
                              const std::vector<FpMatrix>& f1, const std::vector<FpMatrix>& f2, int bound) {
    if (static_cast<int>(f1.size()) <= bound || static_cast<int>(f2.size()) <= bound)
        throw AssemblyError("amalgam: maps are missing for some degrees");
    GradedDims out(bound);
    for (int d = 0; d <= bound; ++d) {
        const FpMatrix& a = f1[d];
        const FpMatrix& b = f2[d];
        if (a.rows() != h12[d] || b.rows() != h12[d] || a.cols() != h1[d] || b.cols() != h2[d])
            throw AssemblyError("amalgam: matrix sizes do not match the dims in degree " + std::to_string(d));
        const int ra = a.rank(), rb = b.rank();
        if (ra != h12[d] && rb != h12[d])
            throw AssemblyError("amalgam: neither map is surjective in degree " + std::to_string(d) +
                                "; the Mayer-Vietoris connecting map would be needed");
        FpMatrix both(static_cast<int>(h12[d]), a.cols() + b.cols(), a.prime());
        for (int r = 0; r < both.rows(); ++r) {
            for (int c = 0; c < a.cols(); ++c) both.at(r, c) = a.at(r, c);
            for (int c = 0; c < b.cols(); ++c) both.at(r, a.cols() + c) = a.field().neg(b.at(r, c));
        }
        out.dims[d] = h1[d] + h2[d] - both.rank();
    }
    return out;
}

GradedDims amalgam_cohomology(const AlgebraMorphism& f1, const AlgebraMorphism& f2, int bound) {
    if (!f1.target()->same_shape(*f2.target())) throw AssemblyError("amalgam: targets differ");
    std::vector<FpMatrix> m1, m2;
    for (int d = 0; d <= bound; ++d) {
        m1.push_back(f1.matrix_in_degree(d));
        m2.push_back(f2.matrix_in_degree(d));
    }
    return amalgam_cohomology(f1.source()->dimensions(bound), f2.source()->dimensions(bound),
                              f1.target()->dimensions(bound), m1, m2, bound);
}

namespace {

ComponentResult describe_component(const QuotientComplex& qc, const std::string& which, int component) {
    ComponentResult r;
    r.which = which;
    r.component = component;
    for (int d = 0; d <= qc.max_dim(); ++d) {
        int n = 0;
        for (int i = 0; i < static_cast<int>(qc.cells[d].size()); ++i)
            if (qc.component_of(d, i) == component) ++n;
        r.cell_counts.push_back(n);
    }
    while (!r.cell_counts.empty() && r.cell_counts.back() == 0) r.cell_counts.pop_back();
    r.vertex_count = r.cell_counts.empty() ? 0 : r.cell_counts[0];
    return r;
}

ComponentResult component_with_rule(const QuotientComplex& qc, const AssemblyInputs& in, const CoefficientRule& rule,
                                    const RuleReport& rep, const std::string& which, int bound) {
    const ComponentIds ids = locate_components(qc);
    if (which == "rose" || which == "theta11") {
        const int c = which == "rose" ? ids.rose : ids.theta11;
        ComponentResult r = describe_component(qc, which, c);
        const E1Page page = build_e1(qc, rule, c, bound);
        if (page.square_violations() != 0) throw AssemblyError("d1 d1 != 0 on the " + which + " component");
        r.dims = equivariant_cohomology(page, bound);
        r.method = "E1 page, degenerate at E2";
        return r;
    }
    if (which == "k33") {
        ComponentResult r = describe_component(qc, which, ids.k33);
        const RetractionCheck rc = critical_edge_retraction(qc, ids.k33, rep);
        if (!rc.acyclic || !rc.outside_cells_sigma_type)
            throw AssemblyError("the complement of the critical edge is not an acyclic identity region");
        r.dims = amalgam_cohomology(in.alpha, in.beta, bound);
        r.method = "critical-edge retraction and amalgam";
        return r;
    }
    throw AssemblyError("unknown component '" + which + "' (expected rose, theta11 or k33)");
}

}  // namespace

ComponentResult component_cohomology(const QuotientComplex& qc, const AssemblyInputs& in, const std::string& which,
                                     int bound) {
    RuleReport rep;
    const CoefficientRule rule = standard_rule(qc, in, &rep);
    return component_with_rule(qc, in, rule, rep, which, bound);
}

AssemblyReport corollary12(const QuotientComplex& qc, const AssemblyInputs& in, int bound) {
    AssemblyReport out;
    out.bound = bound;
    RuleReport rep;
    const CoefficientRule rule = standard_rule(qc, in, &rep);
    out.derived_maps_match_inputs = rep.derived_maps_match_inputs;
    out.rose = component_with_rule(qc, in, rule, rep, "rose", bound);
    out.theta11 = component_with_rule(qc, in, rule, rep, "theta11", bound);
    out.k33 = component_with_rule(qc, in, rule, rep, "k33", bound);
    const ComponentIds ids = locate_components(qc);
    out.retraction = critical_edge_retraction(qc, ids.k33, rep);
    out.k33_via_e1 = equivariant_cohomology(build_e1(qc, rule, ids.k33, bound), bound);
    out.e1_squares_zero = build_e1(qc, rule, -1, bound).square_violations() == 0;
    out.total = out.rose.dims + out.theta11.dims + out.k33.dims;
    out.expected = 2 * in.sigma3->dimensions(bound) + fibre_product(in.alpha, in.beta, bound).dims;
    const IntPoly one{1};
    const IntPoly chi_num = (one + IntPoly::monomial(1, 3)) * (one + IntPoly::monomial(2, 7) + IntPoly::monomial(1, 8));
    const IntPoly chi_den = (one - IntPoly::monomial(1, 4)) * (one - IntPoly::monomial(1, 8));
    out.closed_form = PowerSeriesRat(IntPoly{2} * (one + IntPoly::monomial(1, 3)), one - IntPoly::monomial(1, 4)) +
                      PowerSeriesRat(chi_num, chi_den);
    const GradedDims series = out.closed_form.expand(bound);
    out.matches_from_degree_6 = true;
    for (int d = 6; d <= bound; ++d)
        if (out.total[d] != out.expected[d] || out.total[d] != series[d]) out.matches_from_degree_6 = false;
    return out;
}

PipelineReport theorem14_pipeline(std::uint64_t p, const AlgebraPtr& aut_input, const AlgebraMorphism& restriction,
                                   int bound) {
    PipelineReport rep;
    rep.p = p;
    rep.bound = bound;
    rep.p3_excluded_route = p == 3;
    const AlgebraPtr M = cohomology_of_metacyclic(p, static_cast<int>(p - 1), bound).presentation;
    if (aut_input->component_count() != 1 || !restriction.source()->same_shape(*aut_input) ||
        !restriction.target()->same_shape(*M))
        throw AssemblyError("restriction must map the input onto H*(N(Z/p)) of shape " + M->name());
    for (int d = 0; d <= bound; ++d)
        if (!restriction.surjective_in_degree(d))
            throw AssemblyError("restriction is not surjective in degree " + std::to_string(d));

    const AlgebraPtr M1 = with_suffix(M, "_1"), M2 = with_suffix(M, "_2"), A2 = with_suffix(aut_input, "_2");
    const AlgebraPtr MA = GradedAlgebra::tensor(M1, A2, "M(x)A");
    const AlgebraPtr MM = GradedAlgebra::tensor(M1, M2, "M(x)M");
    const int n = static_cast<int>(M->generators().size());

    std::map<std::string, Element> images;
    for (int i = 0; i < n; ++i)
        images.emplace(M1->generators()[i].name, Element::generator(MM, M1->generators()[i].name));
    for (std::size_t j = 0; j < aut_input->generators().size(); ++j) {
        const Element a = Element::generator(aut_input, aut_input->generators()[j].name);
        images.emplace(A2->generators()[j].name, embed(reparent(restriction.apply(a), M), MM, n));
    }
    const AlgebraMorphism f1 = AlgebraMorphism::from_images(MA, MM, images);

    GroupAction swap;
    MonomialSubstitution s;
    for (int i = 0; i < 2 * n; ++i) s.images.emplace_back(1, i < n ? i + n : i - n);
    swap.generators.push_back(s);

    rep.eq_dims = GradedDims(bound);
    rep.n2_dims = GradedDims(bound);
    rep.kernel_dims = GradedDims(bound);
    for (int d = 0; d <= bound; ++d) {
        const FpMatrix F1 = f1.matrix_in_degree(d);
        const auto inv = invariant_basis(MM, swap, d);
        rep.n2_dims.dims[d] = static_cast<std::int64_t>(inv.size());
        FpMatrix both(F1.rows(), F1.cols() + static_cast<int>(inv.size()), p);
        for (int r = 0; r < F1.rows(); ++r)
            for (int c = 0; c < F1.cols(); ++c) both.at(r, c) = F1.at(r, c);
        for (std::size_t k = 0; k < inv.size(); ++k) {
            const auto v = inv[k].coordinates(d);
            for (int r = 0; r < F1.rows(); ++r)
                both.at(r, F1.cols() + static_cast<int>(k)) = both.field().neg(v[r]);
        }
        rep.eq_dims.dims[d] = both.cols() - both.rank();
        rep.kernel_dims.dims[d] =
            static_cast<std::int64_t>(aut_input->basis(d).size()) - restriction.matrix_in_degree(d).rank();
    }
    rep.m_tensor_kernel_dims = tensor_dims(M->dimensions(bound), rep.kernel_dims);
    rep.identity_holds = rep.eq_dims == rep.n2_dims + rep.m_tensor_kernel_dims;
    return rep;
}

}  // namespace spinelab
