#include "spinelab/verify.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "spinelab/assembly.hpp"
#include "spinelab/corpus.hpp"
#include "spinelab/equivariant.hpp"
#include "spinelab/expr.hpp"
#include "spinelab/fixtures.hpp"
#include "spinelab/report.hpp"

namespace spinelab {

void RunConfig::validate() const {
    if (p <= 2 || !is_prime(static_cast<std::uint64_t>(p))) throw ConfigError("p must be an odd prime, got " + std::to_string(p));
    if (rank < 2) throw ConfigError("rank must be at least 2, got " + std::to_string(rank));
    if (max_degree < 10) throw ConfigError("max degree must be at least 10, got " + std::to_string(max_degree));
}

int max_degree_from_env(int fallback) {
    const char* env = std::getenv("SPINELAB_MAX_DEGREE");
    if (!env || !*env) return fallback;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 0 || v > 100000) throw ConfigError(std::string("SPINELAB_MAX_DEGREE is not a degree: ") + env);
    return static_cast<int>(v);
}

const char* status_label(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "PASS";
        case CheckStatus::Fail: return "FAIL";
        case CheckStatus::Skip: return "SKIP";
    }
    return "?";
}

std::string VerifyReport::markdown() const {
    std::ostringstream os;
    os << "# Verification run\n\n";
    os << "p = " << config.p << ", rank = " << config.rank << ", max degree = " << config.max_degree << "\n\n";
    os << "| stage | check | status | detail |\n|---|---|---|---|\n";
    for (const auto& c : checks)
        os << "| " << c.stage << " | " << c.name << " | " << status_label(c.status) << " | " << c.detail << " |\n";
    const auto failed = std::count_if(checks.begin(), checks.end(), [](const auto& c) { return c.status == CheckStatus::Fail; });
    os << "\n" << checks.size() << " checks, " << failed << " failed; exit status " << exit_status << "\n";
    return os.str();
}

nlohmann::ordered_json VerifyReport::json() const {
    nlohmann::ordered_json j;
    j["config"] = {{"p", config.p}, {"rank", config.rank}, {"max_degree", config.max_degree}};
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks)
        j["checks"].push_back({{"stage", c.stage}, {"name", c.name}, {"status", status_label(c.status)}, {"detail", c.detail}});
    j["exit_status"] = exit_status;
    return j;
}

namespace {

class Run {
public:
    explicit Run(VerifyReport& r) : rep_(r) {}

    void add(const std::string& stage, const std::string& name, bool ok, const std::string& detail) {
        rep_.checks.push_back({stage, name, ok ? CheckStatus::Pass : CheckStatus::Fail, detail});
    }
    void skip(const std::string& stage, const std::string& name, const std::string& why) {
        rep_.checks.push_back({stage, name, CheckStatus::Skip, why});
    }
    // Runs a check body; exceptions other than configuration errors count as a failure of that check.
    void guarded(const std::string& stage, const std::string& name, const std::function<void()>& body) {
        try {
            body();
        } catch (const FixtureError&) {
            throw;
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            add(stage, name, false, std::string("error: ") + e.what());
        }
    }

private:
    VerifyReport& rep_;
};

std::string dims_mismatch(const GradedDims& a, const GradedDims& b, int bound) {
    for (int d = 0; d <= bound; ++d)
        if (a[d] != b[d])
            return "degree " + std::to_string(d) + ": " + std::to_string(a[d]) + " vs " + std::to_string(b[d]);
    return "";
}

PowerSeriesRat metacyclic_series(int p) {
    return PowerSeriesRat(IntPoly{1} + IntPoly::monomial(1, 2 * p - 3), IntPoly{1} - IntPoly::monomial(1, 2 * p - 2));
}

void spine_and_assembly_stages(Run& run, const RunConfig& cfg, const FixtureSet& fx) {
    const int bound = cfg.max_degree;
    QuotientComplex qc = quotient_complex(cfg.p, cfg.rank, cfg.limits);

    std::vector<std::string> names;
    run.guarded("census", "singular graphs", [&] {
        std::vector<std::uint64_t> orders, expected;
        for (const auto& g : qc.graphs) orders.push_back(g.group.order());
        for (const auto& r : fx.table1) expected.push_back(r.aut_order);
        std::sort(orders.begin(), orders.end());
        std::sort(expected.begin(), expected.end());
        const bool ok = qc.graphs.size() == fx.table1.size() && orders == expected;
        run.add("census", "singular graphs", ok,
                std::to_string(qc.graphs.size()) + " classes; automorphism orders " + (orders == expected ? "match" : "differ"));
    });
    run.guarded("census", "names", [&] {
        names = match_names(qc, fx.table1, fx.table2);
        run.add("census", "names", true, "every class named uniquely");
    });
    if (names.empty()) {
        run.skip("tables", "tables", "census names unavailable");
    } else {
        const Corpus corpus = make_corpus(qc, names);
        for (const auto& t : check_tables(corpus, fx)) run.add("tables", t.table, t.ok, t.detail);
        const int viol = simplicial_identity_violations(qc);
        run.add("tables", "simplicial identities", viol == 0, std::to_string(viol) + " violations");
    }

    const AssemblyInputs in = fx.assembly_inputs();
    run.guarded("components", "components", [&] {
        const ComponentIds ids = locate_components(qc);
        std::map<std::string, int> comp{{"rose", ids.rose}, {"theta11", ids.theta11}, {"k33", ids.k33}};
        bool ok = qc.component_count == static_cast<int>(fx.components.size());
        std::ostringstream os;
        os << qc.component_count << " components; vertex counts";
        for (const auto& row : fx.components) {
            const int id = comp.count(row.which) ? comp[row.which] : -1;
            const int n = id < 0 ? 0 : static_cast<int>(std::count(qc.component_of_vertex.begin(), qc.component_of_vertex.end(), id));
            ok = ok && n == row.vertex_count;
            os << " " << row.which << "=" << n;
        }
        run.add("components", "components", ok, os.str());
        const auto betti = reduced_homology(qc, ids.rose, 3);
        const bool zero = std::all_of(betti.begin(), betti.end(), [](int b) { return b == 0; });
        run.add("components", "rose reduced homology", zero, zero ? "trivial over F3" : "nonzero reduced Betti number");
    });

    std::optional<EqualizerResult> eq;
    run.guarded("series", "equalizer series", [&] {
        eq = fibre_product(fx.morphism(fx.equalizer.maps.at(0)), fx.morphism(fx.equalizer.maps.at(1)), bound);
        const GradedDims chi = parse_series(fx.series.equalizer).expand(bound);
        const std::string m = dims_mismatch(eq->dims, chi, bound);
        run.add("series", "equalizer series", m.empty(), m.empty() ? "agrees through degree " + std::to_string(bound) : m);
        const PowerSeriesRat lhs = parse_series(fx.series.equalizer) + parse_series(fx.series.sigma3);
        const PowerSeriesRat rhs = parse_series(fx.series.identity_rhs);
        const bool ep = series_equal(lhs, rhs, bound);
        run.add("series", "Euler-Poincare identity", ep, ep ? "coefficient-wise through degree " + std::to_string(bound) : "differs");
        const std::string s = dims_mismatch(parse_series(fx.series.sigma3).expand(bound), in.sigma3->dimensions(bound), bound);
        run.add("series", "sigma3 series", s.empty(), s.empty() ? "matches the algebra" : s);
    });

    run.guarded("relations", "free module", [&] {
        if (!eq) throw std::runtime_error("equalizer unavailable");
        const AlgebraPtr P = eq->source;
        std::map<std::string, Element> named;
        NameLookup lookup = [&](const std::string& n) -> std::optional<Element> {
            if (auto it = named.find(n); it != named.end()) return it->second;
            if (P->find_generator(n)) return Element::generator(P, n);
            return std::nullopt;
        };
        for (const auto& [n, e] : fx.equalizer.elements) named.emplace(n, parse_element(e, P, lookup));
        const auto f = AlgebraMorphism::on_product(P, in.sigma3, {fx.morphism(fx.equalizer.maps[0]), std::nullopt});
        const auto g = AlgebraMorphism::on_product(P, in.sigma3, {std::nullopt, fx.morphism(fx.equalizer.maps[1])});
        std::string outside;
        for (const auto& [n, e] : named)
            if (!(f.apply(e) == g.apply(e))) outside += " " + n;
        run.add("relations", "generators in equalizer", outside.empty(), outside.empty() ? "all listed elements" : "outside:" + outside);
        std::vector<Element> sub, mod;
        for (const auto& n : fx.equalizer.subring) sub.push_back(named.at(n));
        for (const auto& n : fx.equalizer.module) mod.push_back(named.at(n));
        const FreeModuleReport fr = verify_free_module(eq->basis, sub, mod, bound);
        run.add("relations", "free module", fr.ok, fr.detail);
        std::vector<std::pair<std::string, std::string>> rels;
        for (const auto& r : fx.equalizer.relations) rels.emplace_back(r.lhs, r.rhs);
        const auto ok = check_relations(rels, P, lookup);
        std::string bad;
        for (std::size_t i = 0; i < ok.size(); ++i)
            if (!ok[i]) bad += " " + rels[i].first + "=" + rels[i].second;
        std::set<int> clauses;
        for (const auto& r : fx.equalizer.relations) clauses.insert(r.clause);
        run.add("relations", "relations", bad.empty(),
                bad.empty() ? std::to_string(ok.size()) + " equations over " + std::to_string(clauses.size()) + " clauses hold"
                            : "fail:" + bad);
    });

    run.guarded("assembly", "assembled cohomology", [&] {
        const AssemblyReport r = corollary12(qc, in, bound);
        run.add("assembly", "face maps", r.derived_maps_match_inputs,
                r.derived_maps_match_inputs ? "derived restrictions equal alpha and beta" : "derived restrictions differ");
        run.add("assembly", "d1 d1 = 0", r.e1_squares_zero, "full E1 page");
        run.add("assembly", "K33 retraction", r.retraction.acyclic && r.retraction.outside_cells_sigma_type,
                std::string("relative complex ") + (r.retraction.acyclic ? "acyclic" : "not acyclic"));
        const bool k = r.k33.dims == r.k33_via_e1;
        run.add("assembly", "K33 amalgam vs E1", k, k ? "agree" : dims_mismatch(r.k33.dims, r.k33_via_e1, bound));
        run.add("assembly", "assembled cohomology", r.matches_from_degree_6,
                r.matches_from_degree_6 ? "degrees 6.." + std::to_string(bound) + " match"
                                        : dims_mismatch(r.total.truncated(bound), r.expected.truncated(bound), bound));
    });

    run.guarded("wreath", "wreath invariants", [&] {
        const AlgebraPtr W = fx.algebra(fx.wreath.ambient);
        const AlgebraPtr C = fx.algebra(fx.wreath.presentation);
        MonomialSubstitution s;
        const auto& gens = W->generators();
        for (std::size_t i = 0; i < gens.size(); ++i) s.images.emplace_back(1, static_cast<int>(i));
        for (const auto& [a, b] : fx.wreath.swap) {
            const auto ia = W->find_generator(a), ib = W->find_generator(b);
            if (!ia || !ib) throw FixtureError("wreath swap names an unknown generator");
            s.images[ia->second].second = ib->second;
            s.images[ib->second].second = ia->second;
        }
        const GroupAction action{{s}};
        const GradedDims inv = invariants(W, action, bound);
        const std::string m = dims_mismatch(inv, C->dimensions(bound), bound);
        run.add("wreath", "wreath invariants", m.empty(), m.empty() ? "dims agree through degree " + std::to_string(bound) : m);
        std::vector<Element> els;
        std::string bad;
        for (const auto& [n, e] : fx.wreath.invariants) {
            els.push_back(parse_element(e, W));
            if (!is_invariant(W, action, els.back())) bad += " " + n;
        }
        run.add("wreath", "invariant elements", bad.empty(), bad.empty() ? "all four invariant" : "not invariant:" + bad);
        std::string dep;
        for (int d = 0; d <= bound && dep.empty(); ++d) {
            std::vector<std::vector<Fp>> vs;
            for (const auto& x : subring_span(W, els, d)) vs.push_back(x.coordinates(d));
            const int r = span_rank(vs, static_cast<int>(W->basis(d).size()), 3);
            if (r != C->dimensions(d)[d]) dep = "degree " + std::to_string(d) + ": rank " + std::to_string(r);
        }
        run.add("wreath", "algebraic independence", dep.empty(), dep.empty() ? "through degree " + std::to_string(bound) : dep);
    });
}

void metacyclic_stage(Run& run, const RunConfig& cfg) {
    run.guarded("metacyclic", "metacyclic cohomology", [&] {
        const auto mc = cohomology_of_metacyclic(cfg.p, cfg.p - 1, cfg.max_degree);
        std::vector<int> degs;
        for (const auto& g : mc.presentation->generators()) degs.push_back(g.degree);
        const bool deg_ok = degs == std::vector<int>{2 * cfg.p - 3, 2 * cfg.p - 2};
        const std::string m = dims_mismatch(mc.invariant_dims, metacyclic_series(cfg.p).expand(cfg.max_degree), cfg.max_degree);
        std::ostringstream os;
        os << "generator degrees";
        for (int d : degs) os << " " << d;
        if (!m.empty()) os << "; " << m;
        run.add("metacyclic", "metacyclic cohomology", deg_ok && m.empty(), os.str());
    });
}

void pipeline_stage(Run& run, const RunConfig& cfg, const std::string& dir) {
    const std::string synth = dir + "/aut_synthetic_p" + std::to_string(cfg.p) + ".json";
    if (!std::filesystem::exists(synth)) {
        run.skip("pipeline", "amalgam identity", "no synthetic input for p = " + std::to_string(cfg.p));
        return;
    }
    run.guarded("pipeline", "amalgam identity", [&] {
        const PipelineInput in = load_pipeline_input(synth, cfg.max_degree);
        const PipelineReport r = theorem14_pipeline(in.p, in.algebra, in.restriction, cfg.max_degree);
        run.add("pipeline", "amalgam identity", r.identity_holds,
                std::string(r.identity_holds ? "holds" : "fails") + " through degree " + std::to_string(cfg.max_degree) +
                    (r.p3_excluded_route ? " (p = 3: mechanics only)" : ""));
    });
    const std::string bad = dir + "/aut_nonsurjective_p" + std::to_string(cfg.p) + ".json";
    if (std::filesystem::exists(bad)) {
        run.guarded("pipeline", "non-surjective input rejected", [&] {
            const PipelineInput in = load_pipeline_input(bad, cfg.max_degree);
            try {
                theorem14_pipeline(in.p, in.algebra, in.restriction, cfg.max_degree);
                run.add("pipeline", "non-surjective input rejected", false, "accepted");
            } catch (const AssemblyError& e) {
                run.add("pipeline", "non-surjective input rejected", true, e.what());
            }
        });
    }
}

void equivariant_stages(Run& run, const RunConfig& cfg) {
    const int p = cfg.p;
    std::vector<ReducedClass> classes;
    run.guarded("classification", "reduced classes", [&] {
        classes = classify_reduced(p);
        std::vector<std::string> names;
        for (const auto& c : classes) names.push_back(c.name);
        std::ostringstream os;
        os << classes.size() << " classes:";
        for (const auto& n : names) os << " " << n;
        bool ok = std::all_of(classes.begin(), classes.end(), [](const auto& c) { return is_reduced(c.graph); });
        if (p == 5) {
            const std::set<std::string> want{"R8", "Theta4^{0,4}", "Theta4^{1,3}", "Theta4^{2,2}", "Theta4vTheta4(diag)"};
            ok = ok && std::set<std::string>(names.begin(), names.end()) == want && names.size() == 5;
        } else if (p == 7) {
            ok = ok && classes.size() == 6;
        }
        run.add("classification", "reduced classes", ok, os.str());
        if (p >= 5) {
            const bool fixed = std::all_of(classes.begin(), classes.end(), [](const auto& c) { return has_fixed_vertex(c.graph); });
            run.add("classification", "no vertex-free class", fixed, fixed ? "every class fixes a vertex" : "vertex-free class found");
        }
    });

    run.guarded("nielsen", "closures", [&] {
        if (classes.empty()) throw std::runtime_error("no reduced classes");
        std::vector<std::set<std::string>> closures;
        bool ok = true;
        for (const auto& c : classes) {
            std::set<std::string> s;
            for (const auto& r : nielsen_closure(c.graph, cfg.max_closure_classes)) s.insert(r.name);
            ok = ok && s.count(c.name);
            closures.push_back(std::move(s));
        }
        for (std::size_t i = 0; i < closures.size(); ++i)
            for (std::size_t j = 0; j < closures.size(); ++j) {
                std::vector<std::string> common;
                std::set_intersection(closures[i].begin(), closures[i].end(), closures[j].begin(), closures[j].end(),
                                      std::back_inserter(common));
                if (!common.empty() && closures[i] != closures[j]) ok = false;
            }
        const std::set<std::set<std::string>> distinct(closures.begin(), closures.end());
        const bool singletons = std::all_of(closures.begin(), closures.end(), [](const auto& s) { return s.size() == 1; });
        if (p == 5) ok = ok && singletons;
        run.add("nielsen", "closures", ok,
                std::to_string(distinct.size()) + " closure classes over " + std::to_string(classes.size()) + " reduced classes" +
                    (singletons ? ", all singletons" : ""));
        if (p == 5) {
            const auto moves = nielsen_moves(zp::wedge_product_action(5));
            run.add("nielsen", "no moves on the product action", moves.empty(), std::to_string(moves.size()) + " moves");
        }
    });

    if (p != 3 && p != 5) {
        run.skip("expansions", "minimal expansion", "checked for p = 3 and p = 5");
        return;
    }
    run.guarded("expansions", "minimal expansion", [&] {
        const int budget = 3 * (2 * p - 2) - 3;
        const ZpGraph k = zp::complete_bipartite_p3(p);
        const auto ex = equivariant_expansions(zp::wedge_diagonal(p), budget);
        bool ok = ex.size() == 1 && equivariantly_isomorphic(ex[0].graph, k) &&
                  static_cast<int>(ex[0].forest.size()) == p && edge_orbits(ex[0].graph).size() > 0;
        if (ok) {
            bool single_orbit = false;
            for (const auto& o : edge_orbits(ex[0].graph))
                if (o == ex[0].forest.edges) single_orbit = true;
            ok = single_orbit;
        }
        run.add("expansions", "minimal expansion", ok,
                std::to_string(ex.size()) + " class(es)" + (ok ? "; K_{p,3} with a star-orbit forest" : ""));
        const auto kx = equivariant_expansions(k, budget);
        run.add("expansions", "K_{p,3} rigid", kx.empty(), std::to_string(kx.size()) + " expansions within " + std::to_string(budget) + " edges");
    });
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out || !(out << text)) throw ConfigError("cannot write " + path);
}

}  // namespace

VerifyReport verify_all(const RunConfig& config) {
    config.validate();
    VerifyReport rep;
    rep.config = config;
    const std::string dir = config.fixture_dir.empty() ? default_fixture_dir() : config.fixture_dir;
    const FixtureSet fx = load_fixtures(dir);
    Run run(rep);

    if (config.p == 3 && config.rank == 4) {
        spine_and_assembly_stages(run, config, fx);
    } else {
        for (const char* stage : {"census", "tables", "components", "series", "relations", "assembly", "wreath"})
            run.skip(stage, stage, "reference data is for p = 3, rank 4");
    }
    metacyclic_stage(run, config);
    pipeline_stage(run, config, dir);
    equivariant_stages(run, config);

    rep.exit_status = std::any_of(rep.checks.begin(), rep.checks.end(), [](const auto& c) { return c.status == CheckStatus::Fail; })
                          ? kExitMismatch
                          : kExitPass;
    if (!config.markdown_out.empty()) write_text(config.markdown_out, rep.markdown());
    if (!config.json_out.empty()) write_text(config.json_out, rep.json().dump(2) + "\n");
    return rep;
}

}  // namespace spinelab
