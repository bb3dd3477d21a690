#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "spinelab/assembly.hpp"
#include "spinelab/corpus.hpp"
#include "spinelab/equivariant.hpp"
#include "spinelab/field.hpp"
#include "spinelab/fixtures.hpp"
#include "spinelab/report.hpp"
#include "spinelab/verify.hpp"

using namespace spinelab;

namespace {

struct Options {
    int p = 3;
    int rank = 4;
    std::optional<int> max_degree;
    std::string fixtures;
    std::string out;
    std::string format = "markdown";
};

int bound_of(const Options& o) {
    const int d = o.max_degree ? *o.max_degree : max_degree_from_env(40);
    if (d < 10) throw ConfigError("max degree must be at least 10, got " + std::to_string(d));
    return d;
}

std::string fixture_dir(const Options& o) { return o.fixtures.empty() ? default_fixture_dir() : o.fixtures; }

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f || !(f << text)) throw ConfigError("cannot write " + path);
}

// Markdown to stdout or JSON, and JSON to --out when given.
void emit(const Options& o, const std::string& md, const nlohmann::ordered_json& j) {
    if (o.format == "json")
        std::cout << j.dump(2) << "\n";
    else
        std::cout << md;
    if (!o.out.empty()) write_file(o.out, j.dump(2) + "\n");
}

std::vector<std::string> census_names(const QuotientComplex& qc, const FixtureSet* fx) {
    if (fx && qc.p == 3 && qc.rank == 4) return match_names(qc, fx->table1, fx->table2);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < qc.graphs.size(); ++i) names.push_back("G" + std::to_string(i));
    return names;
}

Corpus build_corpus(const Options& o) {
    const QuotientComplex qc = quotient_complex(o.p, o.rank);
    std::optional<FixtureSet> fx;
    if (o.p == 3 && o.rank == 4) fx = load_fixtures(fixture_dir(o));
    return make_corpus(qc, census_names(qc, fx ? &*fx : nullptr));
}

ZpGraph read_zp(const std::string& path) {
    try {
        return equivariant_from_json(read_json_file(path));
    } catch (const EquivariantError& e) {
        throw FixtureError(path + ": " + e.what());
    } catch (const GraphError& e) {
        throw FixtureError(path + ": " + e.what());
    }
}

std::string forest_string(const Forest& f) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < f.edges.size(); ++i) os << (i ? "," : "") << f.edges[i];
    os << "}";
    return os.str();
}

int cmd_census(const Options& o, bool markdown) {
    const Corpus c = build_corpus(o);
    if (!o.out.empty()) write_file(o.out, dump_corpus(c));
    if (markdown)
        std::cout << census_markdown(c);
    else if (o.out.empty())
        std::cout << dump_corpus(c);
    else
        std::cout << c.graphs.size() << " singular graphs, " << c.cells.size() << " positive-dimensional cells written to "
                  << o.out << "\n";
    return kExitPass;
}

int cmd_cells(const Options& o, int dim, const std::string& corpus_path) {
    const Corpus c = corpus_path.empty() ? build_corpus(o) : load_corpus(corpus_path);
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    const auto full = to_json(c);
    for (const auto& cell : full["cells"])
        if (cell["dim"] == dim) j.push_back(cell);
    emit(o, cells_markdown(c, dim), j);
    return kExitPass;
}

int cmd_verify_tables(const Options& o, const std::string& corpus_path) {
    const Corpus c = load_corpus(corpus_path);
    const FixtureSet fx = load_fixtures(fixture_dir(o));
    bool ok = true;
    for (const auto& t : check_tables(c, fx)) {
        std::cout << (t.ok ? "PASS " : "FAIL ") << t.table << ": " << t.detail << "\n";
        ok = ok && t.ok;
    }
    return ok ? kExitPass : kExitMismatch;
}

int cmd_report(const Options& o, const std::string& corpus_path) {
    const Corpus c = corpus_path.empty() ? build_corpus(o) : load_corpus(corpus_path);
    const std::string md = corpus_markdown(c);
    std::cout << md;
    if (!o.out.empty()) write_file(o.out, md);
    return kExitPass;
}

int cmd_classify(const Options& o, const std::string& out_dir) {
    if (o.p <= 2 || !is_prime(static_cast<std::uint64_t>(o.p))) throw ConfigError("p must be an odd prime, got " + std::to_string(o.p));
    const auto classes = classify_reduced(o.p);
    std::ostringstream md;
    md << "## Reduced Z/" << o.p << "-graphs of rank " << 2 * (o.p - 1) << "\n\n| # | class | description | fixed vertex |\n|---|---|---|---|\n";
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < classes.size(); ++i) {
        const auto& c = classes[i];
        md << "| " << i << " | " << c.name << " | " << describe_reduced(c.graph) << " | "
           << (has_fixed_vertex(c.graph) ? "yes" : "no") << " |\n";
        j.push_back({{"name", c.name}, {"description", describe_reduced(c.graph)}, {"zp_graph", to_json(c.graph)}});
        if (!out_dir.empty()) {
            std::filesystem::create_directories(out_dir);
            write_file(out_dir + "/class" + std::to_string(i) + ".json", to_json(c.graph).dump(2) + "\n");
        }
    }
    md << "\n" << classes.size() << " classes.\n";
    emit(o, md.str(), j);
    return kExitPass;
}

int cmd_nielsen(const Options& o, const std::string& input) {
    const ZpGraph zg = read_zp(input);
    const auto moves = nielsen_moves(zg);
    const auto closure = nielsen_closure(zg);
    std::ostringstream md;
    md << "## Nielsen moves\n\n" << moves.size() << " moves.\n\n| e1 | e2 | result reduced |\n|---|---|---|\n";
    nlohmann::ordered_json j;
    j["moves"] = nlohmann::ordered_json::array();
    for (const auto& m : moves) {
        md << "| " << m.e1 << " | " << m.e2 << " | " << (is_reduced(m.result) ? "yes" : "no") << " |\n";
        j["moves"].push_back({{"e1", m.e1}, {"e2", m.e2}, {"result", to_json(m.result)}});
    }
    md << "\n## Closure\n\n" << closure.size() << " reduced classes:";
    j["closure"] = nlohmann::ordered_json::array();
    for (const auto& c : closure) {
        md << " " << c.name;
        j["closure"].push_back(c.name);
    }
    md << "\n";
    emit(o, md.str(), j);
    return kExitPass;
}

int cmd_expand(const Options& o, const std::string& input, int budget) {
    const ZpGraph zg = read_zp(input);
    if (budget <= 0) budget = 3 * rank(zg.graph) - 3;
    const auto ex = equivariant_expansions(zg, budget);
    std::ostringstream md;
    md << "## Minimal admissible equivariant expansions (edge budget " << budget << ")\n\n" << ex.size()
       << " classes.\n\n| # | vertices | edges | forest |\n|---|---|---|---|\n";
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < ex.size(); ++i) {
        const auto& e = ex[i];
        md << "| " << i << " | " << e.graph.graph.vertex_count() << " | " << e.graph.graph.edge_count() << " | "
           << forest_string(e.forest) << " |\n";
        j.push_back({{"zp_graph", to_json(e.graph)}, {"forest", e.forest.edges}});
    }
    emit(o, md.str(), j);
    return kExitPass;
}

int cmd_component(const Options& o, const std::string& which) {
    const int bound = bound_of(o);
    const FixtureSet fx = load_fixtures(fixture_dir(o));
    const QuotientComplex qc = quotient_complex(3, 4);
    const ComponentResult r = component_cohomology(qc, fx.assembly_inputs(), which, bound);
    emit(o, component_markdown(r), to_json(r));
    return kExitPass;
}

int cmd_corollary12(const Options& o) {
    const int bound = bound_of(o);
    const FixtureSet fx = load_fixtures(fixture_dir(o));
    const QuotientComplex qc = quotient_complex(3, 4);
    const AssemblyReport r = corollary12(qc, fx.assembly_inputs(), bound);
    emit(o, assembly_markdown(r), to_json(r));
    return r.matches_from_degree_6 ? kExitPass : kExitMismatch;
}

int cmd_thm14(const Options& o, const std::string& input) {
    const int bound = bound_of(o);
    const PipelineInput in = load_pipeline_input(input, bound);
    if (static_cast<int>(in.p) != o.p) throw ConfigError(input + " is for p = " + std::to_string(in.p));
    PipelineReport r;
    try {
        r = theorem14_pipeline(in.p, in.algebra, in.restriction, bound);
    } catch (const AssemblyError& e) {
        throw ConfigError(std::string("unusable input: ") + e.what());
    }
    emit(o, pipeline_markdown(r), to_json(r));
    return r.identity_holds ? kExitPass : kExitMismatch;
}

int cmd_series(const Options& o) {
    const int bound = bound_of(o);
    const FixtureSet fx = load_fixtures(fixture_dir(o));
    const auto eq = fibre_product(fx.morphism(fx.equalizer.maps.at(0)), fx.morphism(fx.equalizer.maps.at(1)), bound);
    const PowerSeriesRat chi = parse_series(fx.series.equalizer);
    const GradedDims expected = chi.expand(bound);
    const bool eq_ok = eq.dims == expected;
    const bool ep_ok = series_equal(chi + parse_series(fx.series.sigma3), parse_series(fx.series.identity_rhs), bound);
    std::ostringstream md;
    md << "## Equalizer series\n\nexpected: " << chi.to_string() << "\n\n| degree | equalizer | series |\n|---|---|---|\n";
    for (int d = 0; d <= bound; ++d) md << "| " << d << " | " << eq.dims[d] << " | " << expected[d] << " |\n";
    md << "\nequalizer matches series: " << (eq_ok ? "yes" : "no") << "\nEuler-Poincare identity: " << (ep_ok ? "yes" : "no")
       << "\n";
    nlohmann::ordered_json j;
    j["bound"] = bound;
    j["series"] = chi.to_string();
    j["equalizer"] = dims_json(eq.dims);
    j["equalizer_matches_series"] = eq_ok;
    j["euler_poincare_identity"] = ep_ok;
    emit(o, md.str(), j);
    return eq_ok && ep_ok ? kExitPass : kExitMismatch;
}

int cmd_verify_all(const Options& o, const std::string& md_out) {
    RunConfig cfg;
    cfg.p = o.p;
    cfg.rank = o.rank;
    cfg.max_degree = bound_of(o);
    cfg.fixture_dir = o.fixtures;
    cfg.markdown_out = md_out;
    cfg.json_out = o.out;
    const VerifyReport r = verify_all(cfg);
    if (o.format == "json")
        std::cout << r.json().dump(2) << "\n";
    else
        std::cout << r.markdown();
    return r.exit_status;
}

struct Args {
    bool markdown = false;
    int dim = 1;
    std::string corpus;
    std::string out_dir;
    std::string input;
    int budget = 0;
    std::string which;
    std::string aut;
    std::string md_out;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spinelab: singular locus of the spine, equivariant graphs and cohomology assembly"};
    app.require_subcommand(1);
    Options o;
    Args a;
    auto common = [&](CLI::App* c) {
        c->add_option("--fixtures", o.fixtures, "Fixture directory");
        c->add_option("--max-degree", o.max_degree, "Degree bound (default 40, or SPINELAB_MAX_DEGREE)");
        c->add_option("--format", o.format, "Console output")->check(CLI::IsMember({"markdown", "json"}));
    };
    common(&app);
    auto prime_opts = [&](CLI::App* c) {
        c->add_option("--p", o.p, "Prime")->capture_default_str();
        c->add_option("--rank", o.rank, "Rank")->capture_default_str();
    };
    auto out_opt = [&](CLI::App* c, const char* what) { c->add_option("--out", o.out, what); };

    std::function<int()> run;

    auto* spine = app.add_subcommand("spine", "Census and cells of the singular locus")->require_subcommand(1);
    {
        auto* c = spine->add_subcommand("census", "Singular graphs and cells as a corpus");
        prime_opts(c);
        common(c);
        out_opt(c, "Corpus JSON output");
        c->add_flag("--markdown", a.markdown, "Print the census table");
        c->callback([&] { run = [&] { return cmd_census(o, a.markdown); }; });

        auto* cells = spine->add_subcommand("cells", "Cells of one dimension");
        prime_opts(cells);
        common(cells);
        out_opt(cells, "JSON output");
        cells->add_option("--dim", a.dim, "Cell dimension")->capture_default_str();
        cells->add_option("--corpus", a.corpus, "Read cells from a corpus file");
        cells->callback([&] { run = [&] { return cmd_cells(o, a.dim, a.corpus); }; });

        auto* vt = spine->add_subcommand("verify-tables", "Compare a corpus with the reference tables");
        common(vt);
        vt->add_option("corpus", a.corpus, "Corpus JSON")->required();
        vt->callback([&] { run = [&] { return cmd_verify_tables(o, a.corpus); }; });

        auto* rp = spine->add_subcommand("report", "Markdown tables of the census and cells");
        prime_opts(rp);
        common(rp);
        out_opt(rp, "Markdown output");
        rp->add_option("--corpus", a.corpus, "Read a corpus file instead of recomputing");
        rp->add_flag("--markdown", a.markdown, "Markdown output (the only format)");
        rp->callback([&] { run = [&] { return cmd_report(o, a.corpus); }; });
    }

    auto* equiv = app.add_subcommand("equiv", "Equivariant Z/p graphs")->require_subcommand(1);
    {
        auto* c = equiv->add_subcommand("classify", "Reduced Z/p graphs of rank 2(p-1)");
        c->add_option("--p", o.p, "Prime")->capture_default_str();
        common(c);
        out_opt(c, "JSON output");
        c->add_option("--out-dir", a.out_dir, "Write each class as a Z/p graph file");
        c->callback([&] { run = [&] { return cmd_classify(o, a.out_dir); }; });

        auto* n = equiv->add_subcommand("nielsen", "Nielsen moves and closure of a Z/p graph");
        n->add_option("--input", a.input, "Z/p graph JSON")->required();
        common(n);
        out_opt(n, "JSON output");
        n->callback([&] { run = [&] { return cmd_nielsen(o, a.input); }; });

        auto* e = equiv->add_subcommand("expand", "Minimal equivariant expansions");
        e->add_option("--input", a.input, "Z/p graph JSON")->required();
        e->add_option("--budget", a.budget, "Edge budget (default 3 rank - 3)");
        common(e);
        out_opt(e, "JSON output");
        e->callback([&] { run = [&] { return cmd_expand(o, a.input, a.budget); }; });
    }

    auto* coh = app.add_subcommand("coh", "Cohomology assembly")->require_subcommand(1);
    coh->alias("cohomology");
    {
        auto* c = coh->add_subcommand("component", "Cohomology of one component");
        c->add_option("--which", a.which, "rose, theta11 or k33")->required()->check(CLI::IsMember({"rose", "theta11", "k33"}));
        common(c);
        out_opt(c, "JSON output");
        c->callback([&] { run = [&] { return cmd_component(o, a.which); }; });

        auto* k = coh->add_subcommand("corollary12", "Assembled cohomology of the singular locus");
        common(k);
        out_opt(k, "JSON output");
        k->callback([&] { run = [&] { return cmd_corollary12(o); }; });

        auto* t = coh->add_subcommand("thm14", "Normalizer amalgam pipeline on a pluggable input");
        t->add_option("--p", o.p, "Prime")->capture_default_str();
        t->add_option("--aut-input", a.aut, "Pipeline input JSON")->required();
        common(t);
        out_opt(t, "JSON output");
        t->callback([&] { run = [&] { return cmd_thm14(o, a.aut); }; });

        auto* s = coh->add_subcommand("series", "Equalizer dims against the rational series");
        common(s);
        out_opt(s, "JSON output");
        s->callback([&] { run = [&] { return cmd_series(o); }; });
    }

    auto* verify = app.add_subcommand("verify", "End-to-end checks")->require_subcommand(1);
    {
        auto* v = verify->add_subcommand("all", "Run every check");
        prime_opts(v);
        common(v);
        out_opt(v, "JSON report");
        v->add_option("--markdown-out", a.md_out, "Markdown report");
        v->callback([&] { run = [&] { return cmd_verify_all(o, a.md_out); }; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }
    try {
        return run ? run() : kExitConfig;
    } catch (const FixtureError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
    } catch (const NameError& e) {
        std::cerr << "name matching failed: " << e.what() << "\n";
        return kExitMismatch;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return kExitConfig;
}
