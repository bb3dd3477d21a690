#include "spinelab/fixtures.hpp"

#include <cstdlib>
#include <fstream>

namespace spinelab {

#ifndef SPINELAB_FIXTURE_DIR
#define SPINELAB_FIXTURE_DIR "fixtures"
#endif

std::string default_fixture_dir() {
    if (const char* env = std::getenv("SPINELAB_FIXTURES"); env && *env) return env;
    return SPINELAB_FIXTURE_DIR;
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FixtureError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw FixtureError("malformed JSON in " + path + ": " + e.what());
    }
}

const AlgebraPtr& FixtureSet::algebra(const std::string& name) const {
    auto it = algebras.find(name);
    if (it == algebras.end()) throw FixtureError("fixture algebra '" + name + "' is missing");
    return it->second;
}

const AlgebraMorphism& FixtureSet::morphism(const std::string& name) const {
    auto it = morphisms.find(name);
    if (it == morphisms.end()) throw FixtureError("fixture morphism '" + name + "' is missing");
    return it->second;
}

AssemblyInputs FixtureSet::assembly_inputs() const {
    return AssemblyInputs{algebra("sigma3"), algebra("K33"), algebra("Theta2vTheta2"), morphism("alpha"),
                          morphism("beta")};
}

namespace {

std::vector<std::pair<std::string, std::string>> string_pairs(const nlohmann::json& obj) {
    std::vector<std::pair<std::string, std::string>> out;
    for (auto it = obj.begin(); it != obj.end(); ++it) out.emplace_back(it.key(), it.value().get<std::string>());
    return out;
}

std::vector<CellTableRow> cell_rows(const nlohmann::json& j) {
    std::vector<CellTableRow> rows;
    for (const auto& r : j.at("rows"))
        rows.push_back({r.at("vertices").get<std::vector<std::string>>(), r.at("isotropy_order").get<std::uint64_t>()});
    return rows;
}

}  // namespace

FixtureSet load_fixtures(const std::string& dir) {
    FixtureSet fx;
    fx.dir = dir;
    auto file = [&](const std::string& name) { return read_json_file(dir + "/" + name); };
    try {
        const auto t1 = file("table1.json");
        for (const auto& r : t1.at("rows")) {
            TableOneEntry e;
            e.name = r.at("name").get<std::string>();
            e.vertices = r.at("vertices").get<int>();
            e.edges = r.at("edges").get<int>();
            e.loops = r.at("loops").get<int>();
            e.degrees = r.at("degrees").get<std::vector<int>>();
            e.aut_order = r.at("aut_order").get<std::uint64_t>();
            fx.table1.push_back(e);
        }
        const auto t2 = file("table2.json");
        for (const auto& r : t2.at("rows"))
            fx.table2.push_back({r.at("top").get<std::string>(), r.at("bottom").get<std::string>(),
                                 r.at("isotropy_order").get<std::uint64_t>()});
        fx.table3 = cell_rows(file("table3.json"));
        fx.table4 = cell_rows(file("table4.json"));
        const auto comps = file("components.json");
        for (const auto& c : comps.at("components"))
            fx.components.push_back(
                {c.at("which").get<std::string>(), c.at("base").get<std::string>(), c.at("vertex_count").get<int>()});

        const auto algs = file("algebras.json").at("algebras");
        for (auto it = algs.begin(); it != algs.end(); ++it) fx.algebras[it.key()] = algebra_from_json(it.value(), it.key());
        const auto mors = file("morphisms.json").at("morphisms");
        for (auto it = mors.begin(); it != mors.end(); ++it) {
            const auto& m = it.value();
            std::map<std::string, std::string> images;
            for (const auto& [k, v] : string_pairs(m.at("images"))) images[k] = v;
            fx.morphisms.emplace(it.key(),
                                 AlgebraMorphism::from_expressions(fx.algebra(m.at("source").get<std::string>()),
                                                                   fx.algebra(m.at("target").get<std::string>()), images));
        }

        const auto eq = file("equalizer.json");
        fx.equalizer.product = eq.at("product").get<std::vector<std::string>>();
        fx.equalizer.maps = eq.at("maps").get<std::vector<std::string>>();
        fx.equalizer.elements = string_pairs(eq.at("elements"));
        fx.equalizer.subring = eq.at("subring").get<std::vector<std::string>>();
        fx.equalizer.module = eq.at("module").get<std::vector<std::string>>();
        for (const auto& r : eq.at("relations"))
            fx.equalizer.relations.push_back(
                {r.at("clause").get<int>(), r.at("lhs").get<std::string>(), r.at("rhs").get<std::string>()});

        const auto wr = file("wreath.json");
        fx.wreath.ambient = wr.at("ambient").get<std::string>();
        fx.wreath.presentation = wr.at("presentation").get<std::string>();
        for (const auto& s : wr.at("swap")) fx.wreath.swap.emplace_back(s.at(0).get<std::string>(), s.at(1).get<std::string>());
        fx.wreath.invariants = string_pairs(wr.at("invariants"));

        const auto rule = file("coefficient_rule.json");
        fx.algebra(rule.at("sylow_p").get<std::string>());
        for (const auto& [k, v] : string_pairs(rule.at("sylow_p2"))) fx.algebra(v);
        fx.morphism(rule.at("critical_edge").at("top_map").get<std::string>());
        fx.morphism(rule.at("critical_edge").at("bottom_map").get<std::string>());

        const auto se = file("series.json");
        fx.series = {se.at("equalizer").get<std::string>(), se.at("sigma3").get<std::string>(),
                     se.at("identity_rhs").get<std::string>()};
    } catch (const nlohmann::json::exception& e) {
        throw FixtureError("malformed fixture in " + dir + ": " + e.what());
    } catch (const AlgebraError& e) {
        throw FixtureError("invalid algebra fixture in " + dir + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw FixtureError("invalid fixture expression in " + dir + ": " + e.what());
    }
    return fx;
}

PipelineInput load_pipeline_input(const std::string& path, int bound) {
    const auto j = read_json_file(path);
    PipelineInput in;
    try {
        in.p = j.at("p").get<std::uint64_t>();
        in.description = j.value("description", "");
        in.algebra = algebra_from_json(j.at("algebra"), "aut input");
        if (in.algebra->prime() != in.p) throw FixtureError(path + ": algebra prime differs from p");
        const AlgebraPtr M = cohomology_of_metacyclic(in.p, static_cast<int>(in.p - 1), bound).presentation;
        std::map<std::string, std::string> images;
        for (const auto& [k, v] : string_pairs(j.at("restriction"))) images[k] = v;
        in.restriction = AlgebraMorphism::from_expressions(in.algebra, M, images);
    } catch (const nlohmann::json::exception& e) {
        throw FixtureError("malformed pipeline input " + path + ": " + e.what());
    } catch (const AlgebraError& e) {
        throw FixtureError("invalid pipeline input " + path + ": " + e.what());
    }
    return in;
}

}  // namespace spinelab
