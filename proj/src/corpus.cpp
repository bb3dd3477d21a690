#include "spinelab/corpus.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

namespace spinelab {

std::vector<const CorpusCell*> Corpus::cells_of_dim(int dim) const {
    std::vector<const CorpusCell*> out;
    for (const auto& c : cells)
        if (c.dim == dim) out.push_back(&c);
    return out;
}

Corpus make_corpus(const QuotientComplex& qc, const std::vector<std::string>& names) {
    if (names.size() != qc.graphs.size()) throw std::invalid_argument("make_corpus: one name per census graph expected");
    Corpus c;
    c.p = qc.p;
    c.rank = qc.rank;
    for (std::size_t i = 0; i < qc.graphs.size(); ++i) {
        const auto& g = qc.graphs[i];
        c.graphs.push_back({names[i], g.graph, g.group.order(), sylow_p_order(g.group, static_cast<std::uint64_t>(qc.p))});
    }
    for (int d = 1; d <= qc.max_dim(); ++d) {
        for (const auto& cell : qc.cells[d]) {
            CorpusCell out;
            out.dim = d;
            out.top_name = names[cell.top];
            for (const auto& f : cell.chain.forests) out.forests.push_back(f.edges);
            out.isotropy_order = cell.isotropy.order();
            out.faces = cell.faces;
            for (auto it = cell.vertices.rbegin(); it != cell.vertices.rend(); ++it) out.vertices.push_back(names[*it]);
            c.cells.push_back(std::move(out));
        }
    }
    return c;
}

nlohmann::ordered_json to_json(const Corpus& c) {
    nlohmann::ordered_json j;
    j["p"] = c.p;
    j["rank"] = c.rank;
    j["graphs"] = nlohmann::ordered_json::array();
    for (const auto& g : c.graphs) {
        nlohmann::ordered_json e;
        e["name"] = g.name;
        e["graph"] = to_json(g.graph);
        e["aut_order"] = g.aut_order;
        e["sylow_p_order"] = g.sylow_p_order;
        j["graphs"].push_back(std::move(e));
    }
    j["cells"] = nlohmann::ordered_json::array();
    for (const auto& cell : c.cells) {
        nlohmann::ordered_json e;
        e["dim"] = cell.dim;
        e["top_name"] = cell.top_name;
        e["forests"] = cell.forests;
        e["isotropy_order"] = cell.isotropy_order;
        e["faces"] = cell.faces;
        e["vertices"] = cell.vertices;
        j["cells"].push_back(std::move(e));
    }
    return j;
}

Corpus corpus_from_json(const nlohmann::json& j) {
    Corpus c;
    try {
        c.p = j.at("p").get<int>();
        c.rank = j.at("rank").get<int>();
        for (const auto& e : j.at("graphs"))
            c.graphs.push_back({e.at("name").get<std::string>(), graph_from_json(e.at("graph")),
                                e.at("aut_order").get<std::uint64_t>(), e.at("sylow_p_order").get<std::uint64_t>()});
        for (const auto& e : j.at("cells")) {
            CorpusCell cell;
            cell.dim = e.at("dim").get<int>();
            cell.top_name = e.at("top_name").get<std::string>();
            cell.forests = e.at("forests").get<std::vector<std::vector<int>>>();
            cell.isotropy_order = e.at("isotropy_order").get<std::uint64_t>();
            cell.faces = e.at("faces").get<std::vector<int>>();
            cell.vertices = e.at("vertices").get<std::vector<std::string>>();
            c.cells.push_back(std::move(cell));
        }
    } catch (const nlohmann::json::exception& e) {
        throw FixtureError(std::string("malformed corpus: ") + e.what());
    } catch (const GraphError& e) {
        throw FixtureError(std::string("corpus graph rejected: ") + e.what());
    }
    return c;
}

std::string dump_corpus(const Corpus& c) { return to_json(c).dump(2) + "\n"; }

Corpus load_corpus(const std::string& path) { return corpus_from_json(read_json_file(path)); }

namespace {

using CellRow = std::pair<std::vector<std::string>, std::uint64_t>;

std::string join(const std::vector<std::string>& v, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

// Multiset comparison; reports the first row found in only one side.
TableCheck compare_rows(const std::string& table, std::vector<CellRow> computed, std::vector<CellRow> expected) {
    TableCheck t{table, false, ""};
    std::sort(computed.begin(), computed.end());
    std::sort(expected.begin(), expected.end());
    if (computed == expected) {
        t.ok = true;
        t.detail = std::to_string(computed.size()) + " rows match";
        return t;
    }
    std::vector<CellRow> only_c, only_e;
    std::set_difference(computed.begin(), computed.end(), expected.begin(), expected.end(), std::back_inserter(only_c));
    std::set_difference(expected.begin(), expected.end(), computed.begin(), computed.end(), std::back_inserter(only_e));
    std::ostringstream os;
    os << computed.size() << " computed rows vs " << expected.size() << " expected";
    if (!only_c.empty()) os << "; unexpected " << join(only_c.front().first, " > ") << " (" << only_c.front().second << ")";
    if (!only_e.empty()) os << "; missing " << join(only_e.front().first, " > ") << " (" << only_e.front().second << ")";
    t.detail = os.str();
    return t;
}

}  // namespace

std::vector<TableCheck> check_tables(const Corpus& c, const FixtureSet& fx) {
    std::vector<TableCheck> out;

    TableCheck t1{"table1", true, ""};
    std::map<std::string, const CorpusGraph*> by_name;
    for (const auto& g : c.graphs)
        if (!by_name.emplace(g.name, &g).second) {
            t1.ok = false;
            t1.detail = "duplicate name " + g.name;
        }
    if (t1.ok && c.graphs.size() != fx.table1.size()) {
        t1.ok = false;
        t1.detail = std::to_string(c.graphs.size()) + " graphs vs " + std::to_string(fx.table1.size()) + " rows";
    }
    for (const auto& row : fx.table1) {
        if (!t1.ok) break;
        auto it = by_name.find(row.name);
        if (it == by_name.end()) {
            t1.ok = false;
            t1.detail = "no graph named " + row.name;
            break;
        }
        const auto& g = it->second->graph;
        const bool match = g.vertex_count() == row.vertices && g.edge_count() == row.edges &&
                           g.loop_count() == row.loops && g.degree_sequence() == row.degrees &&
                           automorphism_group_order(g) == row.aut_order && it->second->aut_order == row.aut_order;
        if (!match) {
            t1.ok = false;
            t1.detail = "signature mismatch for " + row.name;
        }
    }
    if (t1.ok) t1.detail = std::to_string(fx.table1.size()) + " rows match";
    out.push_back(t1);

    std::vector<CellRow> computed, expected;
    std::map<std::pair<std::string, std::string>, int> pairs;
    for (const auto* cell : c.cells_of_dim(1)) {
        computed.push_back({cell->vertices, cell->isotropy_order});
        ++pairs[{cell->vertices[0], cell->vertices[1]}];
    }
    for (const auto& r : fx.table2) expected.push_back({{r.top, r.bottom}, r.isotropy_order});
    TableCheck t2 = compare_rows("table2", computed, expected);
    int repeated = 0;
    std::string repeated_pair;
    for (const auto& [k, n] : pairs)
        if (n > 1) {
            repeated += n == 2 ? 1 : 2;
            repeated_pair = k.first + " / " + k.second;
        }
    if (repeated != 1) {
        t2.ok = false;
        t2.detail += "; expected exactly one endpoint pair shared by two 1-cells, found " + std::to_string(repeated);
    } else {
        t2.detail += "; repeated endpoints " + repeated_pair;
    }
    out.push_back(t2);

    const std::vector<CellTableRow>* tables[] = {&fx.table3, &fx.table4};
    for (int d = 2; d <= 3; ++d) {
        computed.clear();
        expected.clear();
        for (const auto* cell : c.cells_of_dim(d)) computed.push_back({cell->vertices, cell->isotropy_order});
        for (const auto& r : *tables[d - 2]) expected.push_back({r.vertices, r.isotropy_order});
        out.push_back(compare_rows("table" + std::to_string(d + 1), computed, expected));
    }
    const auto higher = std::count_if(c.cells.begin(), c.cells.end(), [](const CorpusCell& x) { return x.dim > 3; });
    if (higher > 0) {
        out.back().ok = false;
        out.back().detail += "; " + std::to_string(higher) + " cells above dimension 3";
    }
    return out;
}

}  // namespace spinelab
