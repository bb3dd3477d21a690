#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "spinelab/fixtures.hpp"
#include "spinelab/graph.hpp"
#include "spinelab/spine.hpp"

namespace spinelab {

struct CorpusGraph {
    std::string name;
    HalfEdgeGraph graph;
    std::uint64_t aut_order = 0;
    std::uint64_t sylow_p_order = 0;
};

struct CorpusCell {
    int dim = 0;
    std::string top_name;
    std::vector<std::vector<int>> forests;
    std::uint64_t isotropy_order = 0;
    std::vector<int> faces;             // indices into the cells of dimension dim - 1
    std::vector<std::string> vertices;  // top first
};

// Persisted census and cell structure of a quotient complex.
struct Corpus {
    int p = 3;
    int rank = 4;
    std::vector<CorpusGraph> graphs;
    std::vector<CorpusCell> cells;  // by dimension, then index; 0-cells omitted

    std::vector<const CorpusCell*> cells_of_dim(int dim) const;
};

Corpus make_corpus(const QuotientComplex& qc, const std::vector<std::string>& names);
nlohmann::ordered_json to_json(const Corpus& c);
Corpus corpus_from_json(const nlohmann::json& j);
// Two-space indented JSON with a trailing newline.
std::string dump_corpus(const Corpus& c);
Corpus load_corpus(const std::string& path);

struct TableCheck {
    std::string table;
    bool ok = false;
    std::string detail;
};

// Tables 1-4 against the corpus; graph signatures are recomputed from the
// stored graphs.
std::vector<TableCheck> check_tables(const Corpus& c, const FixtureSet& fx);

}  // namespace spinelab
