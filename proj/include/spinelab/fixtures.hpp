#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinelab/algebra.hpp"
#include "spinelab/assembly.hpp"
#include "spinelab/series.hpp"
#include "spinelab/spine.hpp"

namespace spinelab {

// Missing or malformed fixture input; a configuration error, not a mismatch.
class FixtureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CellTableRow {
    std::vector<std::string> vertices;  // top first
    std::uint64_t isotropy_order = 0;
};

struct ComponentRow {
    std::string which;
    std::string base;
    int vertex_count = 0;
};

struct RelationRow {
    int clause = 0;
    std::string lhs;
    std::string rhs;
};

struct EqualizerFixture {
    std::vector<std::string> product;  // algebra names of the two factors
    std::vector<std::string> maps;     // morphism names
    std::vector<std::pair<std::string, std::string>> elements;  // name -> expression
    std::vector<std::string> subring;
    std::vector<std::string> module;
    std::vector<RelationRow> relations;
};

struct WreathFixture {
    std::string ambient;
    std::string presentation;
    std::vector<std::pair<std::string, std::string>> swap;
    std::vector<std::pair<std::string, std::string>> invariants;  // presentation generator -> expression
};

struct SeriesFixture {
    std::string equalizer;
    std::string sigma3;
    std::string identity_rhs;
};

struct FixtureSet {
    std::string dir;
    std::vector<TableOneEntry> table1;
    std::vector<TableTwoEntry> table2;
    std::vector<CellTableRow> table3;
    std::vector<CellTableRow> table4;
    std::vector<ComponentRow> components;
    std::map<std::string, AlgebraPtr> algebras;
    std::map<std::string, AlgebraMorphism> morphisms;
    EqualizerFixture equalizer;
    WreathFixture wreath;
    SeriesFixture series;

    const AlgebraPtr& algebra(const std::string& name) const;
    const AlgebraMorphism& morphism(const std::string& name) const;
    AssemblyInputs assembly_inputs() const;
};

// Directory from SPINELAB_FIXTURES, else the source-tree default.
std::string default_fixture_dir();
nlohmann::json read_json_file(const std::string& path);
FixtureSet load_fixtures(const std::string& dir);

// Input for the normalizer amalgam pipeline: an algebra with a restriction onto
// cohomology_of_metacyclic(p, p-1).
struct PipelineInput {
    std::uint64_t p = 0;
    std::string description;
    AlgebraPtr algebra;
    AlgebraMorphism restriction;
};

PipelineInput load_pipeline_input(const std::string& path, int bound = 40);

}  // namespace spinelab
