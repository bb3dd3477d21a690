#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "spinelab/corpus.hpp"
#include "spinelab/fixtures.hpp"
#include "spinelab/report.hpp"
#include "spinelab/verify.hpp"

using namespace spinelab;

namespace {

const QuotientComplex& qc() {
    static const auto q = quotient_complex(3, 4);
    return q;
}

const FixtureSet& fixtures() {
    static const auto fx = load_fixtures(default_fixture_dir());
    return fx;
}

const Corpus& corpus() {
    static const auto c = make_corpus(qc(), match_names(qc(), fixtures().table1, fixtures().table2));
    return c;
}

int count_lines_starting(const std::string& text, const std::string& prefix) {
    std::istringstream in(text);
    int n = 0;
    for (std::string line; std::getline(in, line);) n += line.rfind(prefix, 0) == 0;
    return n;
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("spinelab_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("corpus JSON round trip is byte-identical") {
        const std::string first = dump_corpus(corpus());
        const Corpus back = corpus_from_json(nlohmann::json::parse(first));
        CHECK(dump_corpus(back) == first);
        const auto path = scratch("corpus.json");
        std::ofstream(path) << first;
        CHECK(dump_corpus(load_corpus(path.string())) == first);
        CHECK(first.back() == '\n');
    }

    TEST_CASE("corpus contents") {
        const auto& c = corpus();
        CHECK(c.graphs.size() == 17);
        CHECK(c.cells_of_dim(1).size() == 24);
        CHECK(c.cells_of_dim(2).size() == 13);
        CHECK(c.cells_of_dim(3).size() == 3);
        for (const auto* cell : c.cells_of_dim(1)) {
            CHECK(cell->vertices.size() == 2);
            CHECK(cell->vertices.front() == cell->top_name);
        }
        CHECK_THROWS_AS(corpus_from_json(nlohmann::json::parse(R"({"p":3})")), FixtureError);
        CHECK_THROWS_AS(load_corpus(scratch("missing.json").string()), FixtureError);
    }

    TEST_CASE("table checks pass on the computed corpus and fail on a tampered one") {
        for (const auto& t : check_tables(corpus(), fixtures())) {
            INFO(t.table << ": " << t.detail);
            CHECK(t.ok);
        }
        Corpus bad = corpus();
        bad.graphs[0].aut_order += 1;
        bad.cells.front().isotropy_order += 3;
        int failing = 0;
        for (const auto& t : check_tables(bad, fixtures())) failing += !t.ok;
        CHECK(failing >= 2);
    }

    TEST_CASE("reports are deterministic and complete") {
        const std::string census = census_markdown(corpus());
        CHECK(census == census_markdown(corpus_from_json(to_json(corpus()))));
        CHECK(count_lines_starting(census, "| ") == 17 + 1);
        CHECK(census.find("17 graphs.") != std::string::npos);
        const std::string ones = cells_markdown(corpus(), 1);
        CHECK(count_lines_starting(ones, "| ") == 24 + 1);
        CHECK(ones.find("isotropy order") != std::string::npos);
        CHECK(corpus_markdown(corpus()) == corpus_markdown(corpus()));
    }

    TEST_CASE("assembled report lists degrees 6 to 40 and the closed form") {
        const auto r = corollary12(qc(), fixtures().assembly_inputs(), 40);
        const std::string md = assembly_markdown(r);
        CHECK(md.find(kClosedFormModule) != std::string::npos);
        CHECK(count_lines_starting(md, "| ") == 35 + 1);
        CHECK(count_lines_starting(md, "| 6 |") == 1);
        CHECK(count_lines_starting(md, "| 40 |") == 1);
        CHECK(count_lines_starting(md, "| 5 |") == 0);
        CHECK(md.find("| no |") == std::string::npos);
        const auto j = to_json(r);
        CHECK(j["total"].size() == 35);
        CHECK(j["matches"] == true);
        CHECK(md == assembly_markdown(corollary12(qc(), fixtures().assembly_inputs(), 40)));
    }

    TEST_CASE("run configuration is validated") {
        RunConfig c;
        CHECK_NOTHROW(c.validate());
        c.p = 4;
        CHECK_THROWS_AS(c.validate(), ConfigError);
        c.p = 2;
        CHECK_THROWS_AS(c.validate(), ConfigError);
        c = RunConfig{};
        c.max_degree = 9;
        CHECK_THROWS_AS(c.validate(), ConfigError);
        c = RunConfig{};
        c.rank = 1;
        CHECK_THROWS_AS(c.validate(), ConfigError);
    }

    TEST_CASE("degree bound from the environment") {
        ::setenv("SPINELAB_MAX_DEGREE", "24", 1);
        CHECK(max_degree_from_env(40) == 24);
        ::setenv("SPINELAB_MAX_DEGREE", "many", 1);
        CHECK_THROWS_AS(max_degree_from_env(40), ConfigError);
        ::unsetenv("SPINELAB_MAX_DEGREE");
        CHECK(max_degree_from_env(40) == 40);
    }

    TEST_CASE("missing fixtures are a configuration error") {
        CHECK_THROWS_AS(load_fixtures(scratch("nowhere").string()), FixtureError);
        RunConfig c;
        c.fixture_dir = scratch("nowhere").string();
        CHECK_THROWS_AS(verify_all(c), FixtureError);
        const auto dir = scratch("broken");
        std::filesystem::create_directories(dir);
        for (const auto& e : std::filesystem::directory_iterator(default_fixture_dir()))
            std::filesystem::copy_file(e.path(), dir / e.path().filename(), std::filesystem::copy_options::overwrite_existing);
        std::ofstream(dir / "table1.json") << "{ not json";
        CHECK_THROWS_AS(load_fixtures(dir.string()), FixtureError);
    }

    TEST_CASE("verify all passes at p = 3 and writes both reports") {
        RunConfig c;
        c.markdown_out = scratch("verify.md").string();
        c.json_out = scratch("verify.json").string();
        const VerifyReport r = verify_all(c);
        for (const auto& ch : r.checks) {
            INFO(ch.stage << "/" << ch.name << ": " << ch.detail);
            CHECK(ch.status == CheckStatus::Pass);
        }
        CHECK(r.exit_status == kExitPass);
        CHECK(std::filesystem::exists(c.markdown_out));
        std::ifstream in(c.json_out);
        const auto j = nlohmann::json::parse(in);
        CHECK(j["checks"].size() == r.checks.size());
        std::set<std::string> stages;
        for (const auto& ch : r.checks) stages.insert(ch.stage);
        for (const char* s : {"census", "tables", "components", "series", "relations", "assembly", "wreath", "metacyclic",
                              "pipeline", "classification", "nielsen", "expansions"})
            CHECK(stages.count(s) == 1);
    }
}
