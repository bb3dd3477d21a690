#include <doctest.h>

#include <map>

#include "oracles.hpp"
#include "spinelab/equivariant.hpp"
#include "spinelab/fixtures.hpp"
#include "spinelab/spine.hpp"

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

const std::vector<std::string>& names() {
    static const auto n = match_names(qc(), fixtures().table1, fixtures().table2);
    return n;
}

int index_of(const std::string& name) {
    const auto& n = names();
    auto it = std::find(n.begin(), n.end(), name);
    REQUIRE(it != n.end());
    return static_cast<int>(it - n.begin());
}

// Order-3 subgroups up to conjugacy in Aut(g).
int subgroup_classes_of_order_3(const AutGroup& grp) {
    std::set<std::set<GraphAutomorphism>> seen;
    int classes = 0;
    for (const auto& g : grp.elements()) {
        if (g.order() != 3) continue;
        std::set<GraphAutomorphism> sub{g, compose(g, g)};
        if (seen.count(sub)) continue;
        ++classes;
        for (const auto& h : grp.elements()) {
            const auto c = compose(compose(h, g), h.inverse());
            seen.insert({c, compose(c, c)});
        }
    }
    return classes;
}

}  // namespace

TEST_SUITE("spine") {
    TEST_CASE("admissible census agrees with the matrix enumeration") {
        for (int r = 2; r <= 4; ++r) {
            const auto got = enumerate_admissible_graphs(r);
            const auto want = oracle::admissible_of_rank(r);
            CHECK(got.size() == want.size());
            std::set<oracle::Matrix> seen;
            for (const auto& g : got) {
                CHECK(is_admissible(g));
                CHECK(rank(g) == r);
                seen.insert(oracle::canonical(oracle::multiplicities(g)));
            }
            CHECK(seen == want);
        }
        CHECK(enumerate_admissible(2).size() == 2);
    }

    TEST_CASE("singular graphs are the admissible graphs with |Aut| divisible by p") {
        int singular = 0;
        for (const auto& m : oracle::admissible_of_rank(4))
            if (oracle::automorphism_count(m) % 3 == 0) ++singular;
        CHECK(singular == 17);
        CHECK(qc().graphs.size() == 17);
        CHECK(singular_graphs(5, 2).empty());
        for (const auto& s : qc().graphs) CHECK(s.graph.edge_count() != 8);
    }

    TEST_CASE("Z/3 graphs match order-3 subgroup classes of the census") {
        int expected = 0;
        for (const auto& s : qc().graphs) expected += subgroup_classes_of_order_3(s.group);
        CHECK(static_cast<int>(enumerate_zp_graphs(3, 4, 9).size()) == expected);
    }

    TEST_CASE("cell counts and dimension bound") {
        REQUIRE(qc().max_dim() >= 3);
        CHECK(qc().cells[1].size() == 24);
        CHECK(qc().cells[2].size() == 13);
        CHECK(qc().cells[3].size() == 3);
        CHECK(qc().max_dim() <= 2 * 4 - 3);
        for (const auto& c : qc().cells[3]) CHECK(c.isotropy.order() == 6);
    }

    TEST_CASE("isotropy is the chain stabilizer inside Aut(top)") {
        for (int d = 1; d <= qc().max_dim(); ++d)
            for (const auto& c : qc().cells[d]) {
                const auto& top = qc().graphs[c.top];
                std::uint64_t stab = 0;
                for (const auto& a : top.group.elements()) {
                    bool fixes = true;
                    for (const auto& f : c.chain.forests) fixes = fixes && apply(top.graph, a, f) == f;
                    if (fixes) ++stab;
                }
                CHECK(stab == c.isotropy.order());
                bool has_p = false;
                for (const auto& a : c.isotropy.elements()) {
                    CHECK(top.group.contains(a));
                    has_p = has_p || a.order() == 3;
                }
                CHECK(has_p);
                for (std::size_t i = 0; i + 1 < c.chain.forests.size(); ++i) {
                    CHECK(c.chain.forests[i + 1].is_subset_of(c.chain.forests[i]));
                    CHECK(c.chain.forests[i + 1] != c.chain.forests[i]);
                }
            }
    }

    TEST_CASE("1-cell endpoints are collapses of the top") {
        for (const auto& c : qc().cells[1]) {
            const auto bottom = collapse(qc().graphs[c.top].graph, c.chain.forests[0]);
            CHECK(oracle::isomorphic(bottom, qc().graphs[c.vertices[0]].graph));
            CHECK(c.vertices[1] == c.top);
        }
    }

    TEST_CASE("simplicial identities hold") { CHECK(simplicial_identity_violations(qc()) == 0); }

    TEST_CASE("three components with contractible rose part") {
        CHECK(qc().component_count == 3);
        std::map<int, int> sizes;
        for (int c : qc().component_of_vertex) ++sizes[c];
        std::multiset<int> counts;
        for (auto [c, n] : sizes) counts.insert(n);
        CHECK(counts == std::multiset<int>{1, 7, 9});
        const int rose = qc().component_of_vertex[index_of("R4")];
        for (int b : reduced_homology(qc(), rose, 3)) CHECK(b == 0);
        // Vertices of the rose component.
        for (const char* n : {"Theta2**Theta1", "Theta3*R1", "Theta2<>Y", "Theta3^{0,1}", "Theta4", "R4", "W3vR1"})
            CHECK(qc().component_of_vertex[index_of(n)] == rose);
    }

    TEST_CASE("the K33 component has one pair of parallel 1-cells") {
        const int k = qc().component_of_vertex[index_of("K33")];
        std::map<std::set<int>, int> pairs;
        for (const auto& c : qc().cells[1])
            if (qc().component_of_vertex[c.top] == k) ++pairs[{c.vertices[0], c.vertices[1]}];
        int repeated = 0;
        for (const auto& [vs, n] : pairs)
            if (n > 1) {
                ++repeated;
                CHECK(n == 2);
                CHECK(vs == std::set<int>{index_of("Theta2:Theta1"), index_of("Theta2^{0,2}")});
            }
        CHECK(repeated == 1);
    }

    TEST_CASE("names by signature") {
        const auto& g = qc().graphs;
        const auto& r4 = g[index_of("R4")];
        CHECK(r4.graph.vertex_count() == 1);
        CHECK(r4.graph.loop_count() == 4);
        CHECK(r4.group.order() == 384);
        const auto& t1 = g[index_of("T1")];
        CHECK(t1.graph.vertex_count() == 3);
        CHECK(t1.graph.loop_count() == 0);
        CHECK(t1.group.order() == 48);
        const auto& p1 = g[index_of("P1")];
        CHECK(p1.graph.vertex_count() == 6);
        CHECK(p1.graph.edge_count() == 9);
        CHECK(p1.group.order() == 12);
        std::set<std::string> unique(names().begin(), names().end());
        CHECK(unique.size() == 17);
    }

    TEST_CASE("K33 collapses to T1 and S0 collapses to T1 along single edges") {
        const auto& g = qc().graphs;
        bool k33_t1 = false, s0_t1 = false;
        for (const auto& c : qc().cells[1]) {
            if (c.top == index_of("K33") && c.vertices[0] == index_of("T1")) k33_t1 = true;
            if (c.top == index_of("S0") && c.vertices[0] == index_of("T1")) {
                s0_t1 = true;
                CHECK(c.chain.forests[0].size() == 3);
            }
        }
        CHECK(k33_t1);
        CHECK(s0_t1);
        CHECK(oracle::isomorphic(g[index_of("T1")].graph,
                                 HalfEdgeGraph::from_edges(3, {{0, 1}, {0, 1}, {1, 2}, {1, 2}, {0, 2}, {0, 2}})));
    }

    TEST_CASE("ambiguous names are an error, not a guess") {
        // A duplicate row with duplicated collapse relations cannot be told apart.
        auto table = fixtures().table1;
        auto relations = fixtures().table2;
        const std::string orig = table.front().name;
        table.push_back(table.front());
        table.back().name = orig + "copy";
        for (const auto& r : fixtures().table2) {
            auto c = r;
            if (c.top == orig) c.top = orig + "copy";
            if (c.bottom == orig) c.bottom = orig + "copy";
            if (c.top != r.top || c.bottom != r.bottom) relations.push_back(c);
        }
        CHECK_THROWS_AS(match_names(qc(), table, relations), NameError);
        // The duplicate alone is resolved by its relations.
        table = fixtures().table1;
        table.push_back(table.front());
        table.back().name = orig + "copy";
        CHECK(match_names(qc(), table, fixtures().table2) == names());
        auto missing = fixtures().table1;
        missing.pop_back();
        CHECK_THROWS_AS(match_names(qc(), missing, fixtures().table2), NameError);
    }
}
