#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "spinelab/spine.hpp"
#include "spinelab/symmetry.hpp"

using namespace spinelab;

namespace {

const std::vector<SingularGraph>& census() {
    static const auto c = singular_graphs(3, 4);
    return c;
}

}  // namespace

TEST_SUITE("symmetry") {
    TEST_CASE("canonical form survives random relabelings") {
        std::mt19937 rng(2024);
        for (const auto& s : census())
            for (int i = 0; i < 100; ++i) CHECK(canonical_form(oracle::shuffled(s.graph, rng)) == s.form);
    }

    TEST_CASE("canonical form separates graphs the oracle separates") {
        for (int r = 2; r <= 3; ++r) {
            const auto gs = enumerate_admissible_graphs(r);
            for (std::size_t i = 0; i < gs.size(); ++i)
                for (std::size_t j = 0; j < gs.size(); ++j)
                    CHECK((canonical_form(gs[i]) == canonical_form(gs[j])) == oracle::isomorphic(gs[i], gs[j]));
        }
        const auto& c = census();
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = i + 1; j < c.size(); ++j) CHECK_FALSE(oracle::isomorphic(c[i].graph, c[j].graph));
    }

    TEST_CASE("theta graphs with two loops and the two triangle graphs are told apart") {
        const auto t11 = HalfEdgeGraph::from_edges(2, {{0, 1}, {0, 1}, {0, 1}, {0, 0}, {1, 1}});
        const auto t02 = HalfEdgeGraph::from_edges(2, {{0, 1}, {0, 1}, {0, 1}, {1, 1}, {1, 1}});
        CHECK(t11.degree_sequence() == std::vector<int>{5, 5});
        CHECK(t02.degree_sequence() == std::vector<int>{7, 3});
        CHECK(canonical_form(t11) != canonical_form(t02));
        // Doubled triangle, and a triangle with a loop at each corner.
        const auto T1 = HalfEdgeGraph::from_edges(3, {{0, 1}, {0, 1}, {1, 2}, {1, 2}, {0, 2}, {0, 2}});
        const auto T0 = HalfEdgeGraph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}, {0, 0}, {1, 1}, {2, 2}});
        CHECK(automorphism_group_order(T1) == 48);
        CHECK(automorphism_group_order(T0) == 48);
        CHECK(canonical_form(T0) != canonical_form(T1));
    }

    TEST_CASE("automorphism group order matches the permutation count") {
        for (const auto& s : census()) {
            const auto expect = oracle::automorphism_count(oracle::multiplicities(s.graph));
            CHECK(s.group.order() == expect);
            CHECK(automorphism_group_order(s.graph) == expect);
        }
        for (const auto& g : enumerate_admissible_graphs(3))
            CHECK(automorphism_group_order(g) == oracle::automorphism_count(oracle::multiplicities(g)));
    }

    TEST_CASE("automorphism groups are groups") {
        for (const auto& s : census()) {
            const auto& grp = s.group;
            CHECK(grp.contains(GraphAutomorphism::identity(grp.graph())));
            for (const auto& a : grp.elements()) {
                CHECK(is_automorphism(grp.graph(), a));
                CHECK(grp.contains(a.inverse()));
            }
            if (grp.order() <= 72)
                for (const auto& a : grp.elements())
                    for (const auto& b : grp.elements()) CHECK(grp.contains(compose(a, b)));
        }
    }

    TEST_CASE("automorphisms commute with sigma and respect targets") {
        for (const auto& s : census()) {
            const auto& g = s.graph;
            for (const auto& a : s.group.elements())
                for (int h = 0; h < g.half_edge_count(); ++h) {
                    CHECK(a.hperm[g.sigma(h)] == g.sigma(a.hperm[h]));
                    CHECK(g.target(a.hperm[h]) == a.vperm[g.target(h)]);
                }
        }
    }

    TEST_CASE("element cap is an explicit failure") {
        CHECK_THROWS_AS(automorphism_group(graphs::rose(4), 100), ResourceError);
    }

    TEST_CASE("elements of order p and Sylow orders") {
        const auto k33 = automorphism_group(graphs::complete_bipartite(3, 3));
        CHECK(k33.order() == 72);
        CHECK(sylow_p_order(k33, 3) == 9);
        const auto threes = elements_of_order(k33, 3);
        CHECK(threes.size() == 8);
        for (const auto& a : threes) CHECK(a.order() == 3);
        CHECK(sylow_p_order(automorphism_group(graphs::theta(3)), 3) == 3);
        CHECK(elements_of_order(automorphism_group(graphs::theta(3)), 5).empty());
        CHECK(sylow_p_order(384, 3) == 3);
        CHECK(sylow_p_order(240, 5) == 5);
    }

    TEST_CASE("orbit-stabilizer on forest orbits") {
        for (const auto& s : census()) {
            const auto& grp = s.group;
            const auto fs = enumerate_forests(s.graph);
            const auto orbs = orbits(grp, fs, [&](const GraphAutomorphism& a, const Forest& f) { return apply(s.graph, a, f); });
            std::size_t total = 0;
            for (const auto& o : orbs) {
                total += o.size();
                std::uint64_t stab = 0;
                for (const auto& a : grp.elements())
                    if (apply(s.graph, a, o.front()) == o.front()) ++stab;
                CHECK(stab * o.size() == grp.order());
                CHECK(forest_stabilizer(grp, o.front()).order() == stab);
            }
            CHECK(total == fs.size());
        }
    }

    TEST_CASE("isomorphisms transport automorphisms") {
        std::mt19937 rng(11);
        for (const auto& s : census()) {
            const auto h = oracle::shuffled(s.graph, rng);
            const auto iso = find_isomorphism(s.graph, h);
            REQUIRE(iso.has_value());
            for (const auto& a : s.group.generators()) CHECK(is_automorphism(h, transport(*iso, a)));
        }
        CHECK_FALSE(find_isomorphism(graphs::theta(5), graphs::rose(4)).has_value());
    }
}
