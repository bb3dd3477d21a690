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

HalfEdgeGraph theta2_wedge_theta2() { return HalfEdgeGraph::from_edges(3, {{0, 1}, {0, 1}, {0, 1}, {0, 2}, {0, 2}, {0, 2}}); }

}  // namespace

TEST_SUITE("graphcore") {
    TEST_CASE("rank of basic graphs") {
        CHECK(rank(graphs::rose(4)) == 4);
        CHECK(rank(graphs::theta(5)) == 4);
        CHECK(rank(graphs::complete_bipartite(3, 3)) == 4);
        const auto two = HalfEdgeGraph::from_edges(2, {{0, 0}, {1, 1}});
        CHECK(rank(two) == 2);
        CHECK(two.component_count() == 2);
    }

    TEST_CASE("admissibility") {
        CHECK(is_admissible(graphs::complete_bipartite(3, 3)));
        const auto barbell = HalfEdgeGraph::from_edges(2, {{0, 0}, {0, 0}, {1, 1}, {1, 1}, {0, 1}});
        CHECK_FALSE(is_admissible(barbell));
        CHECK(barbell.is_bridge(4));
        const auto subdivided = HalfEdgeGraph::from_edges(3, {{0, 1}, {0, 1}, {0, 2}, {2, 1}});
        CHECK_FALSE(is_admissible(subdivided));
        CHECK_FALSE(is_admissible(HalfEdgeGraph::from_edges(2, {{0, 0}, {1, 1}})));
    }

    TEST_CASE("half-edge construction is validated") {
        CHECK_THROWS_AS(HalfEdgeGraph(1, {0, 1}, {0, 0}), GraphError);
        CHECK_THROWS_AS(HalfEdgeGraph(1, {1, 0}, {0, 3}), GraphError);
        CHECK_THROWS_AS(HalfEdgeGraph(1, {1, 2, 0}, {0, 0, 0}), GraphError);
    }

    TEST_CASE("forest examples") {
        auto rose = enumerate_forests(graphs::rose(4));
        REQUIRE(rose.size() == 1);
        CHECK(rose[0].empty());
        CHECK(enumerate_forests(graphs::theta(3)).size() == 4);
    }

    TEST_CASE("forest enumeration agrees with the subset filter") {
        std::vector<HalfEdgeGraph> gs{graphs::complete_bipartite(3, 3), graphs::theta(3), theta2_wedge_theta2()};
        for (const auto& s : census()) gs.push_back(s.graph);
        for (const auto& g : gs) {
            std::vector<std::vector<int>> got;
            for (const auto& f : enumerate_forests(g)) got.push_back(f.edges);
            std::sort(got.begin(), got.end());
            CHECK(got == oracle::forests_by_subsets(g));
        }
    }

    TEST_CASE("forests are closed under subsets and listed once") {
        for (const auto& s : census()) {
            const auto fs = enumerate_forests(s.graph);
            std::set<Forest> all(fs.begin(), fs.end());
            CHECK(all.size() == fs.size());
            for (const auto& f : fs)
                for (std::size_t drop = 0; drop < f.size(); ++drop) {
                    auto e = f.edges;
                    e.erase(e.begin() + static_cast<long>(drop));
                    CHECK(all.count(Forest(e)) == 1);
                }
        }
    }

    TEST_CASE("collapse examples") {
        const auto k33 = graphs::complete_bipartite(3, 3);
        // Star at vertex 0: the three edges leaving it.
        std::vector<int> star;
        for (int e = 0; e < k33.edge_count(); ++e) {
            auto [a, b] = k33.endpoints(e);
            if (a == 0 || b == 0) star.push_back(e);
        }
        const auto c = collapse(k33, Forest(star));
        CHECK(oracle::isomorphic(c, theta2_wedge_theta2()));
        CHECK(collapse(k33, Forest{}) == k33);
        CHECK_THROWS_AS(collapse(graphs::theta(3), Forest({0, 1})), GraphError);
        CHECK_THROWS_AS(collapse(graphs::rose(2), Forest({0})), GraphError);
    }

    TEST_CASE("collapse preserves rank and drops one vertex and edge per forest edge") {
        for (const auto& s : census())
            for (const auto& f : enumerate_forests(s.graph)) {
                const auto c = collapse(s.graph, f);
                CHECK(rank(c) == rank(s.graph));
                CHECK(c.vertex_count() == s.graph.vertex_count() - static_cast<int>(f.size()));
                CHECK(c.edge_count() == s.graph.edge_count() - static_cast<int>(f.size()));
            }
    }

    TEST_CASE("nested collapse equals collapse of the union") {
        for (const auto& s : census()) {
            const auto fs = enumerate_forests(s.graph);
            for (const auto& big : fs)
                for (const auto& small : fs) {
                    if (small.empty() || small == big || !small.is_subset_of(big)) continue;
                    const Collapse first = collapse_with_map(s.graph, small);
                    const auto twice = collapse(first.graph, first.image(s.graph, big));
                    CHECK(oracle::isomorphic(twice, collapse(s.graph, big)));
                }
        }
    }

    TEST_CASE("collapse output is deterministic") {
        const auto k33 = graphs::complete_bipartite(3, 3);
        CHECK(collapse(k33, Forest({0, 4})) == collapse(k33, Forest({0, 4})));
    }

    TEST_CASE("admissibility is invariant under relabeling") {
        std::mt19937 rng(7);
        std::vector<HalfEdgeGraph> gs{HalfEdgeGraph::from_edges(2, {{0, 0}, {0, 0}, {1, 1}, {1, 1}, {0, 1}}),
                                      HalfEdgeGraph::from_edges(3, {{0, 1}, {0, 1}, {0, 2}, {2, 1}})};
        for (const auto& s : census()) gs.push_back(s.graph);
        for (const auto& g : gs)
            for (int i = 0; i < 20; ++i) CHECK(is_admissible(oracle::shuffled(g, rng)) == is_admissible(g));
    }

    TEST_CASE("graph JSON round trip") {
        for (const auto& s : census()) {
            const auto j = to_json(s.graph);
            CHECK(graph_from_json(nlohmann::json::parse(j.dump())) == s.graph);
            CHECK(j["half_edges"] == s.graph.half_edge_count());
        }
        CHECK_THROWS_AS(graph_from_json(nlohmann::json::parse(R"({"vertices":1,"half_edges":2,"sigma":[0,1],"target":[0,0]})")),
                        GraphError);
    }
}
