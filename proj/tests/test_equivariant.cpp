#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "spinelab/equivariant.hpp"

using namespace spinelab;

namespace {

// Same Z/p graph under a random relabeling, with the action conjugated.
EquivariantGraph shuffled(const EquivariantGraph& zg, std::mt19937& rng) {
    std::vector<int> vp(zg.graph.vertex_count()), hp(zg.graph.half_edge_count());
    std::iota(vp.begin(), vp.end(), 0);
    std::iota(hp.begin(), hp.end(), 0);
    std::shuffle(vp.begin(), vp.end(), rng);
    std::shuffle(hp.begin(), hp.end(), rng);
    EquivariantGraph out;
    out.graph = relabel(zg.graph, vp, hp);
    out.p = zg.p;
    for (const auto& a : zg.generators) out.generators.push_back(transport(Isomorphism{vp, hp}, a));
    return out;
}

// Edge subsets that are acyclic and mapped to themselves by every generator.
std::set<std::vector<int>> invariant_forests_by_subsets(const EquivariantGraph& zg) {
    std::set<std::vector<int>> out;
    for (const auto& edges : oracle::forests_by_subsets(zg.graph)) {
        if (edges.empty()) continue;
        bool inv = true;
        for (const auto& a : zg.generators) inv = inv && apply(zg.graph, a, Forest(edges)) == Forest(edges);
        if (inv) out.insert(edges);
    }
    return out;
}

std::vector<ZpGraph> samples() {
    return {zp::rose(3, 4), zp::theta(3, 0, 2), zp::theta(3, 1, 1), zp::wedge_diagonal(3), zp::wedge_one_factor(3),
            zp::complete_bipartite_p3(3), zp::theta(5, 2, 2), zp::wedge_diagonal(5)};
}

}  // namespace

TEST_SUITE("equivariant") {
    TEST_CASE("Z/p graph construction is validated") {
        const auto k = zp::complete_bipartite_p3(3);
        CHECK(k.action().order() == 3);
        CHECK_THROWS_AS(make_zp_graph(k.graph, k.action(), 5), EquivariantError);
        CHECK_THROWS_AS(make_zp_graph(k.graph, GraphAutomorphism::identity(k.graph), 3), EquivariantError);
        auto bad = k.action();
        std::swap(bad.vperm[0], bad.vperm[3]);
        CHECK_THROWS_AS(make_zp_graph(k.graph, bad, 3), EquivariantError);
        CHECK_THROWS_AS(zp::rose(5, 4), EquivariantError);
        CHECK(rank(k.graph) == 4);
        CHECK(k.graph.edge_count() == 9);
    }

    TEST_CASE("invariant forests agree with the subset filter") {
        for (const auto& z : samples()) {
            std::set<std::vector<int>> got;
            for (const auto& f : invariant_forests(z)) got.insert(f.edges);
            CHECK(got == invariant_forests_by_subsets(z));
            CHECK(is_reduced(z) == got.empty());
        }
    }

    TEST_CASE("collapsing an invariant forest keeps the action and the rank") {
        for (const auto& z : samples())
            for (const auto& f : invariant_forests(z)) {
                const auto c = collapse(z, f);
                CHECK(rank(c.graph) == rank(z.graph));
                for (const auto& a : c.generators) CHECK(is_automorphism(c.graph, a));
                CHECK(oracle::isomorphic(c.graph, collapse(z.graph, f)));
            }
        // The star orbit of K_{3,3} collapses to the diagonal wedge.
        const auto k = zp::complete_bipartite_p3(3);
        bool found = false;
        for (const auto& f : invariant_forests(k))
            if (f.size() == 3 && equivariantly_isomorphic(collapse(k, f), zp::wedge_diagonal(3))) found = true;
        CHECK(found);
        CHECK_THROWS_AS(collapse(k, Forest({0})), EquivariantError);
    }

    TEST_CASE("equivariant form survives relabeling and separates actions") {
        std::mt19937 rng(5);
        for (const auto& z : samples())
            for (int i = 0; i < 20; ++i) CHECK(equivariant_form(shuffled(z, rng)) == equivariant_form(z));
        CHECK_FALSE(equivariantly_isomorphic(zp::theta(3, 0, 2), zp::theta(3, 1, 1)));
        CHECK_FALSE(equivariantly_isomorphic(zp::wedge_diagonal(3), zp::wedge_one_factor(3)));
        // Same graph, inverse action: conjugate by swapping the bundle order.
        const auto k = zp::complete_bipartite_p3(3);
        CHECK(equivariantly_isomorphic(k, make_zp_graph(k.graph, k.action().inverse(), 3)));
    }

    TEST_CASE("JSON round trip") {
        for (const auto& z : samples()) {
            const auto back = equivariant_from_json(nlohmann::json::parse(to_json(z).dump()));
            CHECK(back.graph == z.graph);
            CHECK(back.p == z.p);
            REQUIRE(back.generators.size() == z.generators.size());
            CHECK(back.action().hperm == z.action().hperm);
        }
    }

    TEST_CASE("reduced classes at p = 3 match the filtered enumeration") {
        const auto classes = classify_reduced(3);
        CHECK(classes.size() == 6);
        std::size_t reduced = 0;
        for (const auto& z : enumerate_zp_graphs(3, 4, 9))
            if (is_reduced(z)) {
                ++reduced;
                bool matched = false;
                for (const auto& c : classes) matched = matched || equivariantly_isomorphic(c.graph, z);
                CHECK(matched);
            }
        CHECK(reduced == classes.size());
    }

    TEST_CASE("reduced classes at p = 5 and p = 7") {
        const auto five = classify_reduced(5);
        std::set<std::string> names;
        for (const auto& c : five) {
            names.insert(c.name);
            CHECK(is_reduced(c.graph));
            CHECK(rank(c.graph.graph) == 8);
            CHECK(is_admissible(c.graph.graph));
            CHECK(has_fixed_vertex(c.graph));
        }
        CHECK(five.size() == 5);
        CHECK(names == std::set<std::string>{"R8", "Theta4^{0,4}", "Theta4^{1,3}", "Theta4^{2,2}", "Theta4vTheta4(diag)"});
        const auto seven = classify_reduced(7);
        CHECK(seven.size() == 6);
        for (const auto& c : seven) {
            CHECK(has_fixed_vertex(c.graph));
            CHECK(rank(c.graph.graph) == 12);
        }
        for (std::size_t i = 0; i < five.size(); ++i)
            for (std::size_t j = i + 1; j < five.size(); ++j) CHECK_FALSE(equivariantly_isomorphic(five[i].graph, five[j].graph));
    }

    TEST_CASE("Nielsen moves keep rank and equivariance") {
        for (const auto& c : classify_reduced(3))
            for (const auto& mv : nielsen_moves(c.graph)) {
                CHECK(rank(mv.result.graph) == rank(c.graph.graph));
                CHECK(mv.result.graph.edge_count() == c.graph.graph.edge_count());
                for (const auto& a : mv.result.generators) CHECK(is_automorphism(mv.result.graph, a));
                for (const auto& r : reductions(mv.result)) CHECK(is_reduced(r));
            }
    }

    TEST_CASE("Nielsen closures at p = 5 are singletons") {
        for (const auto& c : classify_reduced(5)) {
            const auto cl = nielsen_closure(c.graph);
            REQUIRE(cl.size() == 1);
            CHECK(cl[0].name == c.name);
        }
        CHECK(nielsen_moves(zp::wedge_product_action(5)).empty());
        CHECK_THROWS_AS(nielsen_closure(zp::complete_bipartite_p3(3)), EquivariantError);
    }

    TEST_CASE("Nielsen closures at p = 3 are a partition") {
        const auto classes = classify_reduced(3);
        std::vector<std::set<std::string>> closures;
        for (const auto& c : classes) {
            std::set<std::string> s;
            for (const auto& r : nielsen_closure(c.graph)) s.insert(r.name);
            CHECK(s.count(c.name) == 1);
            closures.push_back(s);
        }
        for (const auto& a : closures)
            for (const auto& b : closures) {
                std::vector<std::string> common;
                std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
                CHECK((common.empty() || a == b));
            }
    }

    TEST_CASE("minimal expansion of the diagonal wedge is K_{p,3}") {
        for (int p : {3, 5}) {
            const int budget = 3 * (2 * p - 2) - 3;
            const auto ex = equivariant_expansions(zp::wedge_diagonal(p), budget);
            REQUIRE(ex.size() == 1);
            CHECK(equivariantly_isomorphic(ex[0].graph, zp::complete_bipartite_p3(p)));
            CHECK(static_cast<int>(ex[0].forest.size()) == p);
            CHECK(is_invariant(ex[0].graph, ex[0].forest));
            CHECK(equivariantly_isomorphic(collapse(ex[0].graph, ex[0].forest), zp::wedge_diagonal(p)));
            CHECK(equivariant_expansions(zp::complete_bipartite_p3(p), budget).empty());
        }
    }

    TEST_CASE("closure class cap is an explicit failure") {
        const auto classes = classify_reduced(3);
        bool capped = false;
        for (const auto& c : classes) {
            try {
                nielsen_closure(c.graph, 1);
            } catch (const ResourceError&) {
                capped = true;
            }
        }
        CHECK(capped);
    }
}
