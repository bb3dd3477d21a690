#include <doctest.h>

#include <random>

#include "spinelab/assembly.hpp"
#include "spinelab/fixtures.hpp"

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

const AssemblyInputs& inputs() {
    static const auto in = fixtures().assembly_inputs();
    return in;
}

// A free algebra containing M's generators plus random extras, mapped onto
// M by the identity on M and random images (or zero) on the extras.
std::pair<AlgebraPtr, AlgebraMorphism> random_surjective_input(std::uint64_t p, std::mt19937& rng) {
    const AlgebraPtr M = cohomology_of_metacyclic(p, static_cast<int>(p - 1), 40).presentation;
    std::vector<Generator> gens = M->generators();
    const int extras = 1 + rng() % 3;
    for (int i = 0; i < extras; ++i) {
        const int d = 1 + rng() % 14;
        gens.push_back({"e" + std::to_string(i) + "_" + std::to_string(d), d, d % 2 ? GenKind::Exterior : GenKind::Polynomial});
    }
    std::shuffle(gens.begin(), gens.end(), rng);
    const AlgebraPtr A = GradedAlgebra::make(p, gens, "A");
    std::map<std::string, Element> images;
    for (const auto& g : gens) {
        if (M->find_generator(g.name)) {
            images.emplace(g.name, Element::generator(M, g.name));
            continue;
        }
        std::vector<Fp> c(M->basis(g.degree).size());
        if (rng() % 2)
            for (auto& x : c) x = rng() % p;
        images.emplace(g.name, Element::from_coordinates(M, g.degree, c));
    }
    return {A, AlgebraMorphism::from_images(A, M, images)};
}

int fixed_vertices(const GraphAutomorphism& a) {
    int n = 0;
    for (std::size_t v = 0; v < a.vperm.size(); ++v) n += a.vperm[v] == static_cast<int>(v);
    return n;
}

}  // namespace

TEST_SUITE("assembly") {
    TEST_CASE("d1 d1 = 0 on the full E1 page and on each component") {
        const auto rule = standard_rule(qc(), inputs());
        const E1Page full = build_e1(qc(), rule, -1, 40);
        CHECK(full.square_violations() == 0);
        CHECK(full.max_s() == qc().max_dim());
        for (int c = 0; c < qc().component_count; ++c) CHECK(build_e1(qc(), rule, c, 24).square_violations() == 0);
    }

    TEST_CASE("E2 has the Euler characteristic of E1") {
        const auto rule = standard_rule(qc(), inputs());
        const E1Page page = build_e1(qc(), rule, -1, 24);
        const auto e2 = e2_dims(page);
        for (int q = 0; q <= 24; ++q) {
            std::int64_t chi1 = 0, chi2 = 0;
            for (int s = 0; s <= page.max_s(); ++s) {
                const std::int64_t sign = s % 2 ? -1 : 1;
                chi1 += sign * page.dim(s, q);
                chi2 += sign * e2[s][q];
                CHECK(e2[s][q] >= 0);
                CHECK(e2[s][q] <= page.dim(s, q));
            }
            CHECK(chi1 == chi2);
        }
    }

    TEST_CASE("coefficient rule follows the isotropy") {
        RuleReport rep;
        const auto rule = standard_rule(qc(), inputs(), &rep);
        CHECK(rep.derived_maps_match_inputs);
        CHECK_FALSE(rep.wreath_faces.empty());
        for (const auto& c : rep.cells) {
            CHECK((c.sylow_order == 3 || c.sylow_order == 9));
            CHECK(c.isotropy_order % c.sylow_order == 0);
            if (c.sylow_order == 3) CHECK(c.normalizer_quotient == 2);
            if (c.sylow_order == 9) CHECK(c.cell.dim == 0);
        }
        for (const auto& [key, alg] : rule.coefficients) CHECK(alg != nullptr);
    }

    TEST_CASE("factor and diagonal order-3 elements of Aut(K33)") {
        const auto g = automorphism_group(graphs::complete_bipartite(3, 3));
        int factor = 0, diagonal = 0;
        for (const auto& a : elements_of_order(g, 3)) {
            const auto type = classify_embedding(g, a, 3);
            CHECK((type == WreathEmbedding::Factor) == (fixed_vertices(a) > 0));
            (type == WreathEmbedding::Factor ? factor : diagonal)++;
        }
        CHECK(factor == 4);
        CHECK(diagonal == 4);
    }

    TEST_CASE("wreath model") {
        const auto w = wreath_model(3, 24);
        CHECK(invariants(w.ambient, w.swap, 24) == w.presentation->dimensions(24));
        for (const auto& x : w.invariant_generators) CHECK(is_invariant(w.ambient, w.swap, x));
        CHECK(w.presentation->dimensions(24) == inputs().wreath_k->dimensions(24));
        for (int d = 0; d <= 24; ++d) {
            CHECK(w.factor.surjective_in_degree(d));
            CHECK(w.diagonal.surjective_in_degree(d));
        }
        CHECK_FALSE(morphisms_equal(w.factor, w.diagonal, 12));
    }

    TEST_CASE("amalgam of two restrictions") {
        const auto& in = inputs();
        const auto id = AlgebraMorphism::identity(in.sigma3);
        CHECK(amalgam_cohomology(id, id, 30) == in.sigma3->dimensions(30));
        CHECK(amalgam_cohomology(in.alpha, in.beta, 30) == fibre_product(in.alpha, in.beta, 30).dims);
        const auto zero = AlgebraMorphism::zero(in.sigma3, in.sigma3);
        CHECK_THROWS_AS(amalgam_cohomology(zero, zero, 10), AssemblyError);
        CHECK_THROWS_AS(amalgam_cohomology(in.alpha, AlgebraMorphism::identity(in.wreath_k), 10), AssemblyError);
    }

    TEST_CASE("component results") {
        const auto& in = inputs();
        const auto sigma = parse_series(fixtures().series.sigma3).expand(40);
        const auto chi = parse_series(fixtures().series.equalizer).expand(40);
        const auto rose = component_cohomology(qc(), in, "rose", 40);
        const auto theta = component_cohomology(qc(), in, "theta11", 40);
        const auto k33 = component_cohomology(qc(), in, "k33", 40);
        CHECK(rose.vertex_count == 7);
        CHECK(theta.vertex_count == 1);
        CHECK(k33.vertex_count == 9);
        CHECK(rose.dims == sigma);
        CHECK(theta.dims == sigma);
        for (int d = 6; d <= 40; ++d) CHECK(k33.dims[d] == chi[d]);
        CHECK_THROWS_AS(component_cohomology(qc(), in, "nope", 10), AssemblyError);
        const auto ids = locate_components(qc());
        CHECK(ids.rose != ids.theta11);
        CHECK(ids.rose != ids.k33);
        CHECK(ids.theta11 != ids.k33);
    }

    TEST_CASE("assembled totals") {
        const auto r = corollary12(qc(), inputs(), 40);
        const auto sigma = parse_series(fixtures().series.sigma3).expand(40);
        const auto chi = parse_series(fixtures().series.equalizer).expand(40);
        for (int d = 6; d <= 40; ++d) {
            CHECK(r.total[d] == 2 * sigma[d] + chi[d]);
            CHECK(r.expected[d] == 2 * sigma[d] + chi[d]);
        }
        CHECK(r.matches_from_degree_6);
        CHECK(r.e1_squares_zero);
        CHECK(r.k33.dims == r.k33_via_e1);
        CHECK(r.retraction.acyclic);
        CHECK(r.retraction.outside_cells_sigma_type);
        for (int b : r.retraction.relative_betti) CHECK(b == 0);
    }

    TEST_CASE("pipeline identity on random surjective inputs") {
        std::mt19937 rng(99);
        for (std::uint64_t p : {3u, 5u, 7u})
            for (int trial = 0; trial < 6; ++trial) {
                const auto [A, r] = random_surjective_input(p, rng);
                const auto rep = theorem14_pipeline(p, A, r, 40);
                CHECK(rep.identity_holds);
                for (int d = 0; d <= 40; ++d) CHECK(rep.eq_dims[d] == rep.n2_dims[d] + rep.m_tensor_kernel_dims[d]);
                CHECK(rep.p3_excluded_route == (p == 3));
            }
    }

    TEST_CASE("pipeline rejects inputs that are not surjective") {
        const auto dir = default_fixture_dir();
        const auto bad = load_pipeline_input(dir + "/aut_nonsurjective_p5.json", 40);
        CHECK_THROWS_AS(theorem14_pipeline(bad.p, bad.algebra, bad.restriction, 40), AssemblyError);
        const auto good = load_pipeline_input(dir + "/aut_synthetic_p5.json", 40);
        CHECK(theorem14_pipeline(good.p, good.algebra, good.restriction, 40).identity_holds);
        const AlgebraPtr M = cohomology_of_metacyclic(5, 4, 40).presentation;
        CHECK_THROWS_AS(theorem14_pipeline(5, M, AlgebraMorphism::zero(M, M), 40), AssemblyError);
    }
}
