#include <doctest.h>

#include <random>

#include "spinelab/algebra.hpp"
#include "spinelab/expr.hpp"
#include "spinelab/fixtures.hpp"
#include "spinelab/series.hpp"

using namespace spinelab;

namespace {

const FixtureSet& fixtures() {
    static const auto fx = load_fixtures(default_fixture_dir());
    return fx;
}

// Dimension of each degree by direct counting of exponent vectors.
std::vector<std::int64_t> count_monomials(const std::vector<Generator>& gens, int bound) {
    std::vector<std::int64_t> dims(bound + 1, 0);
    dims[0] = 1;
    for (const auto& g : gens) {
        std::vector<std::int64_t> next(bound + 1, 0);
        const int cap = g.kind == GenKind::Exterior ? 1 : bound;
        for (int d = 0; d <= bound; ++d)
            for (int e = 0; e <= cap && d + e * g.degree <= bound; ++e) next[d + e * g.degree] += dims[d];
        dims = next;
    }
    return dims;
}

Element random_element(const AlgebraPtr& a, int d, std::mt19937& rng) {
    const auto n = a->basis(d).size();
    std::vector<Fp> c(n);
    for (auto& x : c) x = rng() % a->prime();
    return Element::from_coordinates(a, d, c);
}

std::vector<Fp> mat_vec(const FpMatrix& m, const std::vector<Fp>& v) {
    std::vector<Fp> out(m.rows(), 0);
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) out[r] = m.field().add(out[r], m.field().mul(m.at(r, c), v[c]));
    return out;
}

AlgebraPtr mixed() {
    return GradedAlgebra::make(5, {{"a2", 2, GenKind::Polynomial}, {"b1", 1, GenKind::Exterior},
                                   {"c3", 3, GenKind::Exterior}, {"d4", 4, GenKind::Polynomial}});
}

// Swap of the two copies in the wreath ambient algebra.
GroupAction wreath_swap() {
    const auto& fx = fixtures();
    const AlgebraPtr W = fx.algebra(fx.wreath.ambient);
    MonomialSubstitution s;
    for (std::size_t i = 0; i < W->generators().size(); ++i) s.images.emplace_back(1, static_cast<int>(i));
    for (const auto& [a, b] : fx.wreath.swap) {
        const int ia = W->find_generator(a)->second, ib = W->find_generator(b)->second;
        s.images[ia].second = ib;
        s.images[ib].second = ia;
    }
    return GroupAction{{s}};
}

}  // namespace

TEST_SUITE("galg") {
    TEST_CASE("dimensions agree with monomial counting") {
        std::vector<AlgebraPtr> algs{mixed()};
        for (const auto& [n, a] : fixtures().algebras)
            if (a->component_count() == 1) algs.push_back(a);
        for (const auto& a : algs) {
            const auto want = count_monomials(a->generators(), 30);
            CHECK(a->dimensions(30).dims == want);
            CHECK(poincare_series(*a).expand(30).dims == want);
            for (int d = 0; d <= 12; ++d)
                for (const auto& m : a->basis(d)) CHECK(a->degree(m) == d);
        }
    }

    TEST_CASE("graded commutativity and associativity") {
        std::mt19937 rng(3);
        const auto a = mixed();
        const PrimeField& F = a->field();
        for (int i = 0; i < 60; ++i) {
            const int dx = 1 + rng() % 7, dy = 1 + rng() % 7, dz = rng() % 5;
            const auto x = random_element(a, dx, rng), y = random_element(a, dy, rng), z = random_element(a, dz, rng);
            const Element yx = y * x;
            CHECK(x * y == ((dx * dy) % 2 ? yx.scaled(F.neg(1)) : yx));
            CHECK((x * y) * z == x * (y * z));
            CHECK(x * (y + z) == x * y + x * z);
            if (dx % 2) CHECK((x * x).is_zero());
        }
        const auto b = Element::generator(a, "b1"), c = Element::generator(a, "c3");
        CHECK(b * c == -(c * b));
        CHECK((b * b).is_zero());
        CHECK(Element::generator(a, "a2").pow(3).degree() == 6);
    }

    TEST_CASE("Koszul sign against exterior position count") {
        // b1 c3 e5 in an exterior algebra: a permutation of the three factors
        // carries the sign of the permutation.
        const auto a = GradedAlgebra::make(3, {{"b1", 1, GenKind::Exterior}, {"c3", 3, GenKind::Exterior},
                                               {"e5", 5, GenKind::Exterior}});
        const std::vector<std::string> names{"b1", "c3", "e5"};
        std::vector<int> perm{0, 1, 2};
        const Element sorted = Element::generator(a, "b1") * Element::generator(a, "c3") * Element::generator(a, "e5");
        do {
            int inversions = 0;
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j) inversions += perm[i] > perm[j];
            const Element prod = Element::generator(a, names[perm[0]]) * Element::generator(a, names[perm[1]]) *
                                 Element::generator(a, names[perm[2]]);
            CHECK(prod == (inversions % 2 ? -sorted : sorted));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }

    TEST_CASE("series expansion and parsing") {
        const auto s = parse_series("(1+t^3)/(1-t^4)");
        const auto e = s.expand(24);
        for (int d = 0; d <= 24; ++d) CHECK(e[d] == (d % 4 == 0 || d % 4 == 3 ? 1 : 0));
        CHECK(rational_equal(s, parse_series("(1+t^3)*(1+t^4)/(1-t^8)")));
        CHECK_FALSE(rational_equal(s, parse_series("(1+t^3)/(1-t^8)")));
        CHECK(series_equal(parse_series("1/(1-t)"), parse_series("1+t+t^2+t^3"), 3));
        CHECK_FALSE(series_equal(parse_series("1/(1-t)"), parse_series("1+t+t^2+t^3"), 4));
        CHECK(parse_series("2*t^7 - t").expand(8).dims == std::vector<std::int64_t>{0, -1, 0, 0, 0, 0, 0, 2, 0});
        CHECK_THROWS_AS(parse_series("(1+t"), SeriesError);
        CHECK_THROWS_AS(parse_series("1/(t)"), SeriesError);
        CHECK_THROWS_AS(parse_series("1+x"), SeriesError);
    }

    TEST_CASE("morphism matrices agree with apply") {
        std::mt19937 rng(8);
        for (const auto& [name, f] : fixtures().morphisms)
            for (int d = 0; d <= 16; ++d) {
                const FpMatrix m = f.matrix_in_degree(d);
                for (int i = 0; i < 3; ++i) {
                    const auto x = random_element(f.source(), d, rng);
                    CHECK(f.apply(x).coordinates(d) == mat_vec(m, x.coordinates(d)));
                }
            }
        const auto& alpha = fixtures().morphism("alpha");
        const auto id = AlgebraMorphism::identity(alpha.target());
        CHECK(morphisms_equal(compose(id, alpha), alpha, 24));
        for (int d = 0; d <= 16; ++d)
            CHECK(compose(id, alpha).matrix_in_degree(d) == id.matrix_in_degree(d) * alpha.matrix_in_degree(d));
    }

    TEST_CASE("fibre product by rank-nullity") {
        const auto& fx = fixtures();
        const auto& a = fx.morphism(fx.equalizer.maps.at(0));
        const auto& b = fx.morphism(fx.equalizer.maps.at(1));
        const int bound = 24;
        const auto eq = fibre_product(a, b, bound);
        for (int d = 0; d <= bound; ++d) {
            const FpMatrix ma = a.matrix_in_degree(d), mb = b.matrix_in_degree(d);
            FpMatrix joint(ma.rows(), ma.cols() + mb.cols(), 3);
            for (int r = 0; r < ma.rows(); ++r) {
                for (int c = 0; c < ma.cols(); ++c) joint.at(r, c) = ma.at(r, c);
                for (int c = 0; c < mb.cols(); ++c) joint.at(r, ma.cols() + c) = joint.field().neg(mb.at(r, c));
            }
            CHECK(eq.dims[d] == joint.cols() - joint.rank());
            CHECK(static_cast<std::int64_t>(eq.basis[d].size()) == eq.dims[d]);
        }
        CHECK(eq.dims == parse_series(fx.series.equalizer).expand(bound));
    }

    TEST_CASE("equalizer is a subring") {
        const auto& fx = fixtures();
        const auto& a = fx.morphism(fx.equalizer.maps.at(0));
        const auto& b = fx.morphism(fx.equalizer.maps.at(1));
        const auto eq = fibre_product(a, b, 16);
        const auto f = AlgebraMorphism::on_product(eq.source, a.target(), {a, std::nullopt});
        const auto g = AlgebraMorphism::on_product(eq.source, a.target(), {std::nullopt, b});
        for (int d1 = 0; d1 <= 8; ++d1)
            for (int d2 = d1; d1 + d2 <= 16; ++d2)
                for (const auto& x : eq.basis[d1])
                    for (const auto& y : eq.basis[d2]) CHECK(f.apply(x * y) == g.apply(x * y));
        // Plain equalizer of two maps out of one algebra.
        const auto s = fx.algebra("sigma3");
        const auto zero_w = AlgebraMorphism::from_expressions(s, s, {{"z4", "z4"}, {"w3", "0"}});
        const auto e2 = equalizer(AlgebraMorphism::identity(s), zero_w, 20);
        for (int d = 0; d <= 20; ++d) CHECK(e2.dims[d] == (d % 4 == 0 ? 1 : 0));
    }

    TEST_CASE("averaging projector and invariants") {
        const auto& fx = fixtures();
        const AlgebraPtr W = fx.algebra(fx.wreath.ambient);
        const GroupAction swap = wreath_swap();
        const auto group = group_closure(W, swap);
        CHECK(group.size() == 2);
        const int bound = 20;
        const GradedDims inv = invariants(W, swap, bound);
        for (int d = 0; d <= bound; ++d) {
            const FpMatrix P = averaging_projector(W, group, d);
            CHECK(P * P == P);
            // Invariants as the kernel of (S - I) for the generator S.
            const auto basis = W->basis(d);
            std::vector<std::vector<Fp>> cols;
            for (const auto& m : basis) cols.push_back(act(W, swap.generators[0], Element::monomial(W, m)).coordinates(d));
            const FpMatrix S = FpMatrix::from_columns(cols, static_cast<int>(basis.size()), 3);
            const auto ker = (S - FpMatrix::identity(static_cast<int>(basis.size()), 3)).nullspace();
            CHECK(inv[d] == static_cast<std::int64_t>(ker.size()));
            CHECK(P.rank() == inv[d]);
            for (const auto& x : invariant_basis(W, swap, d)) CHECK(is_invariant(W, swap, x));
        }
        CHECK(inv == fx.algebra(fx.wreath.presentation)->dimensions(bound));
        for (const auto& [n, e] : fx.wreath.invariants) CHECK(is_invariant(W, swap, parse_element(e, W)));
        CHECK_FALSE(is_invariant(W, swap, Element::generator(W, fx.wreath.swap[0].first)));
    }

    TEST_CASE("metacyclic invariants match weight counting") {
        for (std::uint64_t p : {3u, 5u, 7u, 11u})
            for (int m = 1; m <= static_cast<int>(p) - 1; ++m) {
                if ((p - 1) % m) continue;
                const auto mc = cohomology_of_metacyclic(p, m, 30);
                for (int d = 0; d <= 30; ++d) {
                    // x1^e y2^k is invariant iff e + k = 0 mod m.
                    std::int64_t want = 0;
                    for (int e = 0; e <= 1; ++e)
                        if ((d - e) >= 0 && (d - e) % 2 == 0 && (e + (d - e) / 2) % m == 0) ++want;
                    CHECK(mc.invariant_dims[d] == want);
                }
                CHECK(mc.presentation->dimensions(30) == mc.invariant_dims);
            }
        const auto s3 = cohomology_of_metacyclic(3, 2);
        std::vector<int> degs;
        for (const auto& g : s3.presentation->generators()) degs.push_back(g.degree);
        std::sort(degs.begin(), degs.end());
        CHECK(degs == std::vector<int>{3, 4});
        const auto s7 = cohomology_of_metacyclic(7, 6);
        degs.clear();
        for (const auto& g : s7.presentation->generators()) degs.push_back(g.degree);
        std::sort(degs.begin(), degs.end());
        CHECK(degs == std::vector<int>{11, 12});
        CHECK_THROWS_AS(cohomology_of_metacyclic(5, 3), AlgebraError);
        CHECK_THROWS_AS(cohomology_of_metacyclic(9, 2), AlgebraError);
        CHECK_THROWS_AS(cohomology_of_metacyclic(2, 1), AlgebraError);
    }

    TEST_CASE("free module check reports a missing generator") {
        const auto& fx = fixtures();
        const auto eq = fibre_product(fx.morphism("alpha"), fx.morphism("beta"), 24);
        const AlgebraPtr P = eq.source;
        std::map<std::string, Element> named;
        NameLookup lookup = [&](const std::string& n) -> std::optional<Element> {
            if (auto it = named.find(n); it != named.end()) return it->second;
            if (P->find_generator(n)) return Element::generator(P, n);
            return std::nullopt;
        };
        for (const auto& [n, e] : fx.equalizer.elements) named.emplace(n, parse_element(e, P, lookup));
        std::vector<Element> sub, mod, short_mod;
        for (const auto& n : fx.equalizer.subring) sub.push_back(named.at(n));
        for (const auto& n : fx.equalizer.module) {
            mod.push_back(named.at(n));
            if (n != "t8") short_mod.push_back(named.at(n));
        }
        CHECK(verify_free_module(eq.basis, sub, mod, 24).ok);
        const auto bad = verify_free_module(eq.basis, sub, short_mod, 24);
        CHECK_FALSE(bad.ok);
        CHECK(bad.first_failure == 8);
        auto dup = mod;
        dup.push_back(named.at("r4") * named.at("t7"));
        CHECK_FALSE(verify_free_module(eq.basis, sub, dup, 24).ok);
    }

    TEST_CASE("expression parsing") {
        const auto a = fixtures().algebra("sigma3");
        const auto z = Element::generator(a, "z4"), w = Element::generator(a, "w3");
        CHECK(parse_element("2*z4^2 + z4*w3", a) == z.pow(2).scaled(2) + z * w);
        CHECK(parse_element("(z4 - 1)*(z4 + 1)", a) == z * z - Element::unit(a));
        CHECK(parse_element("w3*w3", a).is_zero());
        CHECK(parse_element("4", a) == Element::unit(a));
        CHECK_THROWS_AS(parse_element("z4 +", a), ParseError);
        CHECK_THROWS_AS(parse_element("q7", a), ParseError);
        CHECK_THROWS_AS(parse_element("z4^", a), ParseError);
        CHECK_THROWS_AS(parse_element("(z4", a), ParseError);
        const auto ok = check_relations({{"w3^2", "0"}, {"z4*w3", "w3*z4"}, {"z4", "w3"}}, a,
                                        [&](const std::string& n) -> std::optional<Element> {
                                            if (a->find_generator(n)) return Element::generator(a, n);
                                            return std::nullopt;
                                        });
        CHECK(ok == std::vector<bool>{true, true, false});
    }

    TEST_CASE("prime field and matrices") {
        for (std::uint64_t p : {3u, 5u, 7u, 13u, 101u}) {
            const PrimeField F(p);
            for (Fp a = 1; a < p; ++a) CHECK(F.mul(a, F.inv(a)) == 1);
            const Fp g = F.primitive_root();
            std::set<Fp> powers;
            for (std::uint64_t k = 0; k + 1 < p; ++k) powers.insert(F.pow(g, k));
            CHECK(powers.size() == p - 1);
        }
        CHECK_THROWS_AS(PrimeField(9), FieldError);
        FpMatrix m(2, 3, 3);
        m.at(0, 0) = 1, m.at(0, 1) = 2, m.at(1, 0) = 2, m.at(1, 1) = 1;
        CHECK(m.rank() == 1);
        const auto ker = m.nullspace();
        CHECK(ker.size() == 2);
        for (const auto& v : ker) CHECK(mat_vec(m, v) == std::vector<Fp>{0, 0});
    }

    TEST_CASE("algebra JSON round trip and validation") {
        for (const auto& [n, a] : fixtures().algebras) {
            if (a->component_count() != 1) continue;
            const auto back = algebra_from_json(nlohmann::json::parse(a->to_json().dump()));
            CHECK(back->same_shape(*a));
            CHECK(back->generators() == a->generators());
        }
        CHECK_THROWS(GradedAlgebra::make(3, {{"x", 3, GenKind::Polynomial}}));
        CHECK_THROWS(GradedAlgebra::make(3, {{"x", 2, GenKind::Exterior}}));
    }
}
