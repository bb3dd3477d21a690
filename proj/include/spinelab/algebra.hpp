#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinelab/field.hpp"

namespace spinelab {

class AlgebraError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Truncated dimension sequence; index = degree.
struct GradedDims {
    std::vector<std::int64_t> dims;

    GradedDims() = default;
    explicit GradedDims(int bound) : dims(static_cast<std::size_t>(bound) + 1, 0) {}
    explicit GradedDims(std::vector<std::int64_t> d) : dims(std::move(d)) {}

    int bound() const { return static_cast<int>(dims.size()) - 1; }
    std::int64_t operator[](int d) const { return d < 0 || d > bound() ? 0 : dims[d]; }
    bool operator==(const GradedDims& o) const { return dims == o.dims; }
    GradedDims truncated(int bound) const;
    std::string to_string() const;
};

GradedDims operator+(const GradedDims& a, const GradedDims& b);
GradedDims operator-(const GradedDims& a, const GradedDims& b);
GradedDims operator*(std::int64_t k, const GradedDims& a);
// Dimensions of a tensor product (Cauchy product).
GradedDims tensor_dims(const GradedDims& a, const GradedDims& b);

enum class GenKind { Polynomial, Exterior };

struct Generator {
    std::string name;
    int degree = 0;
    GenKind kind = GenKind::Polynomial;
    bool operator==(const Generator&) const = default;
};

struct Monomial {
    int component = 0;
    std::vector<int> exps;
    auto operator<=>(const Monomial&) const = default;
};

class GradedAlgebra;
using AlgebraPtr = std::shared_ptr<const GradedAlgebra>;

// Graded-commutative algebra over F_p: a finite product of components, each
// a polynomial algebra on even generators tensor an exterior algebra on odd
// ones. Monomials carry their component; products across components vanish.
class GradedAlgebra {
public:
    static AlgebraPtr make(std::uint64_t p, std::vector<Generator> gens, std::string name = "");
    static AlgebraPtr product(const std::vector<AlgebraPtr>& factors, std::string name = "");
    static AlgebraPtr tensor(const AlgebraPtr& a, const AlgebraPtr& b, std::string name = "");

    std::uint64_t prime() const { return field_.p; }
    const PrimeField& field() const { return field_; }
    const std::string& name() const { return name_; }
    int component_count() const { return static_cast<int>(components_.size()); }
    const std::vector<Generator>& generators(int component = 0) const { return components_.at(component); }

    int degree(const Monomial& m) const;
    // Canonical basis of degree d: component-major, then exponent vectors
    // in lexicographic order.
    std::vector<Monomial> basis(int d) const;
    std::map<Monomial, int> basis_index(int d) const;
    GradedDims dimensions(int bound) const;

    // Generator lookup across components by name.
    std::optional<std::pair<int, int>> find_generator(const std::string& name) const;

    bool same_shape(const GradedAlgebra& o) const;

    nlohmann::ordered_json to_json() const;  // single-component algebras only

private:
    GradedAlgebra(std::uint64_t p, std::vector<std::vector<Generator>> comps, std::string name);
    PrimeField field_;
    std::vector<std::vector<Generator>> components_;
    std::string name_;
};

AlgebraPtr algebra_from_json(const nlohmann::json& j, std::string name = "");

class Element {
public:
    Element() = default;
    explicit Element(AlgebraPtr alg) : alg_(std::move(alg)) {}

    static Element zero(const AlgebraPtr& alg);
    static Element unit(const AlgebraPtr& alg);  // sum of component units
    static Element component_unit(const AlgebraPtr& alg, int component);
    static Element scalar(const AlgebraPtr& alg, std::int64_t k);
    static Element generator(const AlgebraPtr& alg, const std::string& name);
    static Element monomial(const AlgebraPtr& alg, const Monomial& m, Fp coeff = 1);
    // Coordinates refer to basis(d).
    static Element from_coordinates(const AlgebraPtr& alg, int d, const std::vector<Fp>& coords);

    const AlgebraPtr& algebra() const { return alg_; }
    const std::map<Monomial, Fp>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_homogeneous() const;
    // Degree of a nonzero homogeneous element; throws otherwise.
    int degree() const;
    std::vector<Fp> coordinates(int d) const;
    std::string to_string() const;

    Element operator+(const Element& o) const;
    Element operator-(const Element& o) const;
    Element operator-() const;
    Element operator*(const Element& o) const;
    Element scaled(Fp c) const;
    Element pow(int k) const;
    bool operator==(const Element& o) const { return terms_ == o.terms_; }

private:
    AlgebraPtr alg_;
    std::map<Monomial, Fp> terms_;

    void add_term(const Monomial& m, Fp c);
    void check_same(const Element& o) const;
};

// Product of two monomials with the Koszul sign; nullopt when it vanishes.
std::optional<std::pair<Monomial, bool>> multiply_monomials(const GradedAlgebra& alg, const Monomial& a,
                                                            const Monomial& b);

// Multiplicative degree-preserving map, given per source component by the
// image of the component unit and of each generator (or zero).
class AlgebraMorphism {
public:
    struct ComponentImage {
        bool zero = false;
        Element unit;
        std::vector<Element> generators;
    };

    AlgebraMorphism() = default;
    AlgebraMorphism(AlgebraPtr source, AlgebraPtr target, std::vector<ComponentImage> images);

    // Single-component source; every generator must be listed.
    static AlgebraMorphism from_images(const AlgebraPtr& source, const AlgebraPtr& target,
                                       const std::map<std::string, Element>& images);
    static AlgebraMorphism from_expressions(const AlgebraPtr& source, const AlgebraPtr& target,
                                            const std::map<std::string, std::string>& images);
    static AlgebraMorphism identity(const AlgebraPtr& a);
    static AlgebraMorphism zero(const AlgebraPtr& source, const AlgebraPtr& target);
    // On a product of single-component factors: part i acts on factor i,
    // a missing part sends that factor to zero.
    static AlgebraMorphism on_product(const AlgebraPtr& product, const AlgebraPtr& target,
                                      const std::vector<std::optional<AlgebraMorphism>>& parts);

    const AlgebraPtr& source() const { return source_; }
    const AlgebraPtr& target() const { return target_; }

    Element apply(const Element& x) const;
    FpMatrix matrix_in_degree(int d) const;
    bool surjective_in_degree(int d) const;
    // Same map between algebras of identical shape (e.g. renamed generators).
    AlgebraMorphism rebased(const AlgebraPtr& source, const AlgebraPtr& target) const;

private:
    AlgebraPtr source_, target_;
    std::vector<ComponentImage> images_;
    Element apply_monomial(const Monomial& m) const;
};

AlgebraMorphism compose(const AlgebraMorphism& outer, const AlgebraMorphism& inner);
// Equal matrices in every degree <= bound.
bool morphisms_equal(const AlgebraMorphism& f, const AlgebraMorphism& g, int bound);

AlgebraPtr with_generator_names(const AlgebraPtr& a, const std::vector<std::string>& names, std::string name = "");
AlgebraPtr with_suffix(const AlgebraPtr& a, const std::string& suffix);
// Same coefficients in an algebra of identical shape.
Element reparent(const Element& x, const AlgebraPtr& alg);
// Element of a single-component algebra placed into a single-component
// algebra whose generators offset.. offset+k-1 have the same shape.
Element embed(const Element& x, const AlgebraPtr& target, int offset);

struct EqualizerResult {
    AlgebraPtr source;
    GradedDims dims;
    std::vector<std::vector<Element>> basis;  // by degree
};

EqualizerResult equalizer(const AlgebraMorphism& f, const AlgebraMorphism& g, int bound);
// Pairs (u, v) in A x B with a(u) = b(v), computed on the product source.
EqualizerResult fibre_product(const AlgebraMorphism& a, const AlgebraMorphism& b, int bound);

// A group element acting on single-component generators by
// generator_i -> coeff_i * generator_{image_i}.
struct MonomialSubstitution {
    std::vector<std::pair<Fp, int>> images;
    auto operator<=>(const MonomialSubstitution&) const = default;
};

struct GroupAction {
    std::vector<MonomialSubstitution> generators;
};

// Closure of the generators; validated for degree and kind.
std::vector<MonomialSubstitution> group_closure(const AlgebraPtr& a, const GroupAction& action,
                                                std::size_t cap = 100000);
Element act(const AlgebraPtr& a, const MonomialSubstitution& s, const Element& x);
FpMatrix averaging_projector(const AlgebraPtr& a, const std::vector<MonomialSubstitution>& group, int d);
GradedDims invariants(const AlgebraPtr& a, const GroupAction& action, int bound);
std::vector<Element> invariant_basis(const AlgebraPtr& a, const GroupAction& action, int d);
bool is_invariant(const AlgebraPtr& a, const GroupAction& action, const Element& x);

struct MetacyclicCohomology {
    AlgebraPtr ambient;       // exterior on x1 tensor polynomial on y2
    AlgebraPtr presentation;  // detected free presentation
    std::vector<Element> generator_elements;  // in the ambient algebra
    GradedDims invariant_dims;
};

// Invariants of the weight-one Z/m action on Lambda(x1) (x) F_p[y2].
MetacyclicCohomology cohomology_of_metacyclic(std::uint64_t p, int m, int bound = 40);

struct FreeModuleReport {
    bool ok = true;
    int bound = 0;
    int first_failure = -1;
    std::string detail;
};

// Checks that monomials in the subring generators times module generators
// form a basis of the given graded subspace in every degree <= bound.
FreeModuleReport verify_free_module(const std::vector<std::vector<Element>>& ambient_basis,
                                    const std::vector<Element>& subring_gens,
                                    const std::vector<Element>& module_gens, int bound);

// Elements of the given degree in the subalgebra generated by gens.
std::vector<Element> subring_span(const AlgebraPtr& alg, const std::vector<Element>& gens, int d);

}  // namespace spinelab
