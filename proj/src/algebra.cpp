#include "spinelab/algebra.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "spinelab/expr.hpp"

namespace spinelab {

GradedDims GradedDims::truncated(int b) const {
    GradedDims out(b);
    for (int d = 0; d <= b; ++d) out.dims[d] = (*this)[d];
    return out;
}

std::string GradedDims::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? "," : "") << dims[i];
    return os.str();
}

GradedDims operator+(const GradedDims& a, const GradedDims& b) {
    GradedDims out(std::min(a.bound(), b.bound()));
    for (int d = 0; d <= out.bound(); ++d) out.dims[d] = a[d] + b[d];
    return out;
}

GradedDims operator-(const GradedDims& a, const GradedDims& b) {
    GradedDims out(std::min(a.bound(), b.bound()));
    for (int d = 0; d <= out.bound(); ++d) out.dims[d] = a[d] - b[d];
    return out;
}

GradedDims operator*(std::int64_t k, const GradedDims& a) {
    GradedDims out = a;
    for (auto& x : out.dims) x *= k;
    return out;
}

GradedDims tensor_dims(const GradedDims& a, const GradedDims& b) {
    GradedDims out(std::min(a.bound(), b.bound()));
    for (int d = 0; d <= out.bound(); ++d)
        for (int i = 0; i <= d; ++i) out.dims[d] += a[i] * b[d - i];
    return out;
}

// ---------------------------------------------------------------------------

GradedAlgebra::GradedAlgebra(std::uint64_t p, std::vector<std::vector<Generator>> comps, std::string name)
    : field_(p), components_(std::move(comps)), name_(std::move(name)) {
    if (components_.empty()) throw AlgebraError("algebra needs at least one component");
    for (const auto& comp : components_) {
        std::set<std::string> seen;
        for (const auto& g : comp) {
            if (g.degree < 1) throw AlgebraError("generator " + g.name + " has degree < 1");
            bool odd = g.degree % 2 != 0;
            if (odd != (g.kind == GenKind::Exterior))
                throw AlgebraError("generator " + g.name + ": exterior generators must have odd degree, "
                                   "polynomial generators even degree");
            if (g.name.empty() || !seen.insert(g.name).second)
                throw AlgebraError("duplicate or empty generator name '" + g.name + "'");
        }
    }
}

AlgebraPtr GradedAlgebra::make(std::uint64_t p, std::vector<Generator> gens, std::string name) {
    return AlgebraPtr(new GradedAlgebra(p, {std::move(gens)}, std::move(name)));
}

AlgebraPtr GradedAlgebra::product(const std::vector<AlgebraPtr>& factors, std::string name) {
    if (factors.empty()) throw AlgebraError("product of no algebras");
    std::vector<std::vector<Generator>> comps;
    for (const auto& f : factors) {
        if (f->prime() != factors.front()->prime()) throw AlgebraError("product over different primes");
        for (int c = 0; c < f->component_count(); ++c) comps.push_back(f->generators(c));
    }
    return AlgebraPtr(new GradedAlgebra(factors.front()->prime(), std::move(comps), std::move(name)));
}

AlgebraPtr GradedAlgebra::tensor(const AlgebraPtr& a, const AlgebraPtr& b, std::string name) {
    if (a->component_count() != 1 || b->component_count() != 1)
        throw AlgebraError("tensor product needs single-component factors");
    if (a->prime() != b->prime()) throw AlgebraError("tensor product over different primes");
    auto gens = a->generators();
    for (const auto& g : b->generators()) gens.push_back(g);
    return make(a->prime(), std::move(gens), std::move(name));
}

int GradedAlgebra::degree(const Monomial& m) const {
    const auto& gens = components_.at(m.component);
    int d = 0;
    for (std::size_t i = 0; i < gens.size(); ++i) d += m.exps[i] * gens[i].degree;
    return d;
}

std::vector<Monomial> GradedAlgebra::basis(int d) const {
    std::vector<Monomial> out;
    if (d < 0) return out;
    for (int c = 0; c < component_count(); ++c) {
        const auto& gens = components_[c];
        Monomial m{c, std::vector<int>(gens.size(), 0)};
        std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
            if (i == gens.size()) {
                if (left == 0) out.push_back(m);
                return;
            }
            int cap = gens[i].kind == GenKind::Exterior ? 1 : left / gens[i].degree;
            for (int a = 0; a <= cap && a * gens[i].degree <= left; ++a) {
                m.exps[i] = a;
                rec(i + 1, left - a * gens[i].degree);
            }
            m.exps[i] = 0;
        };
        rec(0, d);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::map<Monomial, int> GradedAlgebra::basis_index(int d) const {
    std::map<Monomial, int> idx;
    auto b = basis(d);
    for (std::size_t i = 0; i < b.size(); ++i) idx.emplace(b[i], static_cast<int>(i));
    return idx;
}

GradedDims GradedAlgebra::dimensions(int bound) const {
    // Coefficientwise product of 1/(1-t^d) and (1+t^d) per component.
    GradedDims total(bound);
    for (const auto& gens : components_) {
        std::vector<std::int64_t> s(static_cast<std::size_t>(bound) + 1, 0);
        s[0] = 1;
        for (const auto& g : gens) {
            if (g.kind == GenKind::Exterior) {
                for (int d = bound; d >= g.degree; --d) s[d] += s[d - g.degree];
            } else {
                for (int d = g.degree; d <= bound; ++d) s[d] += s[d - g.degree];
            }
        }
        for (int d = 0; d <= bound; ++d) total.dims[d] += s[d];
    }
    return total;
}

std::optional<std::pair<int, int>> GradedAlgebra::find_generator(const std::string& name) const {
    for (int c = 0; c < component_count(); ++c)
        for (std::size_t i = 0; i < components_[c].size(); ++i)
            if (components_[c][i].name == name) return std::make_pair(c, static_cast<int>(i));
    return std::nullopt;
}

bool GradedAlgebra::same_shape(const GradedAlgebra& o) const {
    if (prime() != o.prime() || components_.size() != o.components_.size()) return false;
    for (std::size_t c = 0; c < components_.size(); ++c) {
        if (components_[c].size() != o.components_[c].size()) return false;
        for (std::size_t i = 0; i < components_[c].size(); ++i)
            if (components_[c][i].degree != o.components_[c][i].degree ||
                components_[c][i].kind != o.components_[c][i].kind)
                return false;
    }
    return true;
}

nlohmann::ordered_json GradedAlgebra::to_json() const {
    if (component_count() != 1) throw AlgebraError("JSON form is defined for single-component algebras");
    nlohmann::ordered_json j;
    j["p"] = prime();
    j["generators"] = nlohmann::ordered_json::array();
    for (const auto& g : components_[0]) {
        nlohmann::ordered_json gj;
        gj["name"] = g.name;
        gj["degree"] = g.degree;
        gj["kind"] = g.kind == GenKind::Polynomial ? "poly" : "exterior";
        j["generators"].push_back(gj);
    }
    return j;
}

AlgebraPtr algebra_from_json(const nlohmann::json& j, std::string name) {
    try {
        std::vector<Generator> gens;
        for (const auto& gj : j.at("generators")) {
            Generator g;
            g.name = gj.at("name").get<std::string>();
            g.degree = gj.at("degree").get<int>();
            auto kind = gj.at("kind").get<std::string>();
            if (kind == "poly" || kind == "polynomial")
                g.kind = GenKind::Polynomial;
            else if (kind == "exterior" || kind == "ext")
                g.kind = GenKind::Exterior;
            else
                throw AlgebraError("unknown generator kind '" + kind + "'");
            gens.push_back(g);
        }
        if (name.empty() && j.contains("name")) name = j["name"].get<std::string>();
        return GradedAlgebra::make(j.at("p").get<std::uint64_t>(), std::move(gens), std::move(name));
    } catch (const nlohmann::json::exception& e) {
        throw AlgebraError(std::string("malformed algebra JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

std::optional<std::pair<Monomial, bool>> multiply_monomials(const GradedAlgebra& alg, const Monomial& a,
                                                            const Monomial& b) {
    if (a.component != b.component) return std::nullopt;
    const auto& gens = alg.generators(a.component);
    Monomial out{a.component, a.exps};
    int swaps = 0;
    for (std::size_t j = 0; j < gens.size(); ++j) {
        if (gens[j].kind == GenKind::Exterior && b.exps[j] == 1) {
            if (a.exps[j] == 1) return std::nullopt;
            // b's x_j moves left past a's exterior factors of larger index.
            for (std::size_t i = j + 1; i < gens.size(); ++i)
                if (gens[i].kind == GenKind::Exterior && a.exps[i] == 1) ++swaps;
        }
        out.exps[j] += b.exps[j];
    }
    return std::make_pair(out, swaps % 2 == 1);
}

Element Element::zero(const AlgebraPtr& alg) { return Element(alg); }

Element Element::component_unit(const AlgebraPtr& alg, int component) {
    Element e(alg);
    e.add_term(Monomial{component, std::vector<int>(alg->generators(component).size(), 0)}, 1);
    return e;
}

Element Element::unit(const AlgebraPtr& alg) {
    Element e(alg);
    for (int c = 0; c < alg->component_count(); ++c) e = e + component_unit(alg, c);
    return e;
}

Element Element::scalar(const AlgebraPtr& alg, std::int64_t k) { return unit(alg).scaled(alg->field().from_int(k)); }

Element Element::generator(const AlgebraPtr& alg, const std::string& name) {
    auto loc = alg->find_generator(name);
    if (!loc) throw AlgebraError("unknown generator '" + name + "'");
    Monomial m{loc->first, std::vector<int>(alg->generators(loc->first).size(), 0)};
    m.exps[loc->second] = 1;
    return monomial(alg, m);
}

Element Element::monomial(const AlgebraPtr& alg, const Monomial& m, Fp coeff) {
    Element e(alg);
    e.add_term(m, coeff % alg->prime());
    return e;
}

Element Element::from_coordinates(const AlgebraPtr& alg, int d, const std::vector<Fp>& coords) {
    auto b = alg->basis(d);
    if (coords.size() != b.size()) throw AlgebraError("coordinate vector has wrong length");
    Element e(alg);
    for (std::size_t i = 0; i < b.size(); ++i) e.add_term(b[i], coords[i] % alg->prime());
    return e;
}

void Element::add_term(const Monomial& m, Fp c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
        return;
    }
    it->second = alg_->field().add(it->second, c);
    if (it->second == 0) terms_.erase(it);
}

void Element::check_same(const Element& o) const {
    if (!alg_ || !o.alg_) throw AlgebraError("element without parent algebra");
    if (alg_ != o.alg_ && !alg_->same_shape(*o.alg_)) throw AlgebraError("elements of different algebras");
}

bool Element::is_homogeneous() const {
    std::optional<int> d;
    for (const auto& [m, c] : terms_) {
        int dm = alg_->degree(m);
        if (d && *d != dm) return false;
        d = dm;
    }
    return true;
}

int Element::degree() const {
    if (terms_.empty()) throw AlgebraError("zero element has no degree");
    if (!is_homogeneous()) throw AlgebraError("inhomogeneous element has no degree");
    return alg_->degree(terms_.begin()->first);
}

std::vector<Fp> Element::coordinates(int d) const {
    auto idx = alg_->basis_index(d);
    std::vector<Fp> v(idx.size(), 0);
    for (const auto& [m, c] : terms_) {
        auto it = idx.find(m);
        if (it == idx.end()) throw AlgebraError("element has a term outside degree " + std::to_string(d));
        v[it->second] = c;
    }
    return v;
}

std::string Element::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        std::ostringstream mono;
        const auto& gens = alg_->generators(m.component);
        bool any = false;
        for (std::size_t i = 0; i < gens.size(); ++i) {
            if (m.exps[i] == 0) continue;
            if (any) mono << "*";
            mono << gens[i].name;
            if (m.exps[i] > 1) mono << "^" << m.exps[i];
            any = true;
        }
        if (alg_->component_count() > 1) os << "[" << m.component << "]";
        if (!any)
            os << c;
        else if (c == 1)
            os << mono.str();
        else
            os << c << "*" << mono.str();
    }
    return os.str();
}

Element Element::operator+(const Element& o) const {
    if (is_zero() && !alg_) return o;
    check_same(o);
    Element r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Element Element::operator-() const { return scaled(alg_->prime() - 1); }

Element Element::operator-(const Element& o) const { return *this + (-o); }

Element Element::operator*(const Element& o) const {
    check_same(o);
    Element r(alg_);
    const auto& F = alg_->field();
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) {
            auto prod = multiply_monomials(*alg_, ma, mb);
            if (!prod) continue;
            Fp c = F.mul(ca, cb);
            r.add_term(prod->first, prod->second ? F.neg(c) : c);
        }
    return r;
}

Element Element::scaled(Fp c) const {
    Element r(alg_);
    c %= alg_->prime();
    for (const auto& [m, x] : terms_) r.add_term(m, alg_->field().mul(x, c));
    return r;
}

Element Element::pow(int k) const {
    if (k < 0) throw AlgebraError("negative power");
    Element r = unit(alg_);
    Element base = *this;
    while (k > 0) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

// ---------------------------------------------------------------------------

AlgebraMorphism::AlgebraMorphism(AlgebraPtr source, AlgebraPtr target, std::vector<ComponentImage> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
    if (source_->prime() != target_->prime()) throw AlgebraError("morphism between different primes");
    if (static_cast<int>(images_.size()) != source_->component_count())
        throw AlgebraError("morphism needs one image record per source component");
    for (int c = 0; c < source_->component_count(); ++c) {
        auto& img = images_[c];
        if (img.zero) continue;
        const auto& gens = source_->generators(c);
        if (img.generators.size() != gens.size()) throw AlgebraError("morphism image count mismatch");
        if (!img.unit.algebra()) img.unit = Element::unit(target_);
        if (!img.unit.is_zero() && img.unit.degree() != 0) throw AlgebraError("unit image must have degree 0");
        for (std::size_t i = 0; i < gens.size(); ++i) {
            auto& e = img.generators[i];
            if (!e.algebra()) e = Element::zero(target_);
            if (!e.is_zero() && (!e.is_homogeneous() || e.degree() != gens[i].degree))
                throw AlgebraError("image of " + gens[i].name + " is not homogeneous of degree " +
                                   std::to_string(gens[i].degree));
        }
    }
}

AlgebraMorphism AlgebraMorphism::from_images(const AlgebraPtr& source, const AlgebraPtr& target,
                                             const std::map<std::string, Element>& images) {
    if (source->component_count() != 1) throw AlgebraError("from_images needs a single-component source");
    ComponentImage img;
    img.unit = Element::unit(target);
    for (const auto& g : source->generators()) {
        auto it = images.find(g.name);
        if (it == images.end()) throw AlgebraError("no image given for generator " + g.name);
        img.generators.push_back(it->second);
    }
    for (const auto& [name, e] : images)
        if (!source->find_generator(name)) throw AlgebraError("image given for unknown generator " + name);
    return AlgebraMorphism(source, target, {img});
}

AlgebraMorphism AlgebraMorphism::from_expressions(const AlgebraPtr& source, const AlgebraPtr& target,
                                                  const std::map<std::string, std::string>& images) {
    std::map<std::string, Element> parsed;
    for (const auto& [name, text] : images) parsed.emplace(name, parse_element(text, target));
    return from_images(source, target, parsed);
}

AlgebraMorphism AlgebraMorphism::identity(const AlgebraPtr& a) {
    std::vector<ComponentImage> imgs;
    for (int c = 0; c < a->component_count(); ++c) {
        ComponentImage img;
        img.unit = Element::component_unit(a, c);
        const auto& gens = a->generators(c);
        for (std::size_t i = 0; i < gens.size(); ++i) {
            Monomial m{c, std::vector<int>(gens.size(), 0)};
            m.exps[i] = 1;
            img.generators.push_back(Element::monomial(a, m));
        }
        imgs.push_back(img);
    }
    return AlgebraMorphism(a, a, imgs);
}

AlgebraMorphism AlgebraMorphism::zero(const AlgebraPtr& source, const AlgebraPtr& target) {
    std::vector<ComponentImage> imgs(source->component_count());
    for (auto& img : imgs) img.zero = true;
    return AlgebraMorphism(source, target, imgs);
}

AlgebraMorphism AlgebraMorphism::on_product(const AlgebraPtr& product, const AlgebraPtr& target,
                                            const std::vector<std::optional<AlgebraMorphism>>& parts) {
    if (static_cast<int>(parts.size()) != product->component_count())
        throw AlgebraError("on_product needs one part per component");
    std::vector<ComponentImage> imgs;
    for (std::size_t c = 0; c < parts.size(); ++c) {
        if (!parts[c]) {
            ComponentImage z;
            z.zero = true;
            imgs.push_back(z);
            continue;
        }
        const auto& f = *parts[c];
        if (f.source()->component_count() != 1 ||
            f.source()->generators() != product->generators(static_cast<int>(c)))
            throw AlgebraError("on_product part does not match its component");
        if (!f.target()->same_shape(*target)) throw AlgebraError("on_product part has the wrong target");
        imgs.push_back(f.images_[0]);
    }
    return AlgebraMorphism(product, target, imgs);
}

Element AlgebraMorphism::apply_monomial(const Monomial& m) const {
    const auto& img = images_.at(m.component);
    if (img.zero) return Element::zero(target_);
    Element r = img.unit;
    for (std::size_t i = 0; i < m.exps.size(); ++i)
        if (m.exps[i] > 0) r = r * img.generators[i].pow(m.exps[i]);
    return r;
}

Element AlgebraMorphism::apply(const Element& x) const {
    if (!x.is_homogeneous()) throw AlgebraError("morphism applied to an inhomogeneous element");
    if (x.algebra() && !x.algebra()->same_shape(*source_)) throw AlgebraError("element is not in the source");
    Element r = Element::zero(target_);
    for (const auto& [m, c] : x.terms()) r = r + apply_monomial(m).scaled(c);
    return r;
}

FpMatrix AlgebraMorphism::matrix_in_degree(int d) const {
    auto src = source_->basis(d);
    auto tgt = target_->basis_index(d);
    FpMatrix M(static_cast<int>(tgt.size()), static_cast<int>(src.size()), source_->prime());
    for (std::size_t j = 0; j < src.size(); ++j) {
        Element img = apply_monomial(src[j]);
        for (const auto& [m, c] : img.terms()) M.at(tgt.at(m), static_cast<int>(j)) = c;
    }
    return M;
}

bool AlgebraMorphism::surjective_in_degree(int d) const {
    return matrix_in_degree(d).rank() == static_cast<int>(target_->basis(d).size());
}

AlgebraMorphism compose(const AlgebraMorphism& outer, const AlgebraMorphism& inner) {
    if (!inner.target()->same_shape(*outer.source())) throw AlgebraError("compose: shapes do not match");
    const auto& src = inner.source();
    std::vector<AlgebraMorphism::ComponentImage> imgs;
    for (int c = 0; c < src->component_count(); ++c) {
        AlgebraMorphism::ComponentImage img;
        const auto& gens = src->generators(c);
        Monomial one{c, std::vector<int>(gens.size(), 0)};
        Element u = inner.apply(Element::monomial(src, one));
        if (u.is_zero()) {
            img.zero = true;
            imgs.push_back(img);
            continue;
        }
        img.unit = outer.apply(u);
        for (std::size_t i = 0; i < gens.size(); ++i) {
            Monomial m = one;
            m.exps[i] = 1;
            img.generators.push_back(outer.apply(inner.apply(Element::monomial(src, m))));
        }
        imgs.push_back(img);
    }
    return AlgebraMorphism(src, outer.target(), imgs);
}

AlgebraMorphism AlgebraMorphism::rebased(const AlgebraPtr& source, const AlgebraPtr& target) const {
    if (!source->same_shape(*source_) || !target->same_shape(*target_))
        throw AlgebraError("rebased: algebras differ in shape");
    auto imgs = images_;
    for (auto& img : imgs) {
        if (img.zero) continue;
        img.unit = reparent(img.unit, target);
        for (auto& e : img.generators) e = reparent(e, target);
    }
    return AlgebraMorphism(source, target, imgs);
}

bool morphisms_equal(const AlgebraMorphism& f, const AlgebraMorphism& g, int bound) {
    if (!f.source()->same_shape(*g.source()) || !f.target()->same_shape(*g.target())) return false;
    for (int d = 0; d <= bound; ++d)
        if (!(f.matrix_in_degree(d) == g.matrix_in_degree(d))) return false;
    return true;
}

AlgebraPtr with_generator_names(const AlgebraPtr& a, const std::vector<std::string>& names, std::string name) {
    if (a->component_count() != 1) throw AlgebraError("renaming needs a single-component algebra");
    auto gens = a->generators();
    if (names.size() != gens.size()) throw AlgebraError("renaming needs one name per generator");
    for (std::size_t i = 0; i < gens.size(); ++i) gens[i].name = names[i];
    return GradedAlgebra::make(a->prime(), gens, std::move(name));
}

AlgebraPtr with_suffix(const AlgebraPtr& a, const std::string& suffix) {
    std::vector<std::string> names;
    for (const auto& g : a->generators()) names.push_back(g.name + suffix);
    return with_generator_names(a, names, a->name() + suffix);
}

Element reparent(const Element& x, const AlgebraPtr& alg) {
    if (x.algebra() && !x.algebra()->same_shape(*alg)) throw AlgebraError("reparent: algebras differ in shape");
    Element r = Element::zero(alg);
    for (const auto& [m, c] : x.terms()) r = r + Element::monomial(alg, m, c);
    return r;
}

Element embed(const Element& x, const AlgebraPtr& target, int offset) {
    const auto& tg = target->generators();
    Element r = Element::zero(target);
    if (x.is_zero()) return r;
    const auto& sg = x.algebra()->generators();
    if (offset < 0 || static_cast<std::size_t>(offset) + sg.size() > tg.size()) throw AlgebraError("embed: offset out of range");
    for (std::size_t i = 0; i < sg.size(); ++i)
        if (sg[i].degree != tg[offset + i].degree || sg[i].kind != tg[offset + i].kind)
            throw AlgebraError("embed: generator shapes differ");
    for (const auto& [m, c] : x.terms()) {
        Monomial n{0, std::vector<int>(tg.size(), 0)};
        for (std::size_t i = 0; i < sg.size(); ++i) n.exps[offset + i] = m.exps[i];
        r = r + Element::monomial(target, n, c);
    }
    return r;
}

EqualizerResult equalizer(const AlgebraMorphism& f, const AlgebraMorphism& g, int bound) {
    if (!f.source()->same_shape(*g.source()) || !f.target()->same_shape(*g.target()))
        throw AlgebraError("equalizer: morphisms do not share source and target");
    EqualizerResult r;
    r.source = f.source();
    r.dims = GradedDims(bound);
    r.basis.resize(static_cast<std::size_t>(bound) + 1);
    for (int d = 0; d <= bound; ++d) {
        FpMatrix D = f.matrix_in_degree(d) - g.matrix_in_degree(d);
        auto ns = D.nullspace();
        r.dims.dims[d] = static_cast<std::int64_t>(ns.size());
        for (const auto& v : ns) r.basis[d].push_back(Element::from_coordinates(r.source, d, v));
    }
    return r;
}

EqualizerResult fibre_product(const AlgebraMorphism& a, const AlgebraMorphism& b, int bound) {
    if (!a.target()->same_shape(*b.target())) throw AlgebraError("fibre_product: targets differ");
    auto P = GradedAlgebra::product({a.source(), b.source()});
    auto f = AlgebraMorphism::on_product(P, a.target(), {a, std::nullopt});
    auto g = AlgebraMorphism::on_product(P, a.target(), {std::nullopt, b});
    return equalizer(f, g, bound);
}

// ---------------------------------------------------------------------------

namespace {

void validate_substitution(const AlgebraPtr& a, const MonomialSubstitution& s) {
    if (a->component_count() != 1) throw AlgebraError("group actions need a single-component algebra");
    const auto& gens = a->generators();
    if (s.images.size() != gens.size()) throw AlgebraError("substitution has the wrong number of images");
    std::vector<bool> hit(gens.size(), false);
    for (std::size_t i = 0; i < gens.size(); ++i) {
        auto [c, j] = s.images[i];
        if (j < 0 || j >= static_cast<int>(gens.size())) throw AlgebraError("substitution index out of range");
        if (c % a->prime() == 0) throw AlgebraError("substitution coefficient must be a unit");
        if (gens[j].degree != gens[i].degree || gens[j].kind != gens[i].kind)
            throw AlgebraError("action does not preserve degree and kind of " + gens[i].name);
        if (hit[j]) throw AlgebraError("substitution is not a permutation");
        hit[j] = true;
    }
}

MonomialSubstitution compose_subst(const PrimeField& F, const MonomialSubstitution& s,
                                   const MonomialSubstitution& t) {
    MonomialSubstitution r;
    for (const auto& [tc, ti] : t.images) {
        auto [sc, si] = s.images[ti];
        r.images.emplace_back(F.mul(tc, sc), si);
    }
    return r;
}

}  // namespace

std::vector<MonomialSubstitution> group_closure(const AlgebraPtr& a, const GroupAction& action, std::size_t cap) {
    MonomialSubstitution id;
    for (std::size_t i = 0; i < a->generators().size(); ++i) id.images.emplace_back(1, static_cast<int>(i));
    for (const auto& g : action.generators) validate_substitution(a, g);
    std::set<MonomialSubstitution> seen{id};
    std::vector<MonomialSubstitution> queue{id};
    for (std::size_t k = 0; k < queue.size(); ++k) {
        for (const auto& g : action.generators) {
            auto h = compose_subst(a->field(), g, queue[k]);
            if (seen.insert(h).second) {
                if (seen.size() > cap) throw AlgebraError("group closure exceeds the element cap");
                queue.push_back(h);
            }
        }
    }
    return {seen.begin(), seen.end()};
}

Element act(const AlgebraPtr& a, const MonomialSubstitution& s, const Element& x) {
    Element r = Element::zero(a);
    const auto& gens = a->generators();
    for (const auto& [m, c] : x.terms()) {
        Element t = Element::unit(a);
        for (std::size_t i = 0; i < gens.size(); ++i) {
            if (m.exps[i] == 0) continue;
            Monomial g{0, std::vector<int>(gens.size(), 0)};
            g.exps[s.images[i].second] = 1;
            t = t * Element::monomial(a, g, s.images[i].first).pow(m.exps[i]);
        }
        r = r + t.scaled(c);
    }
    return r;
}

namespace {

FpMatrix action_matrix(const AlgebraPtr& a, const MonomialSubstitution& s, int d) {
    auto b = a->basis(d);
    auto idx = a->basis_index(d);
    FpMatrix M(static_cast<int>(b.size()), static_cast<int>(b.size()), a->prime());
    for (std::size_t j = 0; j < b.size(); ++j) {
        Element img = act(a, s, Element::monomial(a, b[j]));
        for (const auto& [m, c] : img.terms()) M.at(idx.at(m), static_cast<int>(j)) = c;
    }
    return M;
}

void require_coprime(const AlgebraPtr& a, std::size_t order) {
    if (order % a->prime() == 0)
        throw AlgebraError("group order " + std::to_string(order) + " is divisible by p = " +
                           std::to_string(a->prime()) + "; modular invariants are not supported");
}

}  // namespace

FpMatrix averaging_projector(const AlgebraPtr& a, const std::vector<MonomialSubstitution>& group, int d) {
    require_coprime(a, group.size());
    int n = static_cast<int>(a->basis(d).size());
    FpMatrix P(n, n, a->prime());
    for (const auto& g : group) P = P + action_matrix(a, g, d);
    Fp inv = a->field().inv(a->field().from_int(static_cast<std::int64_t>(group.size())));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) P.at(i, j) = a->field().mul(P.at(i, j), inv);
    return P;
}

GradedDims invariants(const AlgebraPtr& a, const GroupAction& action, int bound) {
    auto group = group_closure(a, action);
    GradedDims out(bound);
    for (int d = 0; d <= bound; ++d) out.dims[d] = averaging_projector(a, group, d).rank();
    return out;
}

std::vector<Element> invariant_basis(const AlgebraPtr& a, const GroupAction& action, int d) {
    auto group = group_closure(a, action);
    require_coprime(a, group.size());
    int n = static_cast<int>(a->basis(d).size());
    FpMatrix stacked(n * static_cast<int>(std::max<std::size_t>(action.generators.size(), 1)), n, a->prime());
    for (std::size_t k = 0; k < action.generators.size(); ++k) {
        FpMatrix D = action_matrix(a, action.generators[k], d) - FpMatrix::identity(n, a->prime());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) stacked.at(static_cast<int>(k) * n + i, j) = D.at(i, j);
    }
    std::vector<Element> out;
    for (const auto& v : stacked.nullspace()) out.push_back(Element::from_coordinates(a, d, v));
    return out;
}

bool is_invariant(const AlgebraPtr& a, const GroupAction& action, const Element& x) {
    for (const auto& g : action.generators) {
        validate_substitution(a, g);
        if (!(act(a, g, x) == x)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

std::vector<Element> subring_span(const AlgebraPtr& alg, const std::vector<Element>& gens, int d) {
    std::vector<Element> out;
    std::vector<int> degs, exps(gens.size(), 0);
    for (const auto& g : gens) degs.push_back(g.degree());
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i == gens.size()) {
            if (left != 0) return;
            Element e = Element::unit(alg);
            for (std::size_t k = 0; k < gens.size(); ++k)
                if (exps[k]) e = e * gens[k].pow(exps[k]);
            out.push_back(e);
            return;
        }
        int cap = degs[i] % 2 ? 1 : left / degs[i];
        for (int a = 0; a <= cap && a * degs[i] <= left; ++a) {
            exps[i] = a;
            rec(i + 1, left - a * degs[i]);
        }
        exps[i] = 0;
    };
    rec(0, d);
    return out;
}

namespace {

int coordinate_rank(const AlgebraPtr& alg, const std::vector<Element>& elems, int d) {
    std::vector<std::vector<Fp>> vs;
    for (const auto& e : elems) vs.push_back(e.coordinates(d));
    return span_rank(vs, static_cast<int>(alg->basis(d).size()), alg->prime());
}

}  // namespace

MetacyclicCohomology cohomology_of_metacyclic(std::uint64_t p, int m, int bound) {
    if (!is_prime(p) || p == 2) throw AlgebraError("p must be an odd prime");
    if (m < 1 || (p - 1) % static_cast<std::uint64_t>(m) != 0)
        throw AlgebraError("m = " + std::to_string(m) + " does not divide p - 1");
    MetacyclicCohomology out;
    out.ambient = GradedAlgebra::make(p, {{"x1", 1, GenKind::Exterior}, {"y2", 2, GenKind::Polynomial}},
                                      "Lambda(x1)(x)F[y2]");
    const PrimeField& F = out.ambient->field();
    Fp zeta = F.pow(F.primitive_root(), (p - 1) / static_cast<std::uint64_t>(m));
    GroupAction action{{MonomialSubstitution{{{zeta, 0}, {zeta, 1}}}}};

    out.invariant_dims = GradedDims(bound);
    std::vector<Generator> pres;
    for (int d = 0; d <= bound; ++d) {
        auto inv = invariant_basis(out.ambient, action, d);
        out.invariant_dims.dims[d] = static_cast<std::int64_t>(inv.size());
        if (d == 0) continue;
        auto span = subring_span(out.ambient, out.generator_elements, d);
        int r = coordinate_rank(out.ambient, span, d);
        for (const auto& v : inv) {
            if (r == static_cast<int>(inv.size())) break;
            span.push_back(v);
            int r2 = coordinate_rank(out.ambient, span, d);
            if (r2 == r) {
                span.pop_back();
                continue;
            }
            r = r2;
            std::string name;
            if (v.terms().size() == 1 && v.terms().begin()->second == 1) {
                const auto& mono = v.terms().begin()->first;
                int nz = 0, idx = -1;
                for (std::size_t i = 0; i < mono.exps.size(); ++i)
                    if (mono.exps[i]) ++nz, idx = static_cast<int>(i);
                if (nz == 1 && mono.exps[idx] == 1) name = out.ambient->generators()[idx].name;
            }
            if (name.empty()) name = (d % 2 ? "b" : "a") + std::to_string(d);
            pres.push_back({name, d, d % 2 ? GenKind::Exterior : GenKind::Polynomial});
            out.generator_elements.push_back(v);
        }
    }
    out.presentation = GradedAlgebra::make(p, pres, "H*(Z/p:Z/" + std::to_string(m) + ")");
    if (!(out.presentation->dimensions(bound) == out.invariant_dims))
        throw AlgebraError("invariant ring is not free on the detected generators through degree " +
                           std::to_string(bound));
    return out;
}

FreeModuleReport verify_free_module(const std::vector<std::vector<Element>>& ambient_basis,
                                    const std::vector<Element>& subring_gens,
                                    const std::vector<Element>& module_gens, int bound) {
    FreeModuleReport rep;
    rep.bound = bound;
    AlgebraPtr alg;
    for (const auto& e : module_gens)
        if (e.algebra()) alg = e.algebra();
    if (!alg) throw AlgebraError("verify_free_module needs at least one module generator");
    for (const auto& e : module_gens)
        if (e.is_zero()) throw AlgebraError("zero module generator");
    for (int d = 0; d <= bound; ++d) {
        std::vector<Element> prods;
        for (const auto& mg : module_gens) {
            int dm = mg.degree();
            if (dm > d) continue;
            for (const auto& s : subring_span(alg, subring_gens, d - dm)) prods.push_back(s * mg);
        }
        const auto& amb = d < static_cast<int>(ambient_basis.size()) ? ambient_basis[d] : std::vector<Element>{};
        int n = static_cast<int>(prods.size());
        int r = coordinate_rank(alg, prods, d);
        auto both = prods;
        both.insert(both.end(), amb.begin(), amb.end());
        int rb = coordinate_rank(alg, both, d);
        int ra = coordinate_rank(alg, amb, d);
        std::ostringstream why;
        if (r != n)
            why << "degree " << d << ": " << n << " products span only " << r << " dimensions";
        else if (rb != ra)
            why << "degree " << d << ": products leave the ambient subspace";
        else if (r != ra)
            why << "degree " << d << ": products span " << r << " of " << ra << " dimensions";
        if (!why.str().empty()) {
            rep.ok = false;
            rep.first_failure = d;
            rep.detail = why.str();
            return rep;
        }
    }
    rep.detail = "verified through degree " + std::to_string(bound);
    return rep;
}

}  // namespace spinelab
