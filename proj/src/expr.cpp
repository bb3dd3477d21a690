#include "spinelab/expr.hpp"

#include <cctype>

namespace spinelab {

namespace {

class Parser {
public:
    Parser(const std::string& text, const AlgebraPtr& alg, const NameLookup& lookup)
        : s_(text), alg_(alg), lookup_(lookup) {}

    Element parse() {
        Element e = sum();
        skip();
        if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
        return e;
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;
    const AlgebraPtr& alg_;
    const NameLookup& lookup_;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("expression '" + s_ + "' at offset " + std::to_string(i_) + ": " + what);
    }

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }

    Element sum() {
        Element acc = Element::zero(alg_);
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        Element t = product();
        acc = neg ? -t : t;
        while (true) {
            if (eat('+'))
                acc = acc + product();
            else if (eat('-'))
                acc = acc - product();
            else
                return acc;
        }
    }

    Element product() {
        Element acc = power();
        while (eat('*')) acc = acc * power();
        return acc;
    }

    Element power() {
        Element base = atom();
        if (eat('^')) {
            skip();
            std::size_t start = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            if (start == i_) fail("expected an exponent");
            base = base.pow(std::stoi(s_.substr(start, i_ - start)));
        }
        return base;
    }

    Element atom() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end");
        char c = s_[i_];
        if (c == '(') {
            ++i_;
            Element e = sum();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            return Element::scalar(alg_, std::stoll(s_.substr(start, i_ - start)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i_;
            while (i_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' || s_[i_] == '~'))
                ++i_;
            std::string name = s_.substr(start, i_ - start);
            auto e = lookup_(name);
            if (!e) fail("unknown name '" + name + "'");
            return *e;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

}  // namespace

Element parse_element(const std::string& text, const AlgebraPtr& alg, const NameLookup& lookup) {
    return Parser(text, alg, lookup).parse();
}

Element parse_element(const std::string& text, const AlgebraPtr& alg) {
    NameLookup lookup = [&](const std::string& name) -> std::optional<Element> {
        if (!alg->find_generator(name)) return std::nullopt;
        return Element::generator(alg, name);
    };
    return parse_element(text, alg, lookup);
}

std::vector<bool> check_relations(const std::vector<std::pair<std::string, std::string>>& relations,
                                  const AlgebraPtr& alg, const NameLookup& lookup) {
    std::vector<bool> out;
    for (const auto& [lhs, rhs] : relations)
        out.push_back(parse_element(lhs, alg, lookup) == parse_element(rhs, alg, lookup));
    return out;
}

}  // namespace spinelab
