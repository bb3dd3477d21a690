#include "spinelab/series.hpp"

#include <cctype>
#include <sstream>

namespace spinelab {

void IntPoly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

IntPoly IntPoly::monomial(std::int64_t coeff, int exponent) {
    std::vector<std::int64_t> v(static_cast<std::size_t>(exponent) + 1, 0);
    v[exponent] = coeff;
    return IntPoly(std::move(v));
}

std::string IntPoly::to_string() const {
    if (c.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c.size(); ++i) {
        std::int64_t x = c[i];
        if (x == 0) continue;
        if (!first) os << (x < 0 ? "-" : "+");
        else if (x < 0) os << "-";
        std::int64_t ax = x < 0 ? -x : x;
        if (i == 0)
            os << ax;
        else {
            if (ax != 1) os << ax << "*";
            os << "t";
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    return os.str();
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    std::vector<std::int64_t> v(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[static_cast<int>(i)] + b[static_cast<int>(i)];
    return IntPoly(std::move(v));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) {
    std::vector<std::int64_t> v(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[static_cast<int>(i)] - b[static_cast<int>(i)];
    return IntPoly(std::move(v));
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<std::int64_t> v(a.c.size() + b.c.size() - 1, 0);
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) v[i + j] += a.c[i] * b.c[j];
    return IntPoly(std::move(v));
}

PowerSeriesRat::PowerSeriesRat(IntPoly n, IntPoly d) : num(std::move(n)), den(std::move(d)) {
    if (den[0] != 1 && den[0] != -1)
        throw SeriesError("denominator " + den.to_string() + " does not have unit constant term");
}

GradedDims PowerSeriesRat::expand(int bound) const {
    // Solve den * s = num coefficientwise.
    GradedDims out(bound);
    std::int64_t d0 = den[0];
    for (int n = 0; n <= bound; ++n) {
        std::int64_t acc = num[n];
        for (int k = 1; k <= std::min(n, den.degree()); ++k) acc -= den[k] * out.dims[n - k];
        out.dims[n] = acc * d0;  // d0 = +-1 is its own inverse
    }
    return out;
}

std::string PowerSeriesRat::to_string() const { return "(" + num.to_string() + ")/(" + den.to_string() + ")"; }

PowerSeriesRat operator+(const PowerSeriesRat& a, const PowerSeriesRat& b) {
    return PowerSeriesRat(a.num * b.den + b.num * a.den, a.den * b.den);
}

PowerSeriesRat operator*(const PowerSeriesRat& a, const PowerSeriesRat& b) {
    return PowerSeriesRat(a.num * b.num, a.den * b.den);
}

bool series_equal(const PowerSeriesRat& a, const PowerSeriesRat& b, int bound) {
    return a.expand(bound) == b.expand(bound);
}

bool rational_equal(const PowerSeriesRat& a, const PowerSeriesRat& b) {
    return a.num * b.den == b.num * a.den;
}

PowerSeriesRat poincare_series(const GradedAlgebra& a) {
    if (a.component_count() != 1) throw SeriesError("Poincare series of a product is a sum; use components");
    IntPoly num{1}, den{1};
    for (const auto& g : a.generators()) {
        if (g.kind == GenKind::Exterior)
            num = num * (IntPoly{1} + IntPoly::monomial(1, g.degree));
        else
            den = den * (IntPoly{1} - IntPoly::monomial(1, g.degree));
    }
    return PowerSeriesRat(num, den);
}

namespace {

struct Frac {
    IntPoly num{1};
    IntPoly den{1};
};

class SeriesParser {
public:
    explicit SeriesParser(const std::string& s) : s_(s) {}

    PowerSeriesRat parse() {
        Frac f = sum();
        skip();
        if (i_ != s_.size()) fail("trailing input");
        return PowerSeriesRat(f.num, f.den);
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw SeriesError("series '" + s_ + "' at offset " + std::to_string(i_) + ": " + what);
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
    int integer() {
        skip();
        std::size_t start = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (start == i_) fail("expected an integer");
        return std::stoi(s_.substr(start, i_ - start));
    }

    Frac sum() {
        bool neg = eat('-');
        if (!neg) eat('+');
        Frac acc = product();
        if (neg) acc.num = IntPoly{} - acc.num;
        while (true) {
            bool plus = eat('+');
            if (!plus && !eat('-')) return acc;
            Frac t = product();
            IntPoly tn = t.num * acc.den;
            acc.num = plus ? acc.num * t.den + tn : acc.num * t.den - tn;
            acc.den = acc.den * t.den;
        }
    }

    Frac product() {
        Frac acc = power();
        while (true) {
            if (eat('*')) {
                Frac t = power();
                acc.num = acc.num * t.num;
                acc.den = acc.den * t.den;
            } else if (eat('/')) {
                Frac t = power();
                if (t.num.is_zero()) fail("division by zero");
                acc.num = acc.num * t.den;
                acc.den = acc.den * t.num;
            } else {
                return acc;
            }
        }
    }

    Frac power() {
        Frac b = atom();
        if (eat('^')) {
            int e = integer();
            Frac r;
            for (int k = 0; k < e; ++k) {
                r.num = r.num * b.num;
                r.den = r.den * b.den;
            }
            return r;
        }
        return b;
    }

    Frac atom() {
        skip();
        if (eat('(')) {
            Frac f = sum();
            if (!eat(')')) fail("expected ')'");
            return f;
        }
        if (eat('t')) return Frac{IntPoly::monomial(1, 1), IntPoly{1}};
        if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_])))
            return Frac{IntPoly{integer()}, IntPoly{1}};
        fail("unexpected input");
    }
};

}  // namespace

PowerSeriesRat parse_series(const std::string& text) { return SeriesParser(text).parse(); }

}  // namespace spinelab
