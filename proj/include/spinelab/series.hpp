#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinelab/algebra.hpp"

namespace spinelab {

class SeriesError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Integer polynomial in t; index = exponent, trailing zeros trimmed.
struct IntPoly {
    std::vector<std::int64_t> c;

    IntPoly() = default;
    IntPoly(std::initializer_list<std::int64_t> coeffs) : c(coeffs) { trim(); }
    explicit IntPoly(std::vector<std::int64_t> coeffs) : c(std::move(coeffs)) { trim(); }

    static IntPoly monomial(std::int64_t coeff, int exponent);
    int degree() const { return static_cast<int>(c.size()) - 1; }
    std::int64_t operator[](int i) const { return i < 0 || i >= static_cast<int>(c.size()) ? 0 : c[i]; }
    bool is_zero() const { return c.empty(); }
    bool operator==(const IntPoly& o) const { return c == o.c; }
    std::string to_string() const;
    void trim();
};

IntPoly operator+(const IntPoly& a, const IntPoly& b);
IntPoly operator-(const IntPoly& a, const IntPoly& b);
IntPoly operator*(const IntPoly& a, const IntPoly& b);

// Rational function num/den in t with den(0) = +-1.
struct PowerSeriesRat {
    IntPoly num{1};
    IntPoly den{1};

    PowerSeriesRat() = default;
    PowerSeriesRat(IntPoly n, IntPoly d);

    GradedDims expand(int bound) const;
    std::string to_string() const;
};

PowerSeriesRat operator+(const PowerSeriesRat& a, const PowerSeriesRat& b);
PowerSeriesRat operator*(const PowerSeriesRat& a, const PowerSeriesRat& b);

// Equality of the truncated expansions through `bound`.
bool series_equal(const PowerSeriesRat& a, const PowerSeriesRat& b, int bound);
// Equality as rational functions (cross multiplication).
bool rational_equal(const PowerSeriesRat& a, const PowerSeriesRat& b);

// Poincare series of a single-component free graded-commutative algebra.
PowerSeriesRat poincare_series(const GradedAlgebra& a);

// Parses expressions in t such as "(1+t^3)*(1+2*t^7+t^8)/((1-t^4)*(1-t^8))".
PowerSeriesRat parse_series(const std::string& text);

}  // namespace spinelab
