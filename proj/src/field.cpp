#include "spinelab/field.hpp"

#include <string>

namespace spinelab {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

PrimeField::PrimeField(std::uint64_t prime) : p(prime) {
    if (prime < 3 || prime >= (std::uint64_t{1} << 61) || !is_prime(prime))
        throw FieldError("field characteristic must be an odd prime below 2^61, got " + std::to_string(prime));
}

Fp PrimeField::pow(Fp a, std::uint64_t e) const {
    Fp r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

Fp PrimeField::inv(Fp a) const {
    if (a % p == 0) throw FieldError("inverse of zero");
    return pow(a, p - 2);
}

Fp PrimeField::from_int(std::int64_t v) const {
    const auto m = static_cast<std::int64_t>(p);
    std::int64_t r = v % m;
    if (r < 0) r += m;
    return static_cast<Fp>(r);
}

std::int64_t PrimeField::to_signed(Fp a) const {
    const auto s = static_cast<std::int64_t>(a);
    return a > p / 2 ? s - static_cast<std::int64_t>(p) : s;
}

Fp PrimeField::primitive_root() const {
    std::vector<std::uint64_t> factors;
    std::uint64_t n = p - 1;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            factors.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) factors.push_back(n);
    for (Fp g = 2; g < p; ++g) {
        bool ok = true;
        for (auto q : factors)
            if (pow(g, (p - 1) / q) == 1) ok = false;
        if (ok) return g;
    }
    return 1;
}

FpMatrix::FpMatrix(int rows, int cols, std::uint64_t p)
    : rows_(rows), cols_(cols), field_(p), data_(static_cast<std::size_t>(rows) * cols, 0) {}

FpMatrix FpMatrix::identity(int n, std::uint64_t p) {
    FpMatrix m(n, n, p);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

FpMatrix FpMatrix::from_columns(const std::vector<std::vector<Fp>>& cols, int rows, std::uint64_t p) {
    FpMatrix m(rows, static_cast<int>(cols.size()), p);
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (int r = 0; r < rows; ++r) m.at(r, static_cast<int>(c)) = cols[c][r] % p;
    return m;
}

FpMatrix FpMatrix::operator*(const FpMatrix& o) const {
    if (cols_ != o.rows_ || prime() != o.prime()) throw FieldError("matrix product shape mismatch");
    FpMatrix out(rows_, o.cols_, prime());
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Fp a = at(i, k);
            if (a == 0) continue;
            for (int j = 0; j < o.cols_; ++j) out.at(i, j) = field_.add(out.at(i, j), field_.mul(a, o.at(k, j)));
        }
    return out;
}

FpMatrix FpMatrix::operator-(const FpMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || prime() != o.prime()) throw FieldError("matrix difference shape mismatch");
    FpMatrix out(rows_, cols_, prime());
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = field_.sub(data_[i], o.data_[i]);
    return out;
}

FpMatrix FpMatrix::operator+(const FpMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || prime() != o.prime()) throw FieldError("matrix sum shape mismatch");
    FpMatrix out(rows_, cols_, prime());
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = field_.add(data_[i], o.data_[i]);
    return out;
}

bool FpMatrix::is_zero() const {
    for (Fp v : data_)
        if (v) return false;
    return true;
}

bool FpMatrix::operator==(const FpMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && prime() == o.prime() && data_ == o.data_;
}

FpMatrix FpMatrix::rref(std::vector<int>* pivots) const {
    FpMatrix m = *this;
    if (pivots) pivots->clear();
    int row = 0;
    for (int c = 0; c < cols_ && row < rows_; ++c) {
        int piv = -1;
        for (int r = row; r < rows_; ++r)
            if (m.at(r, c)) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < cols_; ++j) std::swap(m.at(piv, j), m.at(row, j));
        const Fp inv = field_.inv(m.at(row, c));
        for (int j = 0; j < cols_; ++j) m.at(row, j) = field_.mul(m.at(row, j), inv);
        for (int r = 0; r < rows_; ++r) {
            if (r == row || m.at(r, c) == 0) continue;
            const Fp f = m.at(r, c);
            for (int j = 0; j < cols_; ++j) m.at(r, j) = field_.sub(m.at(r, j), field_.mul(f, m.at(row, j)));
        }
        if (pivots) pivots->push_back(c);
        ++row;
    }
    return m;
}

int FpMatrix::rank() const {
    std::vector<int> piv;
    rref(&piv);
    return static_cast<int>(piv.size());
}

std::vector<std::vector<Fp>> FpMatrix::nullspace() const {
    std::vector<int> piv;
    const FpMatrix r = rref(&piv);
    std::vector<int> is_pivot(cols_, -1);
    for (std::size_t i = 0; i < piv.size(); ++i) is_pivot[piv[i]] = static_cast<int>(i);
    std::vector<std::vector<Fp>> basis;
    for (int free = 0; free < cols_; ++free) {
        if (is_pivot[free] >= 0) continue;
        std::vector<Fp> v(cols_, 0);
        v[free] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = field_.neg(r.at(static_cast<int>(i), free));
        basis.push_back(std::move(v));
    }
    return basis;
}

int span_rank(const std::vector<std::vector<Fp>>& vectors, int length, std::uint64_t p) {
    if (vectors.empty()) return 0;
    return FpMatrix::from_columns(vectors, length, p).rank();
}

}  // namespace spinelab
