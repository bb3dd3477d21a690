#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace spinelab {

class FieldError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Fp = std::uint64_t;

// Arithmetic in F_p for an odd prime p < 2^61.
struct PrimeField {
    std::uint64_t p = 3;

    explicit PrimeField(std::uint64_t prime);

    Fp add(Fp a, Fp b) const { return (a + b) % p; }
    Fp sub(Fp a, Fp b) const { return (a + p - b) % p; }
    Fp neg(Fp a) const { return a == 0 ? 0 : p - a; }
    Fp mul(Fp a, Fp b) const {
        return static_cast<Fp>((static_cast<unsigned __int128>(a) * b) % p);
    }
    Fp pow(Fp a, std::uint64_t e) const;
    Fp inv(Fp a) const;
    Fp from_int(std::int64_t v) const;
    // Representative in (-p/2, p/2].
    std::int64_t to_signed(Fp a) const;
    // A generator of the multiplicative group.
    Fp primitive_root() const;
};

bool is_prime(std::uint64_t n);

class FpMatrix {
public:
    FpMatrix() = default;
    FpMatrix(int rows, int cols, std::uint64_t p);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::uint64_t prime() const { return field_.p; }
    const PrimeField& field() const { return field_; }

    Fp& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    Fp at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    FpMatrix operator*(const FpMatrix& o) const;
    FpMatrix operator-(const FpMatrix& o) const;
    FpMatrix operator+(const FpMatrix& o) const;
    bool is_zero() const;
    bool operator==(const FpMatrix& o) const;

    int rank() const;
    // Basis of {x : A x = 0}, each vector of length cols().
    std::vector<std::vector<Fp>> nullspace() const;
    // Reduced row echelon form; pivots receives pivot columns.
    FpMatrix rref(std::vector<int>* pivots = nullptr) const;

    static FpMatrix identity(int n, std::uint64_t p);
    // Matrix whose columns are the given vectors (all of length `rows`).
    static FpMatrix from_columns(const std::vector<std::vector<Fp>>& cols, int rows, std::uint64_t p);

private:
    int rows_ = 0;
    int cols_ = 0;
    PrimeField field_{3};
    std::vector<Fp> data_;
};

// Rank of the span of the given vectors.
int span_rank(const std::vector<std::vector<Fp>>& vectors, int length, std::uint64_t p);

}  // namespace spinelab
