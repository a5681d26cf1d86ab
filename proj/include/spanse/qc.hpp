#pragma once

// Quasi-cyclic algebra: the ring R_p = F_q[x]/(x^p - 1) of circulant
// polynomials, block matrices over it, and QC permutations.
//
// A p x p circulant block with first row (a_0 ... a_{p-1}) is stored as the
// polynomial a(x) = sum a_i x^i; row r of the block is the first row
// cyclically shifted right r times.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spanse/field.hpp"

namespace spanse {

class RandomSource;

class Ring {
public:
    Ring(unsigned p, unsigned q);

    unsigned degree() const noexcept { return p_; }
    unsigned modulus() const noexcept { return field_.modulus(); }
    const FieldParams& field() const noexcept { return field_; }

    friend bool operator==(const Ring&, const Ring&) = default;

private:
    unsigned p_;
    FieldParams field_;
};

using Coeffs = std::vector<std::uint8_t>;

class CirculantPoly {
public:
    // coeffs[i] is the coefficient of x^i; exactly p canonical residues.
    CirculantPoly(const Ring& ring, Coeffs coeffs);

    static CirculantPoly zero(const Ring& ring);
    static CirculantPoly one(const Ring& ring);
    static CirculantPoly monomial(const Ring& ring, unsigned exponent, std::uint8_t coeff = 1);

    const Ring& ring() const noexcept { return ring_; }
    std::span<const std::uint8_t> coeffs() const noexcept { return coeffs_; }
    FieldElement coeff(unsigned i) const { return {ring_.field(), coeffs_.at(i)}; }
    bool is_zero() const noexcept;
    unsigned weight() const noexcept;

    friend bool operator==(const CirculantPoly&, const CirculantPoly&) = default;

private:
    Ring ring_;
    Coeffs coeffs_;
};

CirculantPoly poly_add(const CirculantPoly& a, const CirculantPoly& b);
CirculantPoly poly_sub(const CirculantPoly& a, const CirculantPoly& b);
CirculantPoly poly_neg(const CirculantPoly& a);
CirculantPoly poly_mul(const CirculantPoly& a, const CirculantPoly& b);
// a(x^-1): the polynomial of the transposed circulant block.
CirculantPoly poly_transpose(const CirculantPoly& a);
// Inverse in R_p, or nullopt when gcd(a(x), x^p - 1) != 1.
std::optional<CirculantPoly> poly_inv(const CirculantPoly& a);

// Row-major matrix over F_q; used for expansions and the inversion fallback.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    unsigned q = 0;
    std::vector<std::uint8_t> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c, unsigned modulus) : rows(r), cols(c), q(modulus), data(r * c, 0) {}

    std::uint8_t& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    std::uint8_t at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;
};

std::size_t dense_rank(DenseMatrix m);
std::optional<DenseMatrix> dense_inverse(const DenseMatrix& m);

class QCMatrix {
public:
    // All-zero matrix of rows0 x cols0 circulant blocks.
    QCMatrix(const Ring& ring, std::size_t rows0, std::size_t cols0);

    static QCMatrix identity(const Ring& ring, std::size_t size0);

    const Ring& ring() const noexcept { return ring_; }
    std::size_t rows0() const noexcept { return rows0_; }
    std::size_t cols0() const noexcept { return cols0_; }
    std::size_t rows() const noexcept { return rows0_ * ring_.degree(); }
    std::size_t cols() const noexcept { return cols0_ * ring_.degree(); }

    std::span<const std::uint8_t> block(std::size_t i, std::size_t j) const;
    std::span<std::uint8_t> block(std::size_t i, std::size_t j);
    CirculantPoly poly(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, const CirculantPoly& a);
    bool block_is_zero(std::size_t i, std::size_t j) const;

    // Contiguous block-row-major coefficient storage.
    std::span<const std::uint8_t> raw() const noexcept { return data_; }
    std::span<std::uint8_t> raw() noexcept { return data_; }

    friend bool operator==(const QCMatrix&, const QCMatrix&) = default;

private:
    Ring ring_;
    std::size_t rows0_;
    std::size_t cols0_;
    std::vector<std::uint8_t> data_;
};

QCMatrix qc_mat_add(const QCMatrix& a, const QCMatrix& b);
QCMatrix qc_mat_neg(const QCMatrix& a);
QCMatrix qc_mat_mul(const QCMatrix& a, const QCMatrix& b);
QCMatrix qc_transpose(const QCMatrix& a);
// Blocks [row0, row0+rows0) x [col0, col0+cols0).
QCMatrix qc_submatrix(const QCMatrix& a, std::size_t row0, std::size_t col0, std::size_t rows0, std::size_t cols0);
// [a | b]
QCMatrix qc_hconcat(const QCMatrix& a, const QCMatrix& b);

// Inverse of a square QC matrix, or nullopt when singular. Block Gauss-Jordan
// over R_p first; dense elimination over F_q when no column offers a unit
// pivot.
std::optional<QCMatrix> qc_mat_inv(const QCMatrix& a);

DenseMatrix expand(const QCMatrix& a);
// Inverse of expand(); nullopt when m is not block-circulant.
std::optional<QCMatrix> fold(const DenseMatrix& m, const Ring& ring);

using DenseVector = std::vector<std::uint8_t>;

class SparseVector {
public:
    struct Entry {
        std::uint32_t index;
        std::uint8_t value;
        friend bool operator==(const Entry&, const Entry&) = default;
    };

    SparseVector() = default;
    // Entries need not be sorted; duplicates and zero values are rejected.
    SparseVector(std::size_t length, std::vector<Entry> entries);

    static SparseVector from_dense(std::span<const std::uint8_t> v);

    std::size_t length() const noexcept { return length_; }
    std::span<const Entry> support() const noexcept { return entries_; }
    std::size_t weight() const noexcept { return entries_.size(); }
    DenseVector to_dense() const;

    friend bool operator==(const SparseVector&, const SparseVector&) = default;

private:
    std::size_t length_ = 0;
    std::vector<Entry> entries_;
};

// Row vector times matrix: v * A.
DenseVector qc_vec_mul(std::span<const std::uint8_t> v, const QCMatrix& a);
DenseVector qc_vec_mul(const SparseVector& v, const QCMatrix& a);
// v * A^T without forming the transpose.
DenseVector qc_vec_mul_transposed(const SparseVector& v, const QCMatrix& a);
// A * v^T, returned as a flat vector.
DenseVector qc_mat_vec(const QCMatrix& a, std::span<const std::uint8_t> v);

// QC permutation: block row i holds the monomial x^{shift[i]} in block column
// perm[i]. As a row-vector action it sends index i*p + a to
// perm[i]*p + (a + shift[i]) mod p.
class QCPermutation {
public:
    QCPermutation(unsigned p, std::vector<std::uint32_t> block_perm, std::vector<std::uint32_t> shifts);

    static QCPermutation identity(unsigned p, std::size_t blocks);
    static QCPermutation random(unsigned p, std::size_t blocks, RandomSource& rng);

    unsigned degree() const noexcept { return p_; }
    std::size_t blocks() const noexcept { return perm_.size(); }
    std::size_t size() const noexcept { return perm_.size() * p_; }
    std::span<const std::uint32_t> block_perm() const noexcept { return perm_; }
    std::span<const std::uint32_t> shifts() const noexcept { return shifts_; }

    std::size_t map_index(std::size_t j) const;
    QCPermutation inverse() const;
    // Block matrix whose row-vector action is map_index.
    QCMatrix matrix(const Ring& ring) const;

    friend bool operator==(const QCPermutation&, const QCPermutation&) = default;

private:
    unsigned p_;
    std::vector<std::uint32_t> perm_;
    std::vector<std::uint32_t> shifts_;
};

// Moves every support index through P.map_index; weight is preserved.
SparseVector perm_apply(const QCPermutation& perm, const SparseVector& s);

}  // namespace spanse
