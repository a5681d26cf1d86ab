#include "spanse/qc.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "spanse/errors.hpp"
#include "spanse/random.hpp"

namespace spanse {

Ring::Ring(unsigned p, unsigned q) : p_(p), field_(q) {
    if (p == 0) throw ParameterError("circulant size p must be positive");
}

namespace {

void require_ring(const Ring& a, const Ring& b) {
    if (!(a == b))
        throw ParameterError("ring mismatch: (p=" + std::to_string(a.degree()) + ", q=" + std::to_string(a.modulus()) +
                             ") vs (p=" + std::to_string(b.degree()) + ", q=" + std::to_string(b.modulus()) + ")");
}

// acc[(i + j) mod p] += a[i] * b[j]
void mul_acc(const std::uint8_t* a, const std::uint8_t* b, std::uint32_t* acc, unsigned p) {
    for (unsigned i = 0; i < p; ++i) {
        const std::uint32_t ai = a[i];
        if (ai == 0) continue;
        std::uint32_t* dst = acc + i;
        const unsigned head = p - i;
        for (unsigned j = 0; j < head; ++j) dst[j] += ai * b[j];
        std::uint32_t* wrap = acc;
        for (unsigned j = head; j < p; ++j) wrap[j - head] += ai * b[j];
    }
}

// Number of mul_acc calls that fit in a uint32 accumulator before reduction.
std::size_t accumulation_budget(const Ring& ring) {
    const std::uint64_t per = std::uint64_t{ring.degree()} * (ring.modulus() - 1) * (ring.modulus() - 1);
    const std::uint64_t budget = (std::numeric_limits<std::uint32_t>::max() - 256) / std::max<std::uint64_t>(per, 1);
    return static_cast<std::size_t>(std::max<std::uint64_t>(budget, 1));
}

void reduce(std::uint32_t* acc, std::size_t len, unsigned q) {
    for (std::size_t i = 0; i < len; ++i) acc[i] %= q;
}

bool all_zero(std::span<const std::uint8_t> s) {
    return std::all_of(s.begin(), s.end(), [](std::uint8_t v) { return v == 0; });
}

// Plain polynomials in F_q[x] (not reduced), lowest degree first, trimmed.
using Poly = std::vector<std::uint8_t>;

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_sub_plain(const Poly& a, const Poly& b, const FieldParams& f) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::uint8_t x = i < a.size() ? a[i] : 0;
        std::uint8_t y = i < b.size() ? b[i] : 0;
        r[i] = f.sub(x, y);
    }
    trim(r);
    return r;
}

Poly poly_mul_plain(const Poly& a, const Poly& b, const FieldParams& f) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
    trim(r);
    return r;
}

// a = quot * b + rem, b nonzero
void poly_divmod(Poly a, const Poly& b, const FieldParams& f, Poly& quot, Poly& rem) {
    quot.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
    const std::uint8_t lead_inv = f.inv(b.back());
    while (a.size() >= b.size() && !a.empty()) {
        const std::size_t shift = a.size() - b.size();
        const std::uint8_t factor = f.mul(a.back(), lead_inv);
        quot[shift] = factor;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = f.sub(a[shift + i], f.mul(factor, b[i]));
        trim(a);
    }
    rem = std::move(a);
    trim(quot);
}

}  // namespace

CirculantPoly::CirculantPoly(const Ring& ring, Coeffs coeffs) : ring_(ring), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != ring_.degree())
        throw ParameterError("circulant polynomial needs " + std::to_string(ring_.degree()) + " coefficients, got " +
                             std::to_string(coeffs_.size()));
    for (auto c : coeffs_)
        if (c >= ring_.modulus()) throw ParameterError("coefficient " + std::to_string(c) + " not reduced mod q");
}

CirculantPoly CirculantPoly::zero(const Ring& ring) { return {ring, Coeffs(ring.degree(), 0)}; }

CirculantPoly CirculantPoly::one(const Ring& ring) { return monomial(ring, 0); }

CirculantPoly CirculantPoly::monomial(const Ring& ring, unsigned exponent, std::uint8_t coeff) {
    Coeffs c(ring.degree(), 0);
    c[exponent % ring.degree()] = static_cast<std::uint8_t>(coeff % ring.modulus());
    return {ring, std::move(c)};
}

bool CirculantPoly::is_zero() const noexcept { return all_zero(coeffs_); }

unsigned CirculantPoly::weight() const noexcept {
    return static_cast<unsigned>(std::count_if(coeffs_.begin(), coeffs_.end(), [](auto v) { return v != 0; }));
}

CirculantPoly poly_add(const CirculantPoly& a, const CirculantPoly& b) {
    require_ring(a.ring(), b.ring());
    Coeffs c(a.ring().degree());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.ring().field().add(a.coeffs()[i], b.coeffs()[i]);
    return {a.ring(), std::move(c)};
}

CirculantPoly poly_neg(const CirculantPoly& a) {
    Coeffs c(a.coeffs().begin(), a.coeffs().end());
    for (auto& v : c) v = a.ring().field().neg(v);
    return {a.ring(), std::move(c)};
}

CirculantPoly poly_sub(const CirculantPoly& a, const CirculantPoly& b) { return poly_add(a, poly_neg(b)); }

CirculantPoly poly_mul(const CirculantPoly& a, const CirculantPoly& b) {
    require_ring(a.ring(), b.ring());
    const unsigned p = a.ring().degree();
    std::vector<std::uint32_t> acc(p, 0);
    mul_acc(a.coeffs().data(), b.coeffs().data(), acc.data(), p);
    Coeffs c(p);
    for (unsigned i = 0; i < p; ++i) c[i] = static_cast<std::uint8_t>(acc[i] % a.ring().modulus());
    return {a.ring(), std::move(c)};
}

CirculantPoly poly_transpose(const CirculantPoly& a) {
    const unsigned p = a.ring().degree();
    Coeffs c(p);
    for (unsigned i = 0; i < p; ++i) c[(p - i) % p] = a.coeffs()[i];
    return {a.ring(), std::move(c)};
}

std::optional<CirculantPoly> poly_inv(const CirculantPoly& a) {
    const Ring& ring = a.ring();
    const FieldParams& f = ring.field();
    const unsigned p = ring.degree();

    // Extended Euclid on (x^p - 1, a(x)), tracking only the cofactor of a.
    Poly r0(p + 1, 0);
    r0[0] = f.neg(1);
    r0[p] = 1;
    Poly r1(a.coeffs().begin(), a.coeffs().end());
    trim(r1);
    if (r1.empty()) return std::nullopt;
    Poly t0, t1{1};
    while (!r1.empty()) {
        Poly quot, rem;
        poly_divmod(r0, r1, f, quot, rem);
        Poly t2 = poly_sub_plain(t0, poly_mul_plain(quot, t1, f), f);
        r0 = std::move(r1);
        r1 = std::move(rem);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.size() != 1) return std::nullopt;
    const std::uint8_t scale = f.inv(r0[0]);
    Coeffs c(p, 0);
    for (std::size_t i = 0; i < t0.size(); ++i) c[i % p] = f.add(c[i % p], f.mul(t0[i], scale));
    return CirculantPoly(ring, std::move(c));
}

// --- dense ------------------------------------------------------------------

namespace {

// Reduces m to reduced row echelon form in place; returns the rank.
// When `aug` is non-null the same row operations are applied to it.
std::size_t gauss_jordan(DenseMatrix& m, DenseMatrix* aug) {
    const FieldParams f(m.q);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols && rank < m.rows; ++col) {
        std::size_t piv = rank;
        while (piv < m.rows && m.at(piv, col) == 0) ++piv;
        if (piv == m.rows) continue;
        if (piv != rank) {
            for (std::size_t c = 0; c < m.cols; ++c) std::swap(m.at(piv, c), m.at(rank, c));
            if (aug)
                for (std::size_t c = 0; c < aug->cols; ++c) std::swap(aug->at(piv, c), aug->at(rank, c));
        }
        const std::uint8_t inv = f.inv(m.at(rank, col));
        for (std::size_t c = 0; c < m.cols; ++c) m.at(rank, c) = f.mul(m.at(rank, c), inv);
        if (aug)
            for (std::size_t c = 0; c < aug->cols; ++c) aug->at(rank, c) = f.mul(aug->at(rank, c), inv);
        for (std::size_t r = 0; r < m.rows; ++r) {
            if (r == rank) continue;
            const std::uint8_t factor = m.at(r, col);
            if (factor == 0) continue;
            const std::uint8_t nf = f.neg(factor);
            for (std::size_t c = 0; c < m.cols; ++c)
                if (m.at(rank, c)) m.at(r, c) = f.add(m.at(r, c), f.mul(nf, m.at(rank, c)));
            if (aug)
                for (std::size_t c = 0; c < aug->cols; ++c)
                    if (aug->at(rank, c)) aug->at(r, c) = f.add(aug->at(r, c), f.mul(nf, aug->at(rank, c)));
        }
        ++rank;
    }
    return rank;
}

}  // namespace

std::size_t dense_rank(DenseMatrix m) { return gauss_jordan(m, nullptr); }

std::optional<DenseMatrix> dense_inverse(const DenseMatrix& m) {
    if (m.rows != m.cols) throw ParameterError("dense_inverse needs a square matrix");
    DenseMatrix work = m;
    DenseMatrix inv(m.rows, m.cols, m.q);
    for (std::size_t i = 0; i < m.rows; ++i) inv.at(i, i) = 1;
    if (gauss_jordan(work, &inv) < m.rows) return std::nullopt;
    return inv;
}

// --- QC matrices ------------------------------------------------------------

QCMatrix::QCMatrix(const Ring& ring, std::size_t rows0, std::size_t cols0)
    : ring_(ring), rows0_(rows0), cols0_(cols0), data_(rows0 * cols0 * ring.degree(), 0) {}

QCMatrix QCMatrix::identity(const Ring& ring, std::size_t size0) {
    QCMatrix m(ring, size0, size0);
    for (std::size_t i = 0; i < size0; ++i) m.block(i, i)[0] = 1;
    return m;
}

std::span<const std::uint8_t> QCMatrix::block(std::size_t i, std::size_t j) const {
    const unsigned p = ring_.degree();
    return std::span<const std::uint8_t>(data_).subspan((i * cols0_ + j) * p, p);
}

std::span<std::uint8_t> QCMatrix::block(std::size_t i, std::size_t j) {
    const unsigned p = ring_.degree();
    return std::span<std::uint8_t>(data_).subspan((i * cols0_ + j) * p, p);
}

CirculantPoly QCMatrix::poly(std::size_t i, std::size_t j) const {
    auto b = block(i, j);
    return {ring_, Coeffs(b.begin(), b.end())};
}

void QCMatrix::set(std::size_t i, std::size_t j, const CirculantPoly& a) {
    require_ring(ring_, a.ring());
    if (i >= rows0_ || j >= cols0_) throw ParameterError("block index out of range");
    std::copy(a.coeffs().begin(), a.coeffs().end(), block(i, j).begin());
}

bool QCMatrix::block_is_zero(std::size_t i, std::size_t j) const { return all_zero(block(i, j)); }

QCMatrix qc_mat_add(const QCMatrix& a, const QCMatrix& b) {
    require_ring(a.ring(), b.ring());
    if (a.rows0() != b.rows0() || a.cols0() != b.cols0()) throw ParameterError("qc_mat_add: dimension mismatch");
    QCMatrix r(a.ring(), a.rows0(), a.cols0());
    const auto& f = a.ring().field();
    for (std::size_t i = 0; i < r.raw().size(); ++i) r.raw()[i] = f.add(a.raw()[i], b.raw()[i]);
    return r;
}

QCMatrix qc_mat_neg(const QCMatrix& a) {
    QCMatrix r = a;
    for (auto& v : r.raw()) v = a.ring().field().neg(v);
    return r;
}

QCMatrix qc_mat_mul(const QCMatrix& a, const QCMatrix& b) {
    require_ring(a.ring(), b.ring());
    if (a.cols0() != b.rows0())
        throw ParameterError("qc_mat_mul: " + std::to_string(a.cols0()) + " block columns vs " +
                             std::to_string(b.rows0()) + " block rows");
    const unsigned p = a.ring().degree();
    const unsigned q = a.ring().modulus();
    const std::size_t budget = accumulation_budget(a.ring());

    std::vector<char> b_nonzero(b.rows0() * b.cols0());
    for (std::size_t k = 0; k < b.rows0(); ++k)
        for (std::size_t j = 0; j < b.cols0(); ++j) b_nonzero[k * b.cols0() + j] = !b.block_is_zero(k, j);

    QCMatrix r(a.ring(), a.rows0(), b.cols0());
    std::vector<std::uint32_t> acc(b.cols0() * p);
    for (std::size_t i = 0; i < a.rows0(); ++i) {
        std::fill(acc.begin(), acc.end(), 0);
        std::size_t used = 0;
        for (std::size_t k = 0; k < a.cols0(); ++k) {
            if (a.block_is_zero(i, k)) continue;
            const std::uint8_t* ak = a.block(i, k).data();
            for (std::size_t j = 0; j < b.cols0(); ++j)
                if (b_nonzero[k * b.cols0() + j]) mul_acc(ak, b.block(k, j).data(), acc.data() + j * p, p);
            if (++used == budget) {
                reduce(acc.data(), acc.size(), q);
                used = 0;
            }
        }
        for (std::size_t j = 0; j < b.cols0(); ++j) {
            auto dst = r.block(i, j);
            for (unsigned t = 0; t < p; ++t) dst[t] = static_cast<std::uint8_t>(acc[j * p + t] % q);
        }
    }
    return r;
}

QCMatrix qc_transpose(const QCMatrix& a) {
    const unsigned p = a.ring().degree();
    QCMatrix r(a.ring(), a.cols0(), a.rows0());
    for (std::size_t i = 0; i < a.rows0(); ++i)
        for (std::size_t j = 0; j < a.cols0(); ++j) {
            auto src = a.block(i, j);
            auto dst = r.block(j, i);
            for (unsigned t = 0; t < p; ++t) dst[(p - t) % p] = src[t];
        }
    return r;
}

QCMatrix qc_submatrix(const QCMatrix& a, std::size_t row0, std::size_t col0, std::size_t rows0, std::size_t cols0) {
    if (row0 + rows0 > a.rows0() || col0 + cols0 > a.cols0()) throw ParameterError("qc_submatrix out of range");
    QCMatrix r(a.ring(), rows0, cols0);
    for (std::size_t i = 0; i < rows0; ++i)
        for (std::size_t j = 0; j < cols0; ++j) {
            auto src = a.block(row0 + i, col0 + j);
            std::copy(src.begin(), src.end(), r.block(i, j).begin());
        }
    return r;
}

QCMatrix qc_hconcat(const QCMatrix& a, const QCMatrix& b) {
    require_ring(a.ring(), b.ring());
    if (a.rows0() != b.rows0()) throw ParameterError("qc_hconcat: block row mismatch");
    QCMatrix r(a.ring(), a.rows0(), a.cols0() + b.cols0());
    for (std::size_t i = 0; i < a.rows0(); ++i) {
        for (std::size_t j = 0; j < a.cols0(); ++j) std::ranges::copy(a.block(i, j), r.block(i, j).begin());
        for (std::size_t j = 0; j < b.cols0(); ++j) std::ranges::copy(b.block(i, j), r.block(i, a.cols0() + j).begin());
    }
    return r;
}

DenseMatrix expand(const QCMatrix& a) {
    const unsigned p = a.ring().degree();
    DenseMatrix m(a.rows(), a.cols(), a.ring().modulus());
    for (std::size_t i = 0; i < a.rows0(); ++i)
        for (std::size_t j = 0; j < a.cols0(); ++j) {
            auto blk = a.block(i, j);
            for (unsigned r = 0; r < p; ++r)
                for (unsigned c = 0; c < p; ++c) m.at(i * p + r, j * p + c) = blk[(c + p - r) % p];
        }
    return m;
}

std::optional<QCMatrix> fold(const DenseMatrix& m, const Ring& ring) {
    const unsigned p = ring.degree();
    if (m.q != ring.modulus() || m.rows % p || m.cols % p) return std::nullopt;
    QCMatrix a(ring, m.rows / p, m.cols / p);
    for (std::size_t i = 0; i < a.rows0(); ++i)
        for (std::size_t j = 0; j < a.cols0(); ++j) {
            auto blk = a.block(i, j);
            for (unsigned c = 0; c < p; ++c) blk[c] = m.at(i * p, j * p + c);
        }
    if (!(expand(a) == m)) return std::nullopt;
    return a;
}

namespace {

// row_dst[j] -= factor * row_src[j] for the given block columns.
void row_axpy(QCMatrix& m, std::size_t dst, std::size_t src, const std::uint8_t* neg_factor, std::uint32_t* acc,
              std::size_t col_begin) {
    const unsigned p = m.ring().degree();
    const unsigned q = m.ring().modulus();
    for (std::size_t j = col_begin; j < m.cols0(); ++j) {
        auto s = m.block(src, j);
        if (all_zero(s)) continue;
        auto d = m.block(dst, j);
        for (unsigned t = 0; t < p; ++t) acc[t] = d[t];
        mul_acc(neg_factor, s.data(), acc, p);
        for (unsigned t = 0; t < p; ++t) d[t] = static_cast<std::uint8_t>(acc[t] % q);
    }
}

void row_scale(QCMatrix& m, std::size_t row, const CirculantPoly& factor, std::uint32_t* acc) {
    const unsigned p = m.ring().degree();
    const unsigned q = m.ring().modulus();
    for (std::size_t j = 0; j < m.cols0(); ++j) {
        auto d = m.block(row, j);
        if (all_zero(d)) continue;
        std::fill(acc, acc + p, 0);
        mul_acc(factor.coeffs().data(), d.data(), acc, p);
        for (unsigned t = 0; t < p; ++t) d[t] = static_cast<std::uint8_t>(acc[t] % q);
    }
}

void swap_rows(QCMatrix& m, std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < m.cols0(); ++j) std::swap_ranges(m.block(a, j).begin(), m.block(a, j).end(), m.block(b, j).begin());
}

std::optional<QCMatrix> dense_fallback(const QCMatrix& a) {
    auto inv = dense_inverse(expand(a));
    if (!inv) return std::nullopt;
    return fold(*inv, a.ring());
}

}  // namespace

std::optional<QCMatrix> qc_mat_inv(const QCMatrix& a) {
    if (a.rows0() != a.cols0()) throw ParameterError("qc_mat_inv: matrix is not square");
    const std::size_t n0 = a.rows0();
    const unsigned p = a.ring().degree();
    QCMatrix work = a;
    QCMatrix inv = QCMatrix::identity(a.ring(), n0);
    std::vector<std::uint32_t> acc(p);
    std::vector<std::uint8_t> neg_factor(p);

    for (std::size_t col = 0; col < n0; ++col) {
        std::optional<CirculantPoly> pivot_inv;
        std::size_t piv = col;
        for (; piv < n0; ++piv) {
            if (work.block_is_zero(piv, col)) continue;
            pivot_inv = poly_inv(work.poly(piv, col));
            if (pivot_inv) break;
        }
        if (!pivot_inv) return dense_fallback(a);
        if (piv != col) {
            swap_rows(work, piv, col);
            swap_rows(inv, piv, col);
        }
        row_scale(work, col, *pivot_inv, acc.data());
        row_scale(inv, col, *pivot_inv, acc.data());
        for (std::size_t r = 0; r < n0; ++r) {
            if (r == col || work.block_is_zero(r, col)) continue;
            auto f = work.block(r, col);
            for (unsigned t = 0; t < p; ++t) neg_factor[t] = a.ring().field().neg(f[t]);
            row_axpy(work, r, col, neg_factor.data(), acc.data(), col);
            row_axpy(inv, r, col, neg_factor.data(), acc.data(), 0);
        }
    }
    return inv;
}

// --- vectors ----------------------------------------------------------------

SparseVector::SparseVector(std::size_t length, std::vector<Entry> entries)
    : length_(length), entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(), [](const Entry& x, const Entry& y) { return x.index < y.index; });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].index >= length_) throw ParameterError("sparse index out of range");
        if (entries_[i].value == 0) throw ParameterError("sparse vector stores a zero value");
        if (i && entries_[i].index == entries_[i - 1].index) throw ParameterError("duplicate sparse index");
    }
}

SparseVector SparseVector::from_dense(std::span<const std::uint8_t> v) {
    std::vector<Entry> e;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i]) e.push_back({static_cast<std::uint32_t>(i), v[i]});
    return {v.size(), std::move(e)};
}

DenseVector SparseVector::to_dense() const {
    DenseVector v(length_, 0);
    for (const auto& e : entries_) v[e.index] = e.value;
    return v;
}

DenseVector qc_vec_mul(std::span<const std::uint8_t> v, const QCMatrix& a) {
    if (v.size() != a.rows()) throw ParameterError("qc_vec_mul: vector length mismatch");
    const unsigned p = a.ring().degree();
    const unsigned q = a.ring().modulus();
    const std::size_t budget = accumulation_budget(a.ring());
    std::vector<std::uint32_t> acc(a.cols(), 0);
    std::size_t used = 0;
    for (std::size_t i = 0; i < a.rows0(); ++i) {
        auto vi = v.subspan(i * p, p);
        if (all_zero(vi)) continue;
        for (std::size_t j = 0; j < a.cols0(); ++j) mul_acc(vi.data(), a.block(i, j).data(), acc.data() + j * p, p);
        if (++used == budget) {
            reduce(acc.data(), acc.size(), q);
            used = 0;
        }
    }
    DenseVector out(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<std::uint8_t>(acc[i] % q);
    return out;
}

DenseVector qc_vec_mul(const SparseVector& v, const QCMatrix& a) {
    if (v.length() != a.rows()) throw ParameterError("qc_vec_mul: vector length mismatch");
    const unsigned p = a.ring().degree();
    const unsigned q = a.ring().modulus();
    std::vector<std::uint32_t> acc(a.cols(), 0);
    for (const auto& e : v.support()) {
        const std::size_t blk = e.index / p;
        const unsigned off = e.index % p;
        for (std::size_t j = 0; j < a.cols0(); ++j) {
            auto row = a.block(blk, j);
            std::uint32_t* dst = acc.data() + j * p;
            // row `off` of the circulant: coefficient t lands at (off + t) mod p
            for (unsigned t = 0; t < p; ++t) {
                unsigned pos = off + t;
                if (pos >= p) pos -= p;
                dst[pos] = (dst[pos] + std::uint32_t{e.value} * row[t]) % q;
            }
        }
    }
    return DenseVector(acc.begin(), acc.end());
}

DenseVector qc_vec_mul_transposed(const SparseVector& v, const QCMatrix& a) {
    if (v.length() != a.cols()) throw ParameterError("qc_vec_mul_transposed: vector length mismatch");
    const unsigned p = a.ring().degree();
    const unsigned q = a.ring().modulus();
    const std::size_t budget = accumulation_budget(a.ring()) * p;
    std::vector<std::uint32_t> acc(a.rows(), 0);
    std::size_t used = 0;
    for (const auto& e : v.support()) {
        const std::size_t blk = e.index / p;
        const unsigned off = e.index % p;
        for (std::size_t j = 0; j < a.rows0(); ++j) {
            // (A^T)_{blk,j} = transpose(A_{j,blk}); its row `off` puts A_{j,blk}[t] at (off - t) mod p
            auto col = a.block(j, blk);
            std::uint32_t* dst = acc.data() + j * p;
            for (unsigned t = 0; t <= off; ++t) dst[off - t] += std::uint32_t{e.value} * col[t];
            for (unsigned t = off + 1; t < p; ++t) dst[off + p - t] += std::uint32_t{e.value} * col[t];
        }
        if (++used == budget) {
            reduce(acc.data(), acc.size(), q);
            used = 0;
        }
    }
    DenseVector out(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<std::uint8_t>(acc[i] % q);
    return out;
}

DenseVector qc_mat_vec(const QCMatrix& a, std::span<const std::uint8_t> v) {
    if (v.size() != a.cols()) throw ParameterError("qc_mat_vec: vector length mismatch");
    const unsigned p = a.ring().degree();
    const unsigned q = a.ring().modulus();
    const std::size_t budget = accumulation_budget(a.ring());
    DenseVector out(a.rows());
    std::vector<std::uint32_t> acc(p);
    std::vector<std::uint8_t> tr(p);
    for (std::size_t i = 0; i < a.rows0(); ++i) {
        std::fill(acc.begin(), acc.end(), 0);
        std::size_t used = 0;
        for (std::size_t j = 0; j < a.cols0(); ++j) {
            auto blk = a.block(i, j);
            for (unsigned t = 0; t < p; ++t) tr[(p - t) % p] = blk[t];
            mul_acc(tr.data(), v.data() + j * p, acc.data(), p);
            if (++used == budget) {
                reduce(acc.data(), p, q);
                used = 0;
            }
        }
        for (unsigned t = 0; t < p; ++t) out[i * p + t] = static_cast<std::uint8_t>(acc[t] % q);
    }
    return out;
}

// --- permutations -----------------------------------------------------------

QCPermutation::QCPermutation(unsigned p, std::vector<std::uint32_t> block_perm, std::vector<std::uint32_t> shifts)
    : p_(p), perm_(std::move(block_perm)), shifts_(std::move(shifts)) {
    if (p_ == 0) throw ParameterError("permutation block size must be positive");
    if (perm_.size() != shifts_.size()) throw ParameterError("permutation and shift arrays differ in length");
    std::vector<char> seen(perm_.size(), 0);
    for (auto v : perm_) {
        if (v >= perm_.size() || seen[v]) throw ParameterError("block permutation is not a bijection");
        seen[v] = 1;
    }
    for (auto t : shifts_)
        if (t >= p_) throw ParameterError("circulant shift out of range");
}

QCPermutation QCPermutation::identity(unsigned p, std::size_t blocks) {
    std::vector<std::uint32_t> perm(blocks);
    std::iota(perm.begin(), perm.end(), 0u);
    return {p, std::move(perm), std::vector<std::uint32_t>(blocks, 0)};
}

QCPermutation QCPermutation::random(unsigned p, std::size_t blocks, RandomSource& rng) {
    std::vector<std::uint32_t> perm(blocks);
    std::iota(perm.begin(), perm.end(), 0u);
    for (std::size_t i = blocks; i > 1; --i) std::swap(perm[i - 1], perm[rng.uniform(i)]);
    std::vector<std::uint32_t> shifts(blocks);
    for (auto& t : shifts) t = static_cast<std::uint32_t>(rng.uniform(p));
    return {p, std::move(perm), std::move(shifts)};
}

std::size_t QCPermutation::map_index(std::size_t j) const {
    const std::size_t blk = j / p_;
    if (blk >= perm_.size()) throw ParameterError("index outside permutation");
    return std::size_t{perm_[blk]} * p_ + (j % p_ + shifts_[blk]) % p_;
}

QCPermutation QCPermutation::inverse() const {
    std::vector<std::uint32_t> perm(perm_.size()), shifts(perm_.size());
    for (std::size_t i = 0; i < perm_.size(); ++i) {
        perm[perm_[i]] = static_cast<std::uint32_t>(i);
        shifts[perm_[i]] = (p_ - shifts_[i]) % p_;
    }
    return {p_, std::move(perm), std::move(shifts)};
}

QCMatrix QCPermutation::matrix(const Ring& ring) const {
    if (ring.degree() != p_) throw ParameterError("permutation block size differs from ring degree");
    QCMatrix m(ring, perm_.size(), perm_.size());
    for (std::size_t i = 0; i < perm_.size(); ++i) m.block(i, perm_[i])[shifts_[i]] = 1;
    return m;
}

SparseVector perm_apply(const QCPermutation& perm, const SparseVector& s) {
    if (s.length() != perm.size()) throw ParameterError("perm_apply: length mismatch");
    std::vector<SparseVector::Entry> out;
    out.reserve(s.weight());
    for (const auto& e : s.support()) out.push_back({static_cast<std::uint32_t>(perm.map_index(e.index)), e.value});
    return {s.length(), std::move(out)};
}

}  // namespace spanse
