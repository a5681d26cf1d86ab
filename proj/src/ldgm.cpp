#include "spanse/ldgm.hpp"

#include <string>

#include "spanse/errors.hpp"
#include "spanse/random.hpp"

namespace spanse {

QCMatrix sample_generator(const ParameterSet& params, RandomSource& rng) {
    const Ring ring(params.p, params.q);
    if (params.w_g < 1 || params.w_g > params.n()) throw ParameterError("need 1 <= w_g <= n");
    QCMatrix G(ring, params.k0, params.n0);
    for (std::size_t i = 0; i < params.k0; ++i)
        for (auto pos : sample_distinct(rng, static_cast<std::uint32_t>(params.n()), params.w_g))
            G.block(i, pos / params.p)[pos % params.p] = 1;
    return G;
}

std::optional<QCMatrix> systematic_parity_check(const QCMatrix& G) {
    const std::size_t k0 = G.rows0();
    if (k0 == 0 || k0 >= G.cols0()) throw ParameterError("generator must have fewer block rows than block columns");
    const std::size_t r0 = G.cols0() - k0;
    auto m1_inv = qc_mat_inv(qc_submatrix(G, 0, 0, k0, k0));
    if (!m1_inv) return std::nullopt;
    const QCMatrix W = qc_mat_mul(*m1_inv, qc_submatrix(G, 0, k0, k0, r0));
    return qc_hconcat(qc_mat_neg(qc_transpose(W)), QCMatrix::identity(G.ring(), r0));
}

LdgmCode generate_code(const ParameterSet& params, RandomSource& rng, unsigned max_tries) {
    for (unsigned attempt = 0; attempt < max_tries; ++attempt) {
        QCMatrix G = sample_generator(params, rng);
        if (auto H = systematic_parity_check(G)) return {std::move(G), std::move(*H)};
    }
    throw KeygenError("no generator with invertible left block part after " + std::to_string(max_tries) + " samples");
}

SparseVector random_codeword(const QCMatrix& G, unsigned m_g, RandomSource& rng) {
    const unsigned p = G.ring().degree();
    const unsigned q = G.ring().modulus();
    if (m_g > G.rows()) throw ParameterError("m_g exceeds the code dimension");
    DenseVector acc(G.cols(), 0);
    for (auto row : sample_distinct(rng, static_cast<std::uint32_t>(G.rows()), m_g)) {
        const std::size_t blk = row / p;
        const unsigned shift = row % p;
        for (std::size_t j = 0; j < G.cols0(); ++j) {
            auto b = G.block(blk, j);
            for (unsigned t = 0; t < p; ++t) {
                if (!b[t]) continue;
                auto& slot = acc[j * p + (t + shift) % p];
                slot = static_cast<std::uint8_t>((slot + b[t]) % q);
            }
        }
    }
    return SparseVector::from_dense(acc);
}

}  // namespace spanse
