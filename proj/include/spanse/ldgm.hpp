#pragma once

// Secret QC-LDGM code: sparse binary generator G of row weight w_g and a
// systematic parity-check matrix H = [-W^T | I_r] with G ~ [I_k | W].

#include <optional>

#include "spanse/params.hpp"
#include "spanse/qc.hpp"

namespace spanse {

struct LdgmCode {
    QCMatrix G;  // k0 x n0 blocks, binary, every expanded row of weight w_g
    QCMatrix H;  // r0 x n0 blocks, right r x r part is the identity

    friend bool operator==(const LdgmCode&, const LdgmCode&) = default;
};

// Each block row gets w_g ones at uniform distinct positions of its n-long
// first row; the circulant structure fixes the remaining rows.
QCMatrix sample_generator(const ParameterSet& params, RandomSource& rng);

// nullopt when the left k0 x k0 block part of G is singular.
std::optional<QCMatrix> systematic_parity_check(const QCMatrix& G);

// Samples G until it is reducible; throws KeygenError after max_tries.
LdgmCode generate_code(const ParameterSet& params, RandomSource& rng, unsigned max_tries = 100);

// Sum of m_g distinct uniformly chosen rows of expand(G), over F_q.
SparseVector random_codeword(const QCMatrix& G, unsigned m_g, RandomSource& rng);

}  // namespace spanse
