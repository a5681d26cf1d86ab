#pragma once

// One-time signatures over a hidden QC-LDGM code.
//
//   keygen:  H' = P^-1 * H * S^-1, with P^-1 acting on columns; in terms of
//            the row action stored in QCPermutation this is P.matrix() * H * S^-1
//   sign:    s = F_theta(H(m)), s' = P s, e = [0_k | s'], sigma = (e + c) S^T,
//            resampling the codeword c until sigma has no zero entry
//   verify:  sigma zero-free, weight(s*) = w, H' sigma^T = s*
//
// A private key must sign at most one message. Nothing here enforces that.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "spanse/hash.hpp"
#include "spanse/ldgm.hpp"
#include "spanse/params.hpp"
#include "spanse/qc.hpp"

namespace spanse {

using Bytes = std::vector<std::uint8_t>;

struct PrivateKey {
    ParameterSet params;
    QCPermutation P;
    LdgmCode code;
    QCMatrix S;
    // Filled by keygen; not part of the serialized form.
    std::optional<QCMatrix> S_inv;

    // Equality ignores the cached inverse.
    friend bool operator==(const PrivateKey& a, const PrivateKey& b) {
        return a.params == b.params && a.P == b.P && a.code == b.code && a.S == b.S;
    }
};

struct PublicKey {
    ParameterSet params;
    QCMatrix H_pub;  // r0 x n0 blocks

    friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

struct Signature {
    DenseVector sigma;  // n symbols, all nonzero
    Bytes theta;

    friend bool operator==(const Signature&, const Signature&) = default;
};

struct KeyPair {
    PrivateKey priv;
    PublicKey pub;
};

// S blocks drawn coefficient-wise from params.density.
QCMatrix sample_scrambler(const ParameterSet& params, RandomSource& rng);

KeyPair keygen(const ParameterSet& params, RandomSource& rng, unsigned max_tries = 100);

// H(m) = SHA3-256(tag || m)
Digest message_hash(std::span<const std::uint8_t> message);

// F_theta(H(m)): binary, length r, weight exactly w.
SparseVector derive_syndrome(std::span<const std::uint8_t> message, std::span<const std::uint8_t> theta,
                             const ParameterSet& params);

enum class ThetaMode { deterministic, randomized };

Bytes choose_theta(std::span<const std::uint8_t> message, ThetaMode mode, RandomSource& rng);

struct SignResult {
    Signature signature;
    unsigned attempts;
};

// Throws SignError after params.max_sign_attempts rejections.
SignResult sign(const PrivateKey& sk, std::span<const std::uint8_t> message, ThetaMode mode, RandomSource& rng);

// sigma = (e + c) S^T for a given syndrome and codeword; exposed for tests
// and the Monte Carlo estimator.
DenseVector signature_candidate(const PrivateKey& sk, const SparseVector& permuted_syndrome,
                                const SparseVector& codeword);

enum class VerifyStatus { accept, zero_entry, weight, syndrome_mismatch, parse };

std::string_view to_string(VerifyStatus status);

VerifyStatus verify(const PublicKey& pk, std::span<const std::uint8_t> message, const Signature& sig);

}  // namespace spanse
