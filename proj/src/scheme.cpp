#include "spanse/scheme.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <string>

#include "spanse/errors.hpp"
#include "spanse/hash.hpp"
#include "spanse/random.hpp"

namespace spanse {

namespace {

constexpr std::string_view kTagMessage = "SPANSE-H";
constexpr std::string_view kTagTheta = "SPANSE-THETA";
constexpr std::string_view kTagSyndrome = "SPANSE-F";

bool zero_free(std::span<const std::uint8_t> v) {
    return std::none_of(v.begin(), v.end(), [](std::uint8_t x) { return x == 0; });
}

}  // namespace

QCMatrix sample_scrambler(const ParameterSet& params, RandomSource& rng) {
    QCMatrix S(Ring(params.p, params.q), params.n0, params.n0);
    DensitySampler(params.density).fill(rng, S.raw());
    return S;
}

KeyPair keygen(const ParameterSet& params, RandomSource& rng, unsigned max_tries) {
    params.validate();
    LdgmCode code = generate_code(params, rng, max_tries);
    QCPermutation P = QCPermutation::random(params.p, params.r0(), rng);
    const Ring ring(params.p, params.q);

    for (unsigned attempt = 0; attempt < max_tries; ++attempt) {
        QCMatrix S = sample_scrambler(params, rng);
        auto S_inv = qc_mat_inv(S);
        if (!S_inv) continue;
        // P's row-vector action is the signer's s -> s' map, so as a column
        // operator the signer applies P^T and the public key needs (P^T)^-1 = P.
        QCMatrix H_pub = qc_mat_mul(qc_mat_mul(P.matrix(ring), code.H), *S_inv);
        PrivateKey priv{params, std::move(P), std::move(code), std::move(S), std::move(S_inv)};
        return {std::move(priv), PublicKey{params, std::move(H_pub)}};
    }
    throw KeygenError("scrambling matrix S singular in " + std::to_string(max_tries) +
                      " samples; check the density polynomial");
}

Digest message_hash(std::span<const std::uint8_t> message) { return sha3_256({as_bytes(kTagMessage), message}); }

SparseVector derive_syndrome(std::span<const std::uint8_t> message, std::span<const std::uint8_t> theta,
                             const ParameterSet& params) {
    const std::uint32_t r = static_cast<std::uint32_t>(params.r());
    if (params.w > r) throw ParameterError("syndrome weight exceeds r");
    const Digest h = message_hash(message);
    std::array<std::uint8_t, 4> theta_len{};
    for (int i = 0; i < 4; ++i) theta_len[i] = static_cast<std::uint8_t>(theta.size() >> (8 * i));
    Bytes seed;
    seed.insert(seed.end(), h.begin(), h.end());
    seed.insert(seed.end(), theta_len.begin(), theta_len.end());
    seed.insert(seed.end(), theta.begin(), theta.end());
    XofStream stream(kTagSyndrome, seed);

    // candidates are masked to the next power of two and rejected if >= r
    const std::uint32_t mask = r <= 1 ? 0u : (std::bit_ceil(r) - 1u);
    std::vector<SparseVector::Entry> support;
    support.reserve(params.w);
    std::vector<char> taken(r, 0);
    while (support.size() < params.w) {
        const std::uint32_t candidate = stream.next_u32() & mask;
        if (candidate >= r || taken[candidate]) continue;
        taken[candidate] = 1;
        support.push_back({candidate, 1});
    }
    return {r, std::move(support)};
}

Bytes choose_theta(std::span<const std::uint8_t> message, ThetaMode mode, RandomSource& rng) {
    if (mode == ThetaMode::deterministic) {
        const Digest d = sha3_256({as_bytes(kTagTheta), message});
        return Bytes(d.begin(), d.end());
    }
    Bytes theta(32);
    rng.fill(theta);
    return theta;
}

DenseVector signature_candidate(const PrivateKey& sk, const SparseVector& permuted_syndrome,
                                const SparseVector& codeword) {
    const std::size_t k = sk.params.k();
    const unsigned q = sk.params.q;
    if (permuted_syndrome.length() != sk.params.r() || codeword.length() != sk.params.n())
        throw ParameterError("signature_candidate: length mismatch");
    // e + c with e = [0_k | s']
    DenseVector v = codeword.to_dense();
    for (const auto& e : permuted_syndrome.support()) {
        auto& slot = v[k + e.index];
        slot = static_cast<std::uint8_t>((slot + e.value) % q);
    }
    return qc_vec_mul_transposed(SparseVector::from_dense(v), sk.S);
}

SignResult sign(const PrivateKey& sk, std::span<const std::uint8_t> message, ThetaMode mode, RandomSource& rng) {
    Bytes theta = choose_theta(message, mode, rng);
    const SparseVector s = derive_syndrome(message, theta, sk.params);
    const SparseVector s_perm = perm_apply(sk.P, s);
    for (unsigned attempt = 1; attempt <= sk.params.max_sign_attempts; ++attempt) {
        const SparseVector c = random_codeword(sk.code.G, sk.params.m_g, rng);
        DenseVector sigma = signature_candidate(sk, s_perm, c);
        if (zero_free(sigma)) return {Signature{std::move(sigma), std::move(theta)}, attempt};
    }
    throw SignError("no zero-free signature in " + std::to_string(sk.params.max_sign_attempts) +
                    " attempts; the density polynomial d(x) puts too much mass on large symbols");
}

std::string_view to_string(VerifyStatus status) {
    switch (status) {
        case VerifyStatus::accept: return "accept";
        case VerifyStatus::zero_entry: return "zero-entry";
        case VerifyStatus::weight: return "weight";
        case VerifyStatus::syndrome_mismatch: return "syndrome-mismatch";
        case VerifyStatus::parse: return "parse";
    }
    return "unknown";
}

VerifyStatus verify(const PublicKey& pk, std::span<const std::uint8_t> message, const Signature& sig) {
    const ParameterSet& params = pk.params;
    if (sig.sigma.size() != params.n() || pk.H_pub.rows() != params.r() || pk.H_pub.cols() != params.n())
        return VerifyStatus::parse;
    if (std::any_of(sig.sigma.begin(), sig.sigma.end(), [&](std::uint8_t x) { return x >= params.q; }))
        return VerifyStatus::parse;
    if (!zero_free(sig.sigma)) return VerifyStatus::zero_entry;
    const SparseVector s_star = derive_syndrome(message, sig.theta, params);
    if (s_star.weight() != params.w) return VerifyStatus::weight;
    if (qc_mat_vec(pk.H_pub, sig.sigma) != s_star.to_dense()) return VerifyStatus::syndrome_mismatch;
    return VerifyStatus::accept;
}

}  // namespace spanse
