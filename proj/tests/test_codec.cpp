#include <gtest/gtest.h>

#include "spanse/codec.hpp"
#include "spanse/errors.hpp"
#include "spanse/hash.hpp"
#include "spanse/random.hpp"

using namespace spanse;

namespace {

struct Objects {
    KeyPair kp;
    Bytes message;
    Signature sig;
};

const Objects& objects() {
    static const Objects o = [] {
        auto rng = ShakeDrbg::from_seed(77);
        auto kp = keygen(*find_parameter_set("desk"), rng);
        Bytes m{'h', 'i'};
        auto sig = sign(kp.priv, m, ThetaMode::randomized, rng).signature;
        return Objects{std::move(kp), m, std::move(sig)};
    }();
    return o;
}

// Replaces the checksum trailer so edits reach the structural checks.
Bytes reseal(Bytes f) {
    f.resize(f.size() - kChecksumBytes);
    const Digest d = sha3_256({f});
    f.insert(f.end(), d.begin(), d.end());
    return f;
}

}  // namespace

TEST(Codec, RoundTripEveryObjectType) {
    const auto& o = objects();
    const auto& params = o.kp.pub.params;

    auto bp = serialize(params);
    EXPECT_EQ(peek_object_type(bp), ObjectType::params);
    EXPECT_EQ(deserialize_params(bp), params);

    auto bpub = serialize(o.kp.pub);
    EXPECT_EQ(peek_object_type(bpub), ObjectType::public_key);
    EXPECT_EQ(deserialize_public_key(bpub), o.kp.pub);
    EXPECT_EQ(bpub.size(), framing_size(params) + params.r() * params.n0);

    auto bpriv = serialize(o.kp.priv);
    EXPECT_EQ(peek_object_type(bpriv), ObjectType::private_key);
    auto priv = deserialize_private_key(bpriv);
    EXPECT_EQ(priv, o.kp.priv);
    EXPECT_EQ(serialize(priv), bpriv);

    auto bsig = serialize(params, o.sig);
    EXPECT_EQ(peek_object_type(bsig), ObjectType::signature);
    auto sm = deserialize_signature(bsig);
    EXPECT_EQ(sm.params, params);
    EXPECT_EQ(sm.signature, o.sig);
    EXPECT_EQ(bsig.size(), framing_size(params) + 2 + o.sig.theta.size() + params.n());
}

TEST(Codec, ReloadedPrivateKeyStillSigns) {
    const auto& o = objects();
    auto priv = deserialize_private_key(serialize(o.kp.priv));
    auto rng = ShakeDrbg::from_seed(78);
    auto sig = sign(priv, o.message, ThetaMode::randomized, rng).signature;
    EXPECT_EQ(verify(o.kp.pub, o.message, sig), VerifyStatus::accept);
}

TEST(Codec, NonDefaultDensityRoundTrips) {
    auto p = *find_parameter_set("desk");
    p.density = DensityPolynomial::parse("0.5783,0.4167,0.0042,13:0.00083");
    EXPECT_EQ(deserialize_params(serialize(p)), p);
}

TEST(Codec, EveryTruncationIsRejected) {
    const auto& o = objects();
    const auto& params = o.kp.pub.params;
    const Bytes files[] = {serialize(params), serialize(o.kp.pub), serialize(o.kp.priv), serialize(params, o.sig)};
    for (const auto& f : files)
        for (std::size_t len = 0; len < f.size(); ++len) {
            std::span<const std::uint8_t> cut(f.data(), len);
            switch (f[6]) {
                case 1: EXPECT_THROW(deserialize_params(cut), ParseError); break;
                case 2: EXPECT_THROW(deserialize_public_key(cut), ParseError); break;
                case 3: EXPECT_THROW(deserialize_private_key(cut), ParseError); break;
                default: EXPECT_THROW(deserialize_signature(cut), ParseError); break;
            }
        }
}

TEST(Codec, ChecksumCatchesEveryByteFlip) {
    const auto& o = objects();
    const Bytes files[] = {serialize(o.kp.pub.params), serialize(o.kp.pub), serialize(o.kp.priv)};
    for (const auto& f : files)
        for (std::size_t at = 0; at < f.size(); at += 7) {
            Bytes bad = f;
            bad[at] ^= 0x10;
            switch (f[6]) {
                case 1: EXPECT_THROW(deserialize_params(bad), ParseError); break;
                case 2: EXPECT_THROW(deserialize_public_key(bad), ParseError); break;
                default: EXPECT_THROW(deserialize_private_key(bad), ParseError); break;
            }
        }
}

TEST(Codec, StructuralErrors) {
    const auto& o = objects();
    const auto pub = serialize(o.kp.pub);
    const std::size_t last = pub.size() - kChecksumBytes - 1;
    ASSERT_NO_THROW(deserialize_public_key(reseal(pub)));

    auto bad = pub;
    bad[0] = 'X';
    EXPECT_THROW(deserialize_public_key(reseal(bad)), ParseError);

    bad = pub;
    bad[4] = 2;  // version
    EXPECT_THROW(deserialize_public_key(reseal(bad)), ParseError);

    EXPECT_THROW(deserialize_private_key(pub), ParseError);
    EXPECT_THROW(deserialize_signature(pub), ParseError);

    bad = pub;
    bad.insert(bad.begin() + static_cast<long>(last + 1), 0);
    EXPECT_THROW(deserialize_public_key(reseal(bad)), ParseError);

    bad = pub;
    bad[last] = 200;  // symbol >= q
    EXPECT_THROW(deserialize_public_key(reseal(bad)), ParseError);

    bad = pub;
    bad[7] = 128;  // q = 128 is not prime
    EXPECT_THROW(deserialize_public_key(reseal(bad)), ParseError);

    auto sig = serialize(o.kp.pub.params, o.sig);
    sig[sig.size() - kChecksumBytes - 1] = 0;  // zero symbol parses; verification rejects it
    auto sm = deserialize_signature(reseal(sig));
    EXPECT_EQ(verify(o.kp.pub, o.message, sm.signature), VerifyStatus::zero_entry);
}

TEST(Codec, MutatedFilesNeverVerify) {
    // A mutation must either fail to parse or yield an object that no longer
    // verifies. Odd trials fix up the checksum, as a forger would, and edit
    // the key material or any signature byte.
    const auto& o = objects();
    const auto& params = o.kp.pub.params;
    FastRng rng(79);
    const Bytes pub = serialize(o.kp.pub), sig = serialize(params, o.sig);
    const std::size_t key_start = header_size(params);
    int parse_rejects = 0, verify_rejects = 0;
    for (int t = 0; t < 800; ++t) {
        const bool on_pub = t % 4 < 2;
        const bool fix_up = t % 2 == 1;
        Bytes f = on_pub ? pub : sig;
        const std::size_t lo = on_pub && fix_up ? key_start : 0;
        const std::size_t hi = fix_up ? f.size() - kChecksumBytes : f.size();
        const std::size_t at = lo + rng.uniform(hi - lo);
        f[at] ^= static_cast<std::uint8_t>(1 + rng.uniform(255));
        if (fix_up) f = reseal(std::move(f));
        try {
            VerifyStatus st;
            if (on_pub) {
                st = verify(deserialize_public_key(f), o.message, o.sig);
            } else {
                auto sm = deserialize_signature(f);
                st = sm.params == params ? verify(o.kp.pub, o.message, sm.signature) : VerifyStatus::parse;
            }
            EXPECT_NE(st, VerifyStatus::accept) << "byte " << at;
            ++verify_rejects;
        } catch (const ParseError&) {
            ++parse_rejects;
        }
    }
    EXPECT_GT(parse_rejects, 0);
    EXPECT_GT(verify_rejects, 0);
}
