#include "spanse/codec.hpp"

#include <array>
#include <string>

#include "spanse/errors.hpp"
#include "spanse/hash.hpp"

namespace spanse {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'S', 'P', 'N', 'S'};

class Writer {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint32_t v) {
        if (v > 0xffff) throw ParameterError("value " + std::to_string(v) + " does not fit the u16 file field");
        for (int i = 0; i < 2; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
    // Appends SHA3-256 of everything written so far.
    Bytes seal() {
        const Digest d = sha3_256({out_});
        out_.insert(out_.end(), d.begin(), d.end());
        return std::move(out_);
    }

private:
    Bytes out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

    std::span<const std::uint8_t> take(std::size_t n) {
        if (data_.size() - pos_ < n) throw ParseError("truncated input at offset " + std::to_string(pos_));
        auto s = data_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    std::uint8_t u8() { return take(1)[0]; }
    std::uint16_t u16() {
        auto s = take(2);
        return static_cast<std::uint16_t>(s[0] | (s[1] << 8));
    }
    std::uint32_t u32() {
        auto s = take(4);
        return std::uint32_t{s[0]} | (std::uint32_t{s[1]} << 8) | (std::uint32_t{s[2]} << 16) |
               (std::uint32_t{s[3]} << 24);
    }
    // Symbols must be canonical residues.
    void symbols(std::span<std::uint8_t> dst, unsigned q) {
        auto s = take(dst.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] >= q) throw ParseError("symbol " + std::to_string(s[i]) + " is not below q=" + std::to_string(q));
            dst[i] = s[i];
        }
    }
    // Checks the payload length up front so no buffer is sized from an
    // unverified header.
    void expect_remaining(std::size_t n) const {
        const std::size_t left = data_.size() - pos_;
        if (left < n) throw ParseError("truncated input: " + std::to_string(left) + " of " + std::to_string(n) +
                                       " payload bytes");
        if (left > n) throw ParseError(std::to_string(left - n) + " trailing bytes");
    }
    void finish() const {
        if (pos_ != data_.size()) throw ParseError(std::to_string(data_.size() - pos_) + " trailing bytes");
    }

private:
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

void write_header(Writer& w, ObjectType type, const ParameterSet& params) {
    w.bytes(kMagic);
    w.u16(kFormatVersion);
    w.u8(static_cast<std::uint8_t>(type));
    for (unsigned v : {params.q, params.p, params.n0, params.k0, params.w, params.w_g, params.m_g}) w.u16(v);
    w.u16(static_cast<std::uint32_t>(params.density.terms().size()));
    for (const auto& t : params.density.terms()) {
        w.u8(t.symbol);
        w.u32(t.numerator);
        w.u32(t.denominator);
    }
}

ParameterSet read_header(Reader& r, ObjectType expected) {
    auto magic = r.take(4);
    if (!std::equal(magic.begin(), magic.end(), kMagic.begin())) throw ParseError("bad magic");
    if (auto v = r.u16(); v != kFormatVersion) throw ParseError("unsupported format version " + std::to_string(v));
    if (auto t = r.u8(); t != static_cast<std::uint8_t>(expected))
        throw ParseError("object type " + std::to_string(t) + ", expected " +
                         std::to_string(static_cast<unsigned>(expected)));
    ParameterSet params;
    params.q = r.u16();
    params.p = r.u16();
    params.n0 = r.u16();
    params.k0 = r.u16();
    params.w = r.u16();
    params.w_g = r.u16();
    params.m_g = r.u16();
    const unsigned count = r.u16();
    std::vector<DensityPolynomial::Term> terms;
    for (unsigned i = 0; i < count; ++i) {
        DensityPolynomial::Term t{};
        t.symbol = r.u8();
        t.numerator = r.u32();
        t.denominator = r.u32();
        terms.push_back(t);
    }
    try {
        params.density = DensityPolynomial(std::move(terms));
        params.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("bad parameter block: ") + e.what());
    }
    return params;
}

// Strips and checks the trailing digest.
std::span<const std::uint8_t> checked_body(std::span<const std::uint8_t> data) {
    if (data.size() < kChecksumBytes) throw ParseError("input shorter than its checksum");
    auto body = data.first(data.size() - kChecksumBytes);
    const Digest d = sha3_256({body});
    if (!std::equal(d.begin(), d.end(), data.end() - kChecksumBytes)) throw ParseError("checksum mismatch");
    return body;
}

}  // namespace

std::size_t header_size(const ParameterSet& params) { return 4 + 2 + 1 + 8 * 2 + 9 * params.density.terms().size(); }

Bytes serialize(const ParameterSet& params) {
    Writer w;
    write_header(w, ObjectType::params, params);
    return w.seal();
}

Bytes serialize(const PublicKey& pk) {
    Writer w;
    write_header(w, ObjectType::public_key, pk.params);
    w.bytes(pk.H_pub.raw());
    return w.seal();
}

Bytes serialize(const PrivateKey& sk) {
    Writer w;
    write_header(w, ObjectType::private_key, sk.params);
    for (auto v : sk.P.block_perm()) w.u16(v);
    for (auto v : sk.P.shifts()) w.u16(v);
    const QCMatrix& G = sk.code.G;
    const unsigned p = G.ring().degree();
    for (std::size_t i = 0; i < G.rows0(); ++i) {
        std::vector<std::pair<std::uint32_t, std::uint8_t>> entries;
        for (std::size_t j = 0; j < G.cols0(); ++j) {
            auto b = G.block(i, j);
            for (unsigned t = 0; t < p; ++t)
                if (b[t]) entries.emplace_back(static_cast<std::uint32_t>(j * p + t), b[t]);
        }
        w.u32(static_cast<std::uint32_t>(entries.size()));
        for (auto [pos, val] : entries) {
            w.u32(pos);
            w.u8(val);
        }
    }
    w.bytes(sk.S.raw());
    return w.seal();
}

Bytes serialize(const ParameterSet& params, const Signature& sig) {
    if (sig.sigma.size() != params.n()) throw ParameterError("signature length differs from n");
    Writer w;
    write_header(w, ObjectType::signature, params);
    w.u16(static_cast<std::uint32_t>(sig.theta.size()));
    w.bytes(sig.theta);
    w.bytes(sig.sigma);
    return w.seal();
}

ObjectType peek_object_type(std::span<const std::uint8_t> data) {
    if (data.size() < 7 || !std::equal(kMagic.begin(), kMagic.end(), data.begin())) throw ParseError("bad magic");
    const unsigned t = data[6];
    if (t < 1 || t > 4) throw ParseError("unknown object type " + std::to_string(t));
    return static_cast<ObjectType>(t);
}

ParameterSet deserialize_params(std::span<const std::uint8_t> data) {
    Reader r(checked_body(data));
    ParameterSet params = read_header(r, ObjectType::params);
    r.finish();
    return params;
}

PublicKey deserialize_public_key(std::span<const std::uint8_t> data) {
    Reader r(checked_body(data));
    ParameterSet params = read_header(r, ObjectType::public_key);
    r.expect_remaining(params.r() * params.n0);
    QCMatrix H(Ring(params.p, params.q), params.r0(), params.n0);
    r.symbols(H.raw(), params.q);
    r.finish();
    return {std::move(params), std::move(H)};
}

PrivateKey deserialize_private_key(std::span<const std::uint8_t> data) {
    Reader r(checked_body(data));
    ParameterSet params = read_header(r, ObjectType::private_key);
    r.expect_remaining(4 * std::size_t{params.r0()} + std::size_t{params.k0} * (4 + 5 * std::size_t{params.w_g}) +
                       params.n() * params.n0);
    const Ring ring(params.p, params.q);
    std::vector<std::uint32_t> perm(params.r0()), shifts(params.r0());
    for (auto& v : perm) v = r.u16();
    for (auto& v : shifts) v = r.u16();
    std::optional<QCPermutation> P;
    try {
        P.emplace(params.p, std::move(perm), std::move(shifts));
    } catch (const ParameterError& e) {
        throw ParseError(std::string("bad permutation: ") + e.what());
    }
    QCMatrix G(ring, params.k0, params.n0);
    for (std::size_t i = 0; i < params.k0; ++i) {
        const std::uint32_t count = r.u32();
        if (count != params.w_g) throw ParseError("generator row weight " + std::to_string(count) + " != w_g");
        for (std::uint32_t e = 0; e < count; ++e) {
            const std::uint32_t pos = r.u32();
            const std::uint8_t val = r.u8();
            if (pos >= params.n()) throw ParseError("generator position out of range");
            if (val == 0 || val >= params.q) throw ParseError("generator value out of range");
            auto& slot = G.block(i, pos / params.p)[pos % params.p];
            if (slot) throw ParseError("duplicate generator position");
            slot = val;
        }
    }
    QCMatrix S(ring, params.n0, params.n0);
    r.symbols(S.raw(), params.q);
    r.finish();
    auto H = systematic_parity_check(G);
    if (!H) throw ParseError("generator matrix is not reducible to systematic form");
    return {std::move(params), std::move(*P), LdgmCode{std::move(G), std::move(*H)}, std::move(S), std::nullopt};
}

SignedMessage deserialize_signature(std::span<const std::uint8_t> data) {
    Reader r(checked_body(data));
    ParameterSet params = read_header(r, ObjectType::signature);
    const std::uint16_t theta_len = r.u16();
    r.expect_remaining(theta_len + params.n());
    auto theta = r.take(theta_len);
    DenseVector sigma(params.n());
    r.symbols(sigma, params.q);
    r.finish();
    return {std::move(params), Signature{std::move(sigma), Bytes(theta.begin(), theta.end())}};
}

}  // namespace spanse
