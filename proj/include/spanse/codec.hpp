#pragma once

// Binary file format, all integers little-endian:
//
//   "SPNS" | version u16 = 1 | object type u8 | params block | payload
//
//   params block: q, p, n0, k0, w, w_g, m_g, density count (u16 each), then
//                 per density term: symbol u8, numerator u32, denominator u32
//   public:       r0*n0 circulant rows of p bytes
//   private:      pi as r0 u16, shifts as r0 u16, per block row of G:
//                 count u32 then count x (position u32, value u8),
//                 S as n0*n0 circulant rows of p bytes
//   signature:    theta length u16 | theta | n bytes of sigma
//   trailer:      SHA3-256 of all preceding bytes
//
// Every symbol byte must be < q.

#include <cstdint>
#include <span>
#include <vector>

#include "spanse/params.hpp"
#include "spanse/scheme.hpp"

namespace spanse {

enum class ObjectType : std::uint8_t { params = 1, public_key = 2, private_key = 3, signature = 4 };

inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::size_t kChecksumBytes = 32;

struct SignedMessage {
    ParameterSet params;
    Signature signature;
};

Bytes serialize(const ParameterSet& params);
Bytes serialize(const PublicKey& pk);
Bytes serialize(const PrivateKey& sk);
Bytes serialize(const ParameterSet& params, const Signature& sig);

// The deserializers throw ParseError on any malformed input.
ObjectType peek_object_type(std::span<const std::uint8_t> data);
ParameterSet deserialize_params(std::span<const std::uint8_t> data);
PublicKey deserialize_public_key(std::span<const std::uint8_t> data);
// Recomputes the systematic parity-check matrix from G.
PrivateKey deserialize_private_key(std::span<const std::uint8_t> data);
SignedMessage deserialize_signature(std::span<const std::uint8_t> data);

// Bytes taken by magic, version, type and the params block.
std::size_t header_size(const ParameterSet& params);
// Header plus checksum trailer: every file's size beyond its payload.
inline std::size_t framing_size(const ParameterSet& params) { return header_size(params) + kChecksumBytes; }

}  // namespace spanse
