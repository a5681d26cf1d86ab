#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace spanse {

using Digest = std::array<std::uint8_t, 32>;

// SHA3-256 over the concatenation of the given parts.
Digest sha3_256(std::initializer_list<std::span<const std::uint8_t>> parts);

// SHAKE256 squeezed to out.size() bytes.
void shake256(std::initializer_list<std::span<const std::uint8_t>> parts, std::span<std::uint8_t> out);

inline std::span<const std::uint8_t> as_bytes(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

// Expands a seed into an unbounded byte stream: block i is
// SHAKE256(tag || seed || le64(i)).
class XofStream {
public:
    XofStream(std::string_view tag, std::span<const std::uint8_t> seed);

    std::uint8_t next_byte();
    std::uint32_t next_u32();
    std::uint64_t next_u64();
    void read(std::span<std::uint8_t> out);

private:
    void refill();

    std::vector<std::uint8_t> prefix_;
    std::uint64_t counter_ = 0;
    std::array<std::uint8_t, 4096> buf_{};
    std::size_t pos_ = buf_.size();
};

}  // namespace spanse
