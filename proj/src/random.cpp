#include "spanse/random.hpp"

#include <openssl/rand.h>

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>

#include "spanse/errors.hpp"

namespace spanse {

std::uint64_t RandomSource::uniform(std::uint64_t bound) {
    if (bound == 0) throw DomainError("uniform(0)");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
        std::uint64_t x = next_u64();
        if (x < limit) return x % bound;
    }
}

void RandomSource::fill(std::span<std::uint8_t> out) {
    std::size_t i = 0;
    while (i < out.size()) {
        std::uint64_t x = next_u64();
        for (int b = 0; b < 8 && i < out.size(); ++b, ++i) out[i] = static_cast<std::uint8_t>(x >> (8 * b));
    }
}

ShakeDrbg::ShakeDrbg(std::span<const std::uint8_t> seed) : stream_("SPANSE-DRBG", seed) {}

ShakeDrbg ShakeDrbg::from_seed(std::uint64_t seed) {
    std::array<std::uint8_t, 8> bytes{};
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<std::uint8_t>(seed >> (8 * i));
    return ShakeDrbg(bytes);
}

ShakeDrbg ShakeDrbg::from_entropy() {
    std::array<std::uint8_t, 32> bytes{};
    if (RAND_bytes(bytes.data(), static_cast<int>(bytes.size())) != 1)
        throw std::runtime_error("RAND_bytes failed");
    return ShakeDrbg(bytes);
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::vector<std::uint32_t> sample_distinct(RandomSource& rng, std::uint32_t range, std::uint32_t count) {
    if (count > range) throw DomainError("cannot draw more distinct values than the range holds");
    std::vector<std::uint32_t> out;
    out.reserve(count);
    if (count > range / 2) {
        // dense case: partial Fisher-Yates
        std::vector<std::uint32_t> all(range);
        for (std::uint32_t i = 0; i < range; ++i) all[i] = i;
        for (std::uint32_t i = 0; i < count; ++i) {
            auto j = i + static_cast<std::uint32_t>(rng.uniform(range - i));
            std::swap(all[i], all[j]);
        }
        out.assign(all.begin(), all.begin() + count);
        std::sort(out.begin(), out.end());
        return out;
    }
    while (out.size() < count) {
        auto v = static_cast<std::uint32_t>(rng.uniform(range));
        auto it = std::lower_bound(out.begin(), out.end(), v);
        if (it == out.end() || *it != v) out.insert(it, v);
    }
    return out;
}

}  // namespace spanse
