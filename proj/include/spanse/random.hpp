#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "spanse/hash.hpp"

namespace spanse {

// Source of uniform 64-bit words. Every sampler in the library draws
// through this interface so a single seed reproduces a whole run.
class RandomSource {
public:
    virtual ~RandomSource() = default;
    virtual std::uint64_t next_u64() = 0;

    // Uniform in [0, bound), bound > 0; unbiased by rejection.
    std::uint64_t uniform(std::uint64_t bound);
    void fill(std::span<std::uint8_t> out);
};

// Deterministic random bit generator built on SHAKE256. Used for keys,
// codewords and randomized Theta.
class ShakeDrbg final : public RandomSource {
public:
    explicit ShakeDrbg(std::span<const std::uint8_t> seed);
    static ShakeDrbg from_seed(std::uint64_t seed);
    // 32 bytes from the operating system.
    static ShakeDrbg from_entropy();

    std::uint64_t next_u64() override { return stream_.next_u64(); }

private:
    XofStream stream_;
};

// Non-cryptographic generator for Monte Carlo estimation.
class FastRng final : public RandomSource {
public:
    explicit FastRng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next_u64() override { return engine_(); }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Sorted sample of `count` distinct values from [0, range).
std::vector<std::uint32_t> sample_distinct(RandomSource& rng, std::uint32_t range, std::uint32_t count);

}  // namespace spanse
