#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spanse {

class RandomSource;

// Distribution of symbol values in each row of the secret matrix S:
// d(x) = sum_i d_i x^i with d_i stored as exact rationals.
class DensityPolynomial {
public:
    struct Term {
        std::uint8_t symbol;
        std::uint32_t numerator;
        std::uint32_t denominator;
        double probability() const { return static_cast<double>(numerator) / denominator; }
        friend bool operator==(const Term&, const Term&) = default;
    };

    // Throws ParameterError unless every denominator is positive, symbols are
    // distinct and the fractions sum to 1 within 1e-9.
    explicit DensityPolynomial(std::vector<Term> terms);

    // "d0,d1[,i:di...]": positional entries for x^0, x^1, ... and explicit
    // "symbol:fraction" entries. Decimal fractions whose sum is within 1e-3 of
    // one are renormalized exactly over their common denominator.
    static DensityPolynomial parse(std::string_view text);
    // d0 + d1 x
    static DensityPolynomial binary(std::uint32_t num0, std::uint32_t num1, std::uint32_t den);

    std::span<const Term> terms() const noexcept { return terms_; }
    double coefficient(unsigned symbol) const;
    unsigned max_symbol() const;
    bool is_binary() const;
    std::string to_string() const;

    friend bool operator==(const DensityPolynomial&, const DensityPolynomial&) = default;

private:
    std::vector<Term> terms_;
};

// Draws symbols i.i.d. from a density using 32-bit cumulative thresholds.
class DensitySampler {
public:
    explicit DensitySampler(const DensityPolynomial& d);
    void fill(RandomSource& rng, std::span<std::uint8_t> out) const;

private:
    std::uint8_t pick(std::uint32_t u) const {
        // branchless: count the cumulative thresholds at or below u
        std::size_t idx = 0;
        for (std::size_t i = 0; i + 1 < thresholds_.size(); ++i) idx += (u >= thresholds_[i]);
        return symbols_[idx];
    }

    std::vector<std::uint8_t> symbols_;
    std::vector<std::uint64_t> thresholds_;
};

struct ParameterSet {
    unsigned q = 0;
    unsigned p = 0;
    unsigned n0 = 0;
    unsigned k0 = 0;
    unsigned w = 0;
    unsigned w_g = 0;
    unsigned m_g = 0;
    DensityPolynomial density = DensityPolynomial::binary(1, 1, 2);
    unsigned max_sign_attempts = 10000;

    unsigned r0() const { return n0 - k0; }
    std::size_t n() const { return std::size_t{n0} * p; }
    std::size_t k() const { return std::size_t{k0} * p; }
    std::size_t r() const { return std::size_t{r0()} * p; }

    // Throws ParameterError naming the first violated invariant.
    void validate() const;

    friend bool operator==(const ParameterSet&, const ParameterSet&) = default;
};

struct NamedParameterSet {
    std::string_view name;
    std::string_view description;
    ParameterSet params;
};

// Built-in registry, versioned with the file format.
std::span<const NamedParameterSet> builtin_parameter_sets();
std::optional<ParameterSet> find_parameter_set(std::string_view name);

}  // namespace spanse
