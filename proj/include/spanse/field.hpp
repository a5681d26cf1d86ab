#pragma once

// Arithmetic in the prime field F_q, 3 <= q <= 255.
//
// Nothing here is constant time. Keys are one-time and the library is a
// research artifact; do not expose signing to timing-capable adversaries.

#include <cstdint>

namespace spanse {

class FieldParams {
public:
    // Throws ParameterError unless q is an odd prime in [3, 255].
    explicit FieldParams(unsigned q);

    unsigned modulus() const noexcept { return q_; }

    // Raw canonical-residue helpers used by the polynomial kernels.
    std::uint8_t add(std::uint8_t a, std::uint8_t b) const noexcept {
        unsigned s = unsigned{a} + b;
        return static_cast<std::uint8_t>(s >= q_ ? s - q_ : s);
    }
    std::uint8_t sub(std::uint8_t a, std::uint8_t b) const noexcept {
        return static_cast<std::uint8_t>(a >= b ? a - b : a + q_ - b);
    }
    std::uint8_t neg(std::uint8_t a) const noexcept {
        return static_cast<std::uint8_t>(a == 0 ? 0 : q_ - a);
    }
    std::uint8_t mul(std::uint8_t a, std::uint8_t b) const noexcept {
        return static_cast<std::uint8_t>((unsigned{a} * b) % q_);
    }
    // Throws DomainError on zero.
    std::uint8_t inv(std::uint8_t a) const;

    friend bool operator==(const FieldParams&, const FieldParams&) = default;

private:
    unsigned q_;
};

bool is_prime(unsigned n) noexcept;

class FieldElement {
public:
    // value is reduced mod q.
    FieldElement(const FieldParams& field, unsigned value);

    unsigned value() const noexcept { return value_; }
    unsigned modulus() const noexcept { return q_; }
    FieldParams field() const { return FieldParams(q_); }

    friend bool operator==(const FieldElement&, const FieldElement&) = default;

private:
    FieldElement(std::uint16_t q, std::uint8_t v) : q_(q), value_(v) {}

    std::uint16_t q_;
    std::uint8_t value_;

    friend FieldElement add(const FieldElement&, const FieldElement&);
    friend FieldElement sub(const FieldElement&, const FieldElement&);
    friend FieldElement mul(const FieldElement&, const FieldElement&);
    friend FieldElement inv(const FieldElement&);
    friend FieldElement neg(const FieldElement&);
};

// Binary operations throw ParameterError on mismatched moduli.
FieldElement add(const FieldElement& a, const FieldElement& b);
FieldElement sub(const FieldElement& a, const FieldElement& b);
FieldElement mul(const FieldElement& a, const FieldElement& b);
// Throws DomainError when a is zero.
FieldElement inv(const FieldElement& a);
FieldElement neg(const FieldElement& a);

}  // namespace spanse
