#include "spanse/field.hpp"

#include <string>

#include "spanse/errors.hpp"

namespace spanse {

bool is_prime(unsigned n) noexcept {
    if (n < 2) return false;
    for (unsigned d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

FieldParams::FieldParams(unsigned q) : q_(q) {
    if (q < 3 || q > 255 || !is_prime(q))
        throw ParameterError("field modulus must be an odd prime in [3, 255], got " + std::to_string(q));
}

std::uint8_t FieldParams::inv(std::uint8_t a) const {
    if (a % q_ == 0) throw DomainError("inverse of zero in F_" + std::to_string(q_));
    // a^(q-2)
    unsigned result = 1, base = a % q_, e = q_ - 2;
    while (e) {
        if (e & 1u) result = result * base % q_;
        base = base * base % q_;
        e >>= 1;
    }
    return static_cast<std::uint8_t>(result);
}

FieldElement::FieldElement(const FieldParams& field, unsigned value)
    : q_(static_cast<std::uint16_t>(field.modulus())),
      value_(static_cast<std::uint8_t>(value % field.modulus())) {}

namespace {

void require_same(const FieldElement& a, const FieldElement& b) {
    if (a.modulus() != b.modulus())
        throw ParameterError("field elements from F_" + std::to_string(a.modulus()) + " and F_" +
                             std::to_string(b.modulus()));
}

}  // namespace

FieldElement add(const FieldElement& a, const FieldElement& b) {
    require_same(a, b);
    unsigned s = unsigned{a.value_} + b.value_;
    return {a.q_, static_cast<std::uint8_t>(s >= a.q_ ? s - a.q_ : s)};
}

FieldElement sub(const FieldElement& a, const FieldElement& b) { return add(a, neg(b)); }

FieldElement mul(const FieldElement& a, const FieldElement& b) {
    require_same(a, b);
    return {a.q_, static_cast<std::uint8_t>(unsigned{a.value_} * b.value_ % a.q_)};
}

FieldElement inv(const FieldElement& a) { return {a.q_, FieldParams(a.q_).inv(a.value_)}; }

FieldElement neg(const FieldElement& a) {
    return {a.q_, static_cast<std::uint8_t>(a.value_ == 0 ? 0 : a.q_ - a.value_)};
}

}  // namespace spanse
