#include <cmath>
#include <numbers>

#include "spanse/analysis.hpp"
#include "spanse/errors.hpp"

namespace spanse::analysis {

Dimensions Dimensions::of(const ParameterSet& params) {
    return {params.q, params.p, static_cast<double>(params.n()), static_cast<double>(params.k()),
            params.w, params.w_g, params.m_g};
}

Dimensions literal_dimensions() { return {127, 101, 24000, 12000, 26, 11, 12}; }

double log2_binomial(std::uint64_t m, std::uint64_t t) {
    if (t > m) throw DomainError("log2_binomial: t > m");
    const double md = static_cast<double>(m), td = static_cast<double>(t);
    return (std::lgamma(md + 1) - std::lgamma(td + 1) - std::lgamma(md - td + 1)) / std::numbers::ln2;
}

BruteForce brute_force_log2(const Dimensions& dims) {
    const double q = dims.q;
    const double zero_free = dims.n * std::log2((q - 1) / q);
    return {zero_free, zero_free - dims.r() * std::log2(q)};
}

SizeReport size_report(const Dimensions& dims, std::size_t header_bytes, std::size_t theta_bytes) {
    SizeReport s;
    s.pk_symbols = dims.r() * dims.n / dims.p;
    s.pk_packed_bits = s.pk_symbols * std::ceil(std::log2(static_cast<double>(dims.q)));
    s.pk_packed_bytes = s.pk_packed_bits / 8;
    s.pk_packed_kib = s.pk_packed_bytes / 1024;
    s.pk_disk_bytes = static_cast<std::uint64_t>(std::ceil(s.pk_symbols)) + header_bytes;
    s.sig_disk_bytes = static_cast<std::uint64_t>(dims.n) + 2 + theta_bytes + header_bytes;
    s.log2_ns = log2_binomial(static_cast<std::uint64_t>(dims.r()), dims.w);
    s.log2_nc = log2_binomial(static_cast<std::uint64_t>(dims.k), dims.m_g);
    return s;
}

}  // namespace spanse::analysis
