#pragma once

// Security-cost and rejection-rate estimators for parameter selection.
//
// Everything here works on plain dimensions so that non-block-divisible
// shapes (n = 24000 with p = 101) can be evaluated as pure numbers.

#include <cstdint>
#include <optional>
#include <vector>

#include "spanse/params.hpp"
#include "spanse/qc.hpp"

namespace spanse::analysis {

struct Dimensions {
    unsigned q = 0;
    unsigned p = 0;
    double n = 0;
    double k = 0;
    unsigned w = 0;
    unsigned w_g = 0;
    unsigned m_g = 0;

    double r() const { return n - k; }
    double rate() const { return k / n; }

    static Dimensions of(const ParameterSet& params);
};

// n = 24000, k = 12000, p = 101, q = 127, w = 26, w_g = 11, m_g = 12
Dimensions literal_dimensions();

// log2 C(m, t) via log-gamma. Throws DomainError when t > m.
double log2_binomial(std::uint64_t m, std::uint64_t t);

struct BruteForce {
    double zero_free_log2;  // n log2((q-1)/q)
    double total_log2;      // zero-free term - r log2 q
};

BruteForce brute_force_log2(const Dimensions& dims);

// PGE+SS list-merging attack coordinates.
struct AttackPoint {
    unsigned b = 1;   // merge tree depth
    double nu = 0;    // list size exponent per n' = (1 - phi) n
    double phi = 0;   // fraction of positions handled by partial elimination
};

struct CostReport {
    AttackPoint point;
    double rho = 0;  // log2 N' / n
    double chi = 0;  // rho + phi log2(1 - 1/q)
    double iteration_log2 = 0;
    double success_prob_log2 = 0;
    double t_sdp_log2 = 0;
    // T_SDP / sqrt(p). Assumes the DOOM gain of low-weight decoding carries over.
    double t_doom_log2 = 0;
};

// Throws DomainError naming the violated constraint.
CostReport pge_ss_exponents(const AttackPoint& point, const Dimensions& dims);

struct SearchConfig {
    unsigned coarse_phi = 2000;
    unsigned refine_steps = 40;
    unsigned refine_passes = 6;
};

// Exhaustive over b and the kinks in nu; grid with local refinement over phi.
CostReport optimize_attack(const Dimensions& dims, const SearchConfig& config = {});

// f_rho(m, x) = C(m, x) rho^x (1 - rho)^(m - x)
double binomial_pmf(std::uint64_t m, std::uint64_t x, double rho);

struct RejectionModel {
    double rho_c = 0;
    double rho_s = 0;
    std::uint64_t z_max = 0;
    std::vector<double> c_tilde;  // Pr[c~_i = x], x in [0, q)
    std::vector<double> e_tilde;  // Pr[e~_i = x], x in [0, q)
    double p_zero_entry = 0;
    double p_valid = 0;
    double p_invalid = 0;  // 1 - p_valid without cancellation
    double expected_attempts = 0;
};

// Closed-form estimate for binary d(x) = d0 + d1 x. The z sum runs to
// min(n, 4 m_g w_g) unless z_max is given. Throws DomainError otherwise.
RejectionModel rejection_rate_analytic(const Dimensions& dims, const DensityPolynomial& density,
                                       std::optional<std::uint64_t> z_max = std::nullopt);

struct MonteCarloConfig {
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    // Trials sharing one sampled generator matrix.
    std::uint64_t batch = 1000;
    // When set, every trial uses this generator instead of fresh ones.
    const QCMatrix* generator = nullptr;
};

struct MonteCarloResult {
    std::uint64_t trials = 0;
    std::uint64_t valid = 0;
    double p_valid = 0;
    double stderr_ = 0;
    double rejection_rate() const { return 1.0 - p_valid; }
};

// One simulated signing attempt per trial: fresh weight-m_g u, fresh
// weight-w syndrome, fresh S drawn from d(x); counts zero-free sigma.
// Results depend on the seed only, never on the thread count.
MonteCarloResult rejection_rate_montecarlo(const ParameterSet& params, const DensityPolynomial& density,
                                           const MonteCarloConfig& config);

struct SizeReport {
    double pk_symbols = 0;
    double pk_packed_bits = 0;
    double pk_packed_bytes = 0;
    double pk_packed_kib = 0;
    std::uint64_t pk_disk_bytes = 0;
    std::uint64_t sig_disk_bytes = 0;
    double log2_ns = 0;
    double log2_nc = 0;
};

// header_bytes / theta_bytes feed the on-disk estimates.
SizeReport size_report(const Dimensions& dims, std::size_t header_bytes = 0, std::size_t theta_bytes = 32);

}  // namespace spanse::analysis
