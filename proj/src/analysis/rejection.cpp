#include <algorithm>
#include <cmath>
#include <thread>

#include "spanse/analysis.hpp"
#include "spanse/errors.hpp"
#include "spanse/ldgm.hpp"
#include "spanse/random.hpp"

namespace spanse::analysis {

double binomial_pmf(std::uint64_t m, std::uint64_t x, double rho) {
    if (x > m) return 0.0;
    if (rho <= 0.0) return x == 0 ? 1.0 : 0.0;
    if (rho >= 1.0) return x == m ? 1.0 : 0.0;
    const double md = static_cast<double>(m), xd = static_cast<double>(x);
    const double log_c = std::lgamma(md + 1) - std::lgamma(xd + 1) - std::lgamma(md - xd + 1);
    return std::exp(log_c + xd * std::log(rho) + (md - xd) * std::log1p(-rho));
}

RejectionModel rejection_rate_analytic(const Dimensions& dims, const DensityPolynomial& density,
                                       std::optional<std::uint64_t> z_max) {
    if (!density.is_binary())
        throw DomainError("analytic rejection model needs d(x) = d0 + d1 x; use the Monte Carlo estimator");
    const unsigned q = dims.q;
    const auto n = static_cast<std::uint64_t>(dims.n);
    RejectionModel m;
    m.rho_c = 1.0 - std::pow(1.0 - static_cast<double>(dims.w_g) / dims.n, dims.m_g);
    m.rho_s = density.coefficient(1);
    m.z_max = z_max.value_or(std::min<std::uint64_t>(n, 4ULL * dims.m_g * dims.w_g));

    m.c_tilde.assign(q, 0.0);
    for (std::uint64_t z = 0; z <= m.z_max; ++z) {
        const double fz = binomial_pmf(n, z, m.rho_c);
        if (fz == 0.0) continue;
        for (std::uint64_t x = 0; x <= z; ++x) m.c_tilde[x % q] += fz * binomial_pmf(z, x, m.rho_s);
    }
    m.e_tilde.assign(q, 0.0);
    for (unsigned x = 0; x <= dims.w; ++x) m.e_tilde[x % q] += binomial_pmf(dims.w, x, m.rho_s);

    for (unsigned x = 0; x < q; ++x) m.p_zero_entry += m.c_tilde[x] * m.e_tilde[(q - x) % q];
    m.p_zero_entry = std::min(m.p_zero_entry, 1.0);
    const double log_valid = dims.n * std::log1p(-m.p_zero_entry);
    m.p_valid = std::exp(log_valid);
    m.p_invalid = -std::expm1(log_valid);
    m.expected_attempts = 1.0 / m.p_valid;
    return m;
}

namespace {

// True when sigma = v S^T has no zero entry, with S drawn afresh from the
// sampler. Blocks of S^T are sampled lazily per output block so a zero can
// end the trial early.
bool simulate_attempt(const ParameterSet& params, const DensitySampler& sampler, const SparseVector& v,
                      RandomSource& rng, std::vector<std::uint32_t>& acc, std::vector<std::uint8_t>& blk) {
    const unsigned p = params.p;
    const unsigned q = params.q;
    struct Group {
        std::size_t begin, end;
    };
    // support entries are sorted, so entries of one block are contiguous
    std::vector<Group> groups;
    auto sup = v.support();
    for (std::size_t i = 0; i < sup.size();) {
        std::size_t j = i;
        while (j < sup.size() && sup[j].index / p == sup[i].index / p) ++j;
        groups.push_back({i, j});
        i = j;
    }
    for (std::size_t J = 0; J < params.n0; ++J) {
        std::fill(acc.begin(), acc.end(), 0);
        for (const auto& g : groups) {
            sampler.fill(rng, blk);
            for (std::size_t e = g.begin; e < g.end; ++e) {
                const unsigned a = sup[e].index % p;
                const std::uint32_t val = sup[e].value;
                for (unsigned t = 0; t < p - a; ++t) acc[a + t] += val * blk[t];
                for (unsigned t = p - a; t < p; ++t) acc[a + t - p] += val * blk[t];
            }
        }
        for (unsigned t = 0; t < p; ++t)
            if (acc[t] % q == 0) return false;
    }
    return true;
}

}  // namespace

MonteCarloResult rejection_rate_montecarlo(const ParameterSet& params, const DensityPolynomial& density,
                                           const MonteCarloConfig& config) {
    params.validate();
    if (config.trials == 0) throw DomainError("Monte Carlo needs at least one trial");
    if (density.max_symbol() >= params.q) throw ParameterError("density symbol outside F_q");
    const std::uint64_t batch = std::max<std::uint64_t>(config.batch, 1);
    const unsigned threads = std::max(1u, config.threads);
    const DensitySampler sampler(density);
    std::vector<std::uint64_t> valid(threads, 0);

    auto worker = [&](unsigned id) {
        const std::uint64_t lo = config.trials * id / threads;
        const std::uint64_t hi = config.trials * (id + 1) / threads;
        std::optional<QCMatrix> G;
        std::uint64_t G_batch = ~0ULL;
        std::vector<std::uint32_t> acc(params.p);
        std::vector<std::uint8_t> blk(params.p);
        for (std::uint64_t trial = lo; trial < hi; ++trial) {
            const QCMatrix* gen = config.generator;
            if (!gen) {
                if (trial / batch != G_batch) {
                    G_batch = trial / batch;
                    FastRng grng(splitmix64(config.seed ^ 0x5a5a5a5a5a5a5a5aULL) + G_batch);
                    G = sample_generator(params, grng);
                }
                gen = &*G;
            }
            FastRng rng(splitmix64(splitmix64(config.seed) + trial));
            DenseVector v = random_codeword(*gen, params.m_g, rng).to_dense();
            for (auto pos : sample_distinct(rng, static_cast<std::uint32_t>(params.r()), params.w)) {
                auto& slot = v[params.k() + pos];
                slot = static_cast<std::uint8_t>((slot + 1) % params.q);
            }
            if (simulate_attempt(params, sampler, SparseVector::from_dense(v), rng, acc, blk)) ++valid[id];
        }
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned id = 0; id < threads; ++id) pool.emplace_back(worker, id);
    }

    MonteCarloResult r;
    r.trials = config.trials;
    for (auto v : valid) r.valid += v;
    r.p_valid = static_cast<double>(r.valid) / static_cast<double>(r.trials);
    r.stderr_ = std::sqrt(r.p_valid * (1 - r.p_valid) / static_cast<double>(r.trials));
    return r;
}

}  // namespace spanse::analysis
