#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "spanse/analysis.hpp"
#include "spanse/errors.hpp"
#include "spanse/ldgm.hpp"

using namespace spanse;

namespace {

ParameterSet desk() { return *find_parameter_set("desk"); }

}  // namespace

TEST(Ldgm, GeneratorRowsHaveExactWeight) {
    FastRng rng(3);
    for (unsigned w_g : {1u, 5u, 9u}) {
        auto params = desk();
        params.w_g = w_g;
        for (int t = 0; t < 20; ++t) {
            auto G = sample_generator(params, rng);
            for (const auto& row : oracle::expand(G)) {
                unsigned weight = 0;
                for (auto x : row) {
                    ASSERT_LE(x, 1u);
                    weight += x;
                }
                ASSERT_EQ(weight, w_g);
            }
        }
    }
}

TEST(Ldgm, OnePositionsAreUniform) {
    // Chi-square over the n positions of every block row's first row.
    auto params = desk();
    const std::size_t n = params.n();
    std::vector<double> counts(n, 0);
    FastRng rng(31);
    const int samples = 2000;
    for (int t = 0; t < samples; ++t) {
        auto G = sample_generator(params, rng);
        for (std::size_t i = 0; i < G.rows0(); ++i)
            for (std::size_t j = 0; j < G.cols0(); ++j) {
                auto blk = G.block(i, j);
                for (unsigned c = 0; c < params.p; ++c) counts[j * params.p + c] += blk[c];
            }
    }
    const double expected = double(samples) * params.k0 * params.w_g / n;
    double chi2 = 0;
    for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
    const double df = double(n) - 1;
    // about 5 standard deviations above the mean of the chi-square law
    EXPECT_LT(chi2, df + 5 * std::sqrt(2 * df));
}

TEST(Ldgm, ParityCheckOfSystematicGenerator) {
    FastRng rng(37);
    Ring r(5, 127);
    auto W = oracle::random_qc(r, 2, 3, rng);
    auto G = qc_hconcat(QCMatrix::identity(r, 2), W);
    auto H = systematic_parity_check(G);
    ASSERT_TRUE(H.has_value());
    EXPECT_EQ(*H, qc_hconcat(qc_mat_neg(qc_transpose(W)), QCMatrix::identity(r, 3)));
}

TEST(Ldgm, SingularLeftPartIsReported) {
    Ring r(5, 127);
    QCMatrix G(r, 2, 4);
    G.set(0, 2, CirculantPoly::one(r));
    G.set(1, 3, CirculantPoly::one(r));
    EXPECT_FALSE(systematic_parity_check(G).has_value());
}

TEST(Ldgm, ParityCheckAnnihilatesGenerator) {
    FastRng rng(41);
    for (int t = 0; t < 20; ++t) {
        auto params = desk();
        auto code = generate_code(params, rng);
        const auto dG = oracle::expand(code.G);
        const auto dH = oracle::expand(code.H);
        // H G^T = 0
        for (const auto& g : dG) {
            auto s = oracle::mat_vec(dH, g, params.q);
            for (auto x : s) ASSERT_EQ(x, 0u);
        }
        // right part of H is the identity, so H [0 | s']^T = s'
        DenseVector e(params.n(), 0);
        std::vector<unsigned> s_prime(params.r(), 0);
        for (auto pos : sample_distinct(rng, static_cast<std::uint32_t>(params.r()), params.w)) {
            e[params.k() + pos] = 1;
            s_prime[pos] = 1;
        }
        ASSERT_EQ(oracle::mat_vec(dH, oracle::widen(e), params.q), s_prime);
    }
}

TEST(Ldgm, CodewordsAreInTheCode) {
    FastRng rng(43);
    auto params = desk();
    auto code = generate_code(params, rng);
    const auto dG = oracle::expand(code.G);
    const auto dH = oracle::expand(code.H);

    EXPECT_EQ(random_codeword(code.G, 0, rng).weight(), 0u);

    for (int t = 0; t < 50; ++t) {
        auto c = random_codeword(code.G, 1, rng).to_dense();
        EXPECT_NE(std::find(dG.begin(), dG.end(), oracle::widen(c)), dG.end());
    }
    for (int t = 0; t < 500; ++t) {
        auto c = random_codeword(code.G, params.m_g, rng);
        ASSERT_LE(c.weight(), std::size_t{params.m_g} * params.w_g);
        auto s = oracle::mat_vec(dH, oracle::widen(c.to_dense()), params.q);
        for (auto x : s) ASSERT_EQ(x, 0u);
    }
}

TEST(Ldgm, CodewordWeightMatchesBernoulliModel) {
    // Average support of a sum of m_g rows against n rho_c with
    // rho_c = 1 - (1 - w_g/n)^m_g.
    FastRng rng(47);
    auto params = desk();
    params.m_g = 10;
    double total = 0;
    const int samples = 4000;
    for (int t = 0; t < samples; ++t) {
        auto G = sample_generator(params, rng);
        total += static_cast<double>(random_codeword(G, params.m_g, rng).weight());
    }
    const double n = static_cast<double>(params.n());
    const double want = n * (1 - std::pow(1 - params.w_g / n, params.m_g));
    EXPECT_NEAR(total / samples, want, 0.02 * want);
}
