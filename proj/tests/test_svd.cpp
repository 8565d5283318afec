#include "mclab/svd.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace mclab;

namespace {

double max_orthogonality_error(const std::vector<std::vector<double>>& vecs) {
    double worst = 0.0;
    for (std::size_t a = 0; a < vecs.size(); ++a)
        for (std::size_t b = a; b < vecs.size(); ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < vecs[a].size(); ++i) s += vecs[a][i] * vecs[b][i];
            worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
        }
    return worst;
}

}  // namespace

TEST(Svd, Identity) {
    const auto f = svd(DenseMatrix::identity(4));
    ASSERT_EQ(f.rank(), 4u);
    for (double s : f.values) EXPECT_NEAR(s, 1.0, 1e-15);
    EXPECT_NEAR(nuclear_norm(DenseMatrix::identity(7)), 7.0, 1e-13);
}

TEST(Svd, RankOneOnes) {
    const auto f = svd(DenseMatrix::constant(4, 4, 1.0));
    ASSERT_EQ(f.rank(), 1u);
    EXPECT_NEAR(f.values[0], 4.0, 1e-14);
}

TEST(Svd, Diagonal) {
    const auto v = singular_values(DenseMatrix::from_rows({{3, 0}, {0, 1}}));
    ASSERT_EQ(v.size(), 2u);
    EXPECT_NEAR(v[0], 3.0, 1e-15);
    EXPECT_NEAR(v[1], 1.0, 1e-15);
}

TEST(Svd, ZeroMatrixHasNoTriples) {
    const auto f = svd(DenseMatrix(3, 5));
    EXPECT_EQ(f.rank(), 0u);
    EXPECT_EQ(nuclear_norm(DenseMatrix(3, 5)), 0.0);
    EXPECT_EQ(spectral_norm(DenseMatrix(3, 5)), 0.0);
    EXPECT_EQ(f.reconstruct(), DenseMatrix(3, 5));
}

TEST(Svd, AgreesWithGramEigenOracle) {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 30; ++t) {
        const std::size_t m = 1 + rng() % 20, n = 1 + rng() % 20;
        const auto a = oracle::random_matrix(m, n, rng);
        const auto mine = singular_values(a);
        const auto ref = oracle::singular_values(a);
        const double s1 = ref.front();
        for (std::size_t i = 0; i < ref.size(); ++i) {
            const double got = i < mine.size() ? mine[i] : 0.0;
            EXPECT_NEAR(got, ref[i], 1e-8 * s1) << m << "x" << n << " index " << i;
        }
        EXPECT_NEAR(spectral_norm(a), s1, 1e-10 * s1);
    }
}

TEST(Svd, ReconstructionAndOrthogonality) {
    std::mt19937_64 rng(22);
    for (auto [m, n] : std::vector<std::pair<std::size_t, std::size_t>>{{1, 1}, {1, 9}, {9, 1}, {30, 7}, {7, 30}, {64, 64}, {100, 37}}) {
        const auto a = oracle::random_matrix(m, n, rng, -3.0, 3.0);
        const auto f = svd(a);
        EXPECT_LE(avg_frobenius(f.reconstruct() - a), 1e-10 * (1.0 + avg_frobenius(a)));
        EXPECT_LE(max_orthogonality_error(f.left), 1e-10);
        EXPECT_LE(max_orthogonality_error(f.right), 1e-10);
        for (std::size_t i = 1; i < f.rank(); ++i) EXPECT_GE(f.values[i - 1], f.values[i]);
    }
}

TEST(Svd, DetectsRank) {
    std::mt19937_64 rng(23);
    for (std::size_t r = 1; r <= 5; ++r) {
        const auto a = oracle::random_low_rank(40, 25, r, rng);
        const auto f = svd(a);
        EXPECT_EQ(f.rank(), r);
        EXPECT_LE(avg_frobenius(f.reconstruct() - a), 1e-12);
    }
}

TEST(Svd, TripleBoundsForBoundedMatrices) {
    std::mt19937_64 rng(24);
    for (int t = 0; t < 20; ++t) {
        const std::size_t m = 2 + rng() % 30, n = 2 + rng() % 30;
        const auto a = oracle::random_matrix(m, n, rng);
        const auto f = svd(a);
        const double dm = static_cast<double>(m), dn = static_cast<double>(n);
        for (std::size_t i = 0; i < f.rank(); ++i) {
            EXPECT_LE(f.values[i], std::sqrt(dm * dn) * (1 + 1e-12));
            for (double u : f.left[i]) EXPECT_LE(std::abs(u), std::sqrt(dn) / f.values[i] * (1 + 1e-9));
            for (double v : f.right[i]) EXPECT_LE(std::abs(v), std::sqrt(dm) / f.values[i] * (1 + 1e-9));
        }
    }
}

TEST(Svd, NuclearBoundForRandomRankTwo) {
    std::mt19937_64 rng(25);
    for (int t = 0; t < 100; ++t) {
        const std::size_t m = 2 + rng() % 20, n = 2 + rng() % 20;
        const auto x = oracle::random_low_rank(m, n, 2, rng);
        EXPECT_LE(nuclear_norm(x), 2.0 * std::sqrt(static_cast<double>(m * n)) + 1e-9);
        EXPECT_NEAR(nuclear_norm(x), oracle::nuclear_norm(x), 1e-7);
    }
}
