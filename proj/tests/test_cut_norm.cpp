#include "mclab/cut_norm.hpp"
#include "mclab/errors.hpp"
#include "mclab/graphon.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace mclab;

namespace {

double witness_value(const DenseMatrix& a, const CutNormEstimate& e) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += e.witnessX[i] * a(i, j) * e.witnessY[j];
    return std::abs(s) / static_cast<double>(a.rows() * a.cols());
}

PermPair random_perm(std::size_t m, std::size_t n, std::mt19937_64& rng) {
    std::vector<std::size_t> r(m), c(n);
    std::iota(r.begin(), r.end(), 0);
    std::iota(c.begin(), c.end(), 0);
    std::shuffle(r.begin(), r.end(), rng);
    std::shuffle(c.begin(), c.end(), rng);
    return PermPair(r, c);
}

}  // namespace

TEST(CutNormExact, Examples) {
    EXPECT_EQ(cut_norm_exact(DenseMatrix(4, 6)).value(), 0.0);
    EXPECT_DOUBLE_EQ(cut_norm_exact(DenseMatrix::constant(3, 5, 1.0)).value(), 1.0);
    const auto a = DenseMatrix::from_rows({{1, -1}, {-1, 1}});
    const auto e = cut_norm_exact(a);
    EXPECT_DOUBLE_EQ(e.value(), 1.0);
    EXPECT_TRUE(e.exact);
    // Witnesses are +-(1,-1) on both sides.
    EXPECT_EQ(e.witnessX[0] * e.witnessX[1], -1.0);
    EXPECT_EQ(e.witnessY[0] * e.witnessY[1], -1.0);
    EXPECT_DOUBLE_EQ(witness_value(a, e), 1.0);
}

TEST(CutNormExact, MatchesBruteForceOracle) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 40; ++t) {
        const std::size_t m = 1 + rng() % 7, n = 1 + rng() % 7;
        const auto a = oracle::random_matrix(m, n, rng);
        const auto e = cut_norm_exact(a);
        EXPECT_NEAR(e.value(), oracle::brute_cut_norm(a), 1e-12);
        EXPECT_NEAR(witness_value(a, e), e.lowerBound, 1e-12);
        EXPECT_NEAR(e.lowerBound, e.upperBound, 1e-12);
    }
}

TEST(CutNormExact, WideAndTallAgree) {
    std::mt19937_64 rng(32);
    const auto a = oracle::random_matrix(3, 20, rng);
    EXPECT_NEAR(cut_norm_exact(a).value(), cut_norm_exact(a.transpose()).value(), 1e-14);
}

TEST(CutNormExact, RejectsLargeInputsNamingTheLimit) {
    try {
        cut_norm_exact(DenseMatrix(30, 26));
        FAIL();
    } catch (const DimensionError& e) {
        EXPECT_NE(std::string(e.what()).find("25"), std::string::npos);
    }
    EXPECT_NO_THROW(cut_norm_exact(DenseMatrix(100, 3)));
}

TEST(CutNormLower, Examples) {
    for (std::uint64_t seed : {0u, 7u, 99u}) EXPECT_DOUBLE_EQ(cut_norm_lower(DenseMatrix::constant(10, 10, 1.0), 50, seed).value(), 1.0);
    EXPECT_EQ(cut_norm_lower(DenseMatrix(5, 5)).value(), 0.0);
}

TEST(CutNormLower, RandomSignMatricesAgainstExact) {
    std::mt19937_64 rng(33);
    int equal = 0;
    for (int t = 0; t < 100; ++t) {
        const auto a = oracle::random_signs(8, 8, rng);
        const auto lo = cut_norm_lower(a, 50, static_cast<std::uint64_t>(t));
        const double ex = oracle::brute_cut_norm(a);
        EXPECT_LE(lo.lowerBound, ex + 1e-12);
        EXPECT_NEAR(witness_value(a, lo), lo.lowerBound, 1e-12);
        EXPECT_LE(lo.lowerBound, lo.upperBound);
        if (std::abs(lo.lowerBound - ex) <= 1e-9) ++equal;
    }
    EXPECT_GE(equal, 95);
}

TEST(CutNormUpper, Examples) {
    EXPECT_NEAR(cut_norm_upper(DenseMatrix::constant(4, 9, 1.0)), 1.0, 1e-14);
    EXPECT_EQ(cut_norm_upper(DenseMatrix(4, 9)), 0.0);
    DenseMatrix c(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) c(i, j) = 0.5 * (((i + j) % 2 == 0) ? 1.0 : -1.0);
    EXPECT_NEAR(cut_norm_upper(c), 0.5, 1e-14);
    EXPECT_NEAR(cut_norm_exact(c).value(), 0.5, 1e-15);
}

TEST(CutNormProperties, SandwichSignSymmetryTriangleInvariance) {
    std::mt19937_64 rng(34);
    for (int t = 0; t < 30; ++t) {
        const auto a = oracle::random_matrix(6, 6, rng);
        const auto b = oracle::random_matrix(6, 6, rng);
        const double ea = cut_norm_exact(a).value();
        EXPECT_LE(cut_norm_lower(a, 10, t).value(), ea + 1e-12);
        EXPECT_GE(cut_norm_upper(a), ea - 1e-12);
        EXPECT_NEAR(cut_norm_exact(-a).value(), ea, 1e-15);
        EXPECT_LE(cut_norm_exact(a + b).value(), ea + cut_norm_exact(b).value() + 1e-12);
        EXPECT_NEAR(cut_norm_exact(apply_perm(a, random_perm(6, 6, rng))).value(), ea, 1e-14);
        // Norm chain: cut <= averaged Frobenius <= sup.
        EXPECT_LE(ea, avg_frobenius(a) + 1e-12);
        EXPECT_LE(avg_frobenius(a), linf_norm(a));
    }
}

TEST(CutNormCertified, ExactOnlyWhenSmall) {
    bool exact = false;
    std::mt19937_64 rng(35);
    const auto a = oracle::random_matrix(10, 12, rng);
    EXPECT_NEAR(cut_norm_certified(a, &exact), cut_norm_exact(a).value(), 1e-15);
    EXPECT_TRUE(exact);
    const auto big = oracle::random_matrix(30, 30, rng);
    EXPECT_EQ(cut_norm_certified(big, &exact), cut_norm_upper(big));
    EXPECT_FALSE(exact);
}

TEST(CutDistanceExact, Examples) {
    std::mt19937_64 rng(36);
    const auto a = oracle::random_matrix(4, 4, rng);
    EXPECT_EQ(cut_distance_exact(a, a).value, 0.0);
    EXPECT_NEAR(cut_distance_exact(a, apply_perm(a, random_perm(4, 4, rng))).value, 0.0, 1e-15);
    DenseMatrix d(3, 3);
    d(0, 0) = 1.0;
    const auto r = cut_distance_exact(d, DenseMatrix(3, 3));
    EXPECT_NEAR(r.value, 1.0 / 9.0, 1e-15);
    EXPECT_TRUE(r.exact);
    EXPECT_THROW(cut_distance_exact(DenseMatrix(8, 2), DenseMatrix(8, 2)), DimensionError);
    EXPECT_THROW(cut_distance_exact(DenseMatrix(3, 2), DenseMatrix(2, 3)), DimensionError);
}

TEST(CutDistanceExact, MatchesPermutationEnumerationOracle) {
    std::mt19937_64 rng(37);
    for (int t = 0; t < 8; ++t) {
        const std::size_t m = 2 + rng() % 3, n = 2 + rng() % 3;
        const auto a = oracle::random_matrix(m, n, rng);
        const auto b = oracle::random_matrix(m, n, rng);
        const auto r = cut_distance_exact(a, b);
        EXPECT_NEAR(r.value, oracle::brute_cut_distance(a, b), 1e-12);
        EXPECT_NEAR(oracle::brute_cut_norm(apply_perm(a, r.perm) - b), r.value, 1e-12);
    }
}

TEST(CutDistanceHeuristic, Examples) {
    std::mt19937_64 rng(38);
    const auto a = oracle::random_matrix(6, 6, rng);
    EXPECT_EQ(cut_distance_heuristic(a, a).value, 0.0);
    for (int t = 0; t < 5; ++t) {
        const auto r = cut_distance_heuristic(a, apply_perm(a, random_perm(6, 6, rng)), t);
        EXPECT_NEAR(r.value, 0.0, 1e-12);
        EXPECT_FALSE(r.exact);
    }
    const auto parity = gen_parity(8).matrix();
    const auto blocks = gen_diagonal_blocks(8).matrix();
    EXPECT_NEAR(cut_distance_heuristic(parity, blocks).value, 0.0, 1e-12);
}

TEST(CutDistanceHeuristic, UpperBoundsTheExactValue) {
    std::mt19937_64 rng(39);
    for (int t = 0; t < 5; ++t) {
        const auto a = oracle::random_matrix(5, 5, rng);
        const auto b = oracle::random_matrix(5, 5, rng);
        const auto h = cut_distance_heuristic(a, b, t);
        EXPECT_GE(h.value, cut_distance_exact(a, b).value - 1e-12);
        EXPECT_NEAR(oracle::brute_cut_norm(apply_perm(a, h.perm) - b), h.value, 1e-12);
    }
}

TEST(CutDistanceToGraphon, Examples) {
    EXPECT_NEAR(cut_distance_to_graphon(DenseMatrix::constant(5, 5, 0.3), StepGraphon::constant(0.3)).value, 0.0, 1e-15);
    for (std::size_t k : {4, 6, 20}) {
        const auto half = gen_half_rows(k).matrix();
        const StepGraphon plane({0.0, 0.5, 1.0}, {0.0, 1.0}, DenseMatrix::from_rows({{1.0}, {0.0}}));
        EXPECT_NEAR(cut_distance_to_graphon(half, plane).value, 0.0, 1e-15) << k;
    }
}

TEST(CutDistanceToGraphon, HalfRowsAgainstConstantHalfIsOneHalf) {
    // Every row of the difference is constant +-1/2 with half of each sign, so
    // taking x = sign of the row and y = 1 gives 1/2 regardless of relabeling.
    const auto half = gen_half_rows(6).matrix();
    const auto r = cut_distance_to_graphon(half, StepGraphon::constant(0.5));
    EXPECT_TRUE(r.exact);
    EXPECT_NEAR(r.value, 0.5, 1e-15);
    EXPECT_NEAR(oracle::brute_cut_norm(half - DenseMatrix::constant(6, 6, 0.5)), 0.5, 1e-15);
}
