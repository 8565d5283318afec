#include "mclab/errors.hpp"
#include "mclab/matrix.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace mclab;

TEST(DenseMatrix, RejectsEmptyShapes) {
    EXPECT_THROW(DenseMatrix(0, 3), DimensionError);
    EXPECT_THROW(DenseMatrix(2, 0), DimensionError);
    EXPECT_THROW(DenseMatrix(2, 2, std::vector<double>{1, 2, 3}), DimensionError);
    EXPECT_THROW(DenseMatrix::from_rows({{1, 2}, {3}}), DimensionError);
}

TEST(DenseMatrix, ArithmeticAndShapeChecks) {
    const auto a = DenseMatrix::from_rows({{1, 2}, {3, 4}});
    const auto b = DenseMatrix::from_rows({{5, 6}, {7, 8}});
    EXPECT_EQ(a + b, DenseMatrix::from_rows({{6, 8}, {10, 12}}));
    EXPECT_EQ(b - a, DenseMatrix::constant(2, 2, 4.0));
    EXPECT_EQ(matmul(a, b), DenseMatrix::from_rows({{19, 22}, {43, 50}}));
    EXPECT_EQ(a.transpose(), DenseMatrix::from_rows({{1, 3}, {2, 4}}));
    EXPECT_THROW(a + DenseMatrix(2, 3), DimensionError);
    EXPECT_THROW(matmul(a, DenseMatrix(3, 1)), DimensionError);
}

TEST(DenseMatrix, CheckFinite) {
    DenseMatrix a(2, 2);
    EXPECT_NO_THROW(a.check_finite());
    a(1, 0) = std::nan("");
    EXPECT_THROW(a.check_finite(), std::domain_error);
}

TEST(AvgFrobenius, Examples) {
    EXPECT_EQ(avg_frobenius(DenseMatrix(5, 7)), 0.0);
    EXPECT_DOUBLE_EQ(avg_frobenius(DenseMatrix::constant(3, 4, 1.0)), 1.0);
    for (std::size_t k : {2, 8, 64}) {
        DenseMatrix a(k, k);
        for (std::size_t i = k / 2; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) a(i, j) = 1.0;
        EXPECT_NEAR(avg_frobenius(a), 1.0 / std::sqrt(2.0), 1e-15);
    }
}

TEST(AvgFrobenius, MatchesOracleOnRandom) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 10; ++t) {
        const auto a = oracle::random_matrix(1 + t, 7, rng);
        EXPECT_NEAR(avg_frobenius(a), oracle::avg_frobenius(a), 1e-14);
        EXPECT_NEAR(frobenius(a), oracle::avg_frobenius(a) * std::sqrt(7.0 * (1 + t)), 1e-12);
    }
}

TEST(LinfNorm, Examples) {
    EXPECT_EQ(linf_norm(DenseMatrix(3, 3)), 0.0);
    DenseMatrix a(3, 2);
    a(2, 1) = -3.5;
    EXPECT_EQ(linf_norm(a), 3.5);
    EXPECT_EQ(linf_norm(DenseMatrix::from_rows({{1, -1}, {-1, 1}})), 1.0);
}

TEST(Hadamard, Examples) {
    std::mt19937_64 rng(1);
    const auto a = oracle::random_matrix(3, 4, rng);
    EXPECT_EQ(hadamard(a, RevealMask::all(3, 4)), a);
    EXPECT_EQ(hadamard(a, RevealMask(DenseMatrix(3, 4))), DenseMatrix(3, 4));
    EXPECT_EQ(hadamard(DenseMatrix::from_rows({{1, 2}, {3, 4}}), DenseMatrix::from_rows({{1, 0}, {0, 1}})),
              DenseMatrix::from_rows({{1, 0}, {0, 4}}));
    EXPECT_THROW(hadamard(a, DenseMatrix(4, 3)), DimensionError);
}

TEST(RevealMask, ValidatesEntries) {
    EXPECT_THROW(RevealMask(DenseMatrix::from_rows({{1, 0.5}})), std::invalid_argument);
    const RevealMask p(DenseMatrix::from_rows({{1, 0}, {1, 1}}));
    EXPECT_EQ(p.count(), 3u);
    EXPECT_DOUBLE_EQ(p.density(), 0.75);
    EXPECT_TRUE(p.revealed(0, 0));
    EXPECT_FALSE(p.revealed(0, 1));
}

TEST(ApplyPerm, Examples) {
    std::mt19937_64 rng(2);
    const auto a = oracle::random_matrix(3, 5, rng);
    EXPECT_EQ(apply_perm(a, PermPair::identity(3, 5)), a);
    const auto col = DenseMatrix::from_rows({{1.5}, {-2}});
    EXPECT_EQ(apply_perm(col, PermPair({1, 0}, {0})), DenseMatrix::from_rows({{-2}, {1.5}}));
    EXPECT_THROW(apply_perm(a, PermPair::identity(5, 3)), DimensionError);
    EXPECT_THROW(PermPair({0, 0}, {0}), std::invalid_argument);
}

TEST(ApplyPerm, CompositionLawByIndexCheck) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
        const auto a = oracle::random_matrix(4, 5, rng);
        std::vector<std::size_t> r1{0, 1, 2, 3}, c1{0, 1, 2, 3, 4}, r2 = r1, c2 = c1;
        std::shuffle(r1.begin(), r1.end(), rng);
        std::shuffle(c1.begin(), c1.end(), rng);
        std::shuffle(r2.begin(), r2.end(), rng);
        std::shuffle(c2.begin(), c2.end(), rng);
        const PermPair p(r1, c1), q(r2, c2);
        const auto twice = apply_perm(apply_perm(a, p), q);
        // Brute-force: entry (i, j) of the twice-permuted matrix.
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 5; ++j) ASSERT_EQ(twice(i, j), a(r1[r2[i]], c1[c2[j]]));
        EXPECT_EQ(twice, apply_perm(a, then(p, q)));
        EXPECT_EQ(apply_perm(apply_perm(a, p), p.inverse()), a);
    }
}

TEST(MatrixIo, RoundTripIsExact) {
    std::mt19937_64 rng(5);
    const auto a = oracle::random_matrix(4, 3, rng, -1e6, 1e6);
    std::stringstream s;
    write_matrix(s, a);
    EXPECT_EQ(read_matrix(s), a);
}

TEST(MatrixIo, SkipsBlankLines) {
    std::istringstream s("\n2 2\n1 2\n\n3 4\n\n");
    EXPECT_EQ(read_matrix(s), DenseMatrix::from_rows({{1, 2}, {3, 4}}));
}

namespace {

std::size_t parse_error_line(const std::string& text) {
    std::istringstream s(text);
    try {
        read_matrix(s);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST(MatrixIo, MalformedInputReportsLine) {
    EXPECT_EQ(parse_error_line(""), 1u);
    EXPECT_EQ(parse_error_line("2 x\n"), 1u);
    EXPECT_EQ(parse_error_line("2 2\n1 2\n3 abc\n"), 3u);
    EXPECT_EQ(parse_error_line("2 2\n1 2 3\n3 4\n"), 2u);
    EXPECT_EQ(parse_error_line("2 2\n1\n3 4\n"), 2u);
    EXPECT_EQ(parse_error_line("2 2\n1 2\n"), 3u);
    EXPECT_EQ(parse_error_line("1 1\n1\n9 9\n"), 3u);
}

TEST(MatrixIo, FilesAndMasks) {
    const auto dir = std::filesystem::temp_directory_path() / "mclab_test_matrix";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "m.txt").string();
    write_matrix_file(path, DenseMatrix::from_rows({{1, 0}, {0, 1}}));
    EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
    EXPECT_EQ(read_mask_file(path).count(), 2u);

    std::ofstream(dir / "bad.txt") << "2 2\n1 0\n0 0.5\n";
    try {
        read_mask_file((dir / "bad.txt").string());
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find("bad.txt"), std::string::npos);
    }
    EXPECT_THROW(read_matrix_file((dir / "missing.txt").string()), IoError);
    std::filesystem::remove_all(dir);
}
