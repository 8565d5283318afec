#include "mclab/graphon.hpp"
#include "mclab/lab.hpp"
#include "mclab/matrix.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

using namespace mclab;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "mclab");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    auto* oldOut = std::cout.rdbuf(out.rdbuf());
    auto* oldErr = std::cerr.rdbuf(err.rdbuf());
    Run r;
    r.code = cli_main(static_cast<int>(argv.size()), argv.data());
    std::cout.rdbuf(oldOut);
    std::cerr.rdbuf(oldErr);
    r.out = out.str();
    r.err = err.str();
    return r;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("mclab_test_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(dir_ / name) << text;
        return path(name);
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenerateThenProbeFindsViolation) {
    ASSERT_EQ(run({"generate", "half-rows", "4", "-o", path("mask.txt")}).code, 0);
    EXPECT_EQ(read_mask_file(path("mask.txt")), gen_half_rows(4));
    const auto r = run({"probe", path("mask.txt"), "-K", "1", "--witness", path("w"), "--report", path("r.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["verdict"], "violation-found");
    EXPECT_LE(j["maskedDiff"].get<double>(), 1e-6);
    const auto a = read_matrix_file(path("w_A.txt"));
    const auto b = read_matrix_file(path("w_B.txt"));
    EXPECT_NEAR(avg_frobenius(a - b), j["fullDiff"].get<double>(), 1e-12);
    std::ifstream rep(path("r.json"));
    EXPECT_TRUE(nlohmann::json::parse(rep).contains("log"));
}

TEST_F(Cli, GenerateToStdout) {
    const auto r = run({"generate", "all-ones", "2"});
    EXPECT_EQ(r.code, 0);
    std::istringstream in(r.out);
    EXPECT_EQ(read_matrix(in), DenseMatrix::constant(2, 2, 1.0));
    EXPECT_EQ(run({"generate", "stripes", "4"}).code, 1);
}

TEST_F(Cli, CutNormAndDistance) {
    const auto zero = write("z.txt", "2 3\n0 0 0\n0 0 0\n");
    auto r = run({"cutnorm", zero, "--exact"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(std::stod(r.out), 0.0);
    const auto ones = write("o.txt", "2 3\n1 1 1\n1 1 1\n");
    r = run({"cutnorm", ones});
    EXPECT_EQ(r.code, 0);
    double lo = 0, hi = 0;
    std::istringstream(r.out) >> lo >> hi;
    EXPECT_DOUBLE_EQ(lo, 1.0);
    EXPECT_GE(hi, lo);
    r = run({"cutdist", ones, zero});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("exact"), std::string::npos);
    EXPECT_DOUBLE_EQ(std::stod(r.out), 1.0);
}

TEST_F(Cli, DiscretizeAndVerdict) {
    const auto g = write("g.txt", "1 1\n0 1\n0 1\n0.5\n");
    auto r = run({"discretize", g, "3", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    EXPECT_EQ(read_matrix(in), DenseMatrix::constant(3, 3, 0.5));
    const auto half = write("h.txt", "2 1\n0 0.5 1\n0 1\n1\n0\n");
    r = run({"verdict", half, "--eta", "0.25,0.5"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_FALSE(j["admitsRecovery"].get<bool>());
    ASSERT_EQ(j["etaGrid"].size(), 3u);
    EXPECT_EQ(j["etaGrid"][0].get<double>(), 0.0);
    EXPECT_EQ(j["phi"][0].get<double>(), 0.5);
    EXPECT_EQ(j["phi"][2].get<double>(), 0.5);
}

TEST_F(Cli, CompleteWritesEstimate) {
    const auto a = write("a.txt", "2 2\n1 1\n1 0\n");
    const auto p = write("p.txt", "2 2\n1 1\n1 0\n");
    const auto r = run({"complete", a, p, "-o", path("est.txt")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(read_matrix_file(path("est.txt"))(1, 1), 1.0, 1e-3);
    EXPECT_EQ(run({"complete", a, p, "--max-iters", "1", "-o", path("e2.txt")}).code, 2);
    EXPECT_TRUE(fs::exists(path("e2.txt")));
}

TEST_F(Cli, UsageErrorsExitOne) {
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"frobnicate"}).code, 1);
    EXPECT_EQ(run({"cutnorm"}).code, 1);
    EXPECT_EQ(run({"discretize", "g.txt", "0", "3"}).code, 1);
    EXPECT_EQ(run({"--help"}).code, 0);
    const auto r = run({"cutnorm", path("missing.txt")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("missing.txt"), std::string::npos);
}

TEST_F(Cli, MalformedFilesReportLineNumbers) {
    const auto bad = write("bad.txt", "2 2\n1 1\n1 x\n");
    auto r = run({"cutnorm", bad});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;

    const auto mask = write("mask.txt", "2 2\n1 0\n0.5 1\n");
    r = run({"probe", mask});
    EXPECT_EQ(r.code, 1);

    const auto g = write("g.txt", "1 1\n0 1\n0 0.5 1\n0.5\n");
    r = run({"verdict", g});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;

    const auto cfg = write("c.cfg", "sizes = 4\n\nrank 2\n");
    r = run({"experiment", cfg});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST_F(Cli, ShapeMismatchIsUsageError) {
    const auto a = write("a.txt", "2 2\n1 1\n1 1\n");
    const auto b = write("b.txt", "3 2\n1 1\n1 1\n1 1\n");
    EXPECT_EQ(run({"cutdist", a, b}).code, 1);
    EXPECT_EQ(run({"complete", a, b}).code, 1);
}

TEST_F(Cli, ExperimentWritesReports) {
    const auto cfg = write("c.cfg", "pattern = halfRows\nsizes = 4 6\nrank = 1\nprobe.iterations = 20\n");
    const auto r = run({"experiment", cfg, "-o", path("out")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(path("out.json")));
    EXPECT_TRUE(fs::exists(path("out.csv")));
    std::ifstream in(path("out.json"));
    EXPECT_EQ(nlohmann::json::parse(in)["perSize"].size(), 2u);
}
