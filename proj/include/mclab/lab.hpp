#pragma once

#include "mclab/completion.hpp"
#include "mclab/matrix.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mclab {

enum class PatternFamily { HalfRows, Parity, Quasirandom, FromFile };

std::string to_string(PatternFamily f);
/// Accepts camelCase ("halfRows") and kebab-case ("half-rows") names.
PatternFamily parse_pattern_family(const std::string& name);

/// Knobs of the stable-recovery adversary.
struct ProbeOptions {
    double lambda = 10.0;  ///< weight of the masked difference in the objective
    int iterations = 200;  ///< per start
    int starts = 4;        ///< random starts, in addition to the injected witness
    double maskedThreshold = 1e-6;  ///< a violation needs maskedDiff at most this
    double fullThreshold = 0.1;     ///< and fullDiff at least this

    void validate() const;
};

enum class ProbeVerdict { StableLooking, ViolationFound };

std::string to_string(ProbeVerdict v);

struct ProbeLogEntry {
    int start = 0;  ///< 0 is the injected witness, 1.. are random starts
    int iteration = 0;
    double objective = 0.0;
    double maskedDiff = 0.0;
    double fullDiff = 0.0;
};

struct ProbeReport {
    double maskedDiff = 0.0;  ///< ||(A - B) o P|| averaged Frobenius
    double fullDiff = 0.0;    ///< ||A - B|| averaged Frobenius
    DenseMatrix witnessA;
    DenseMatrix witnessB;
    std::string witnessSource;  ///< "injected" or "start <s>"
    std::vector<ProbeLogEntry> log;
    ProbeVerdict verdict = ProbeVerdict::StableLooking;
};

/// Searches for A = U1 V1^T, B = U2 V2^T of rank <= K and entries bounded by L
/// that agree on the revealed entries but differ elsewhere, maximising
/// fullDiff - lambda * maskedDiff. Factors are rescaled, never clipped, so
/// ranks stay bounded. The zero matrix against the best rank-K approximation of
/// L (1 - P) is always tried first. Deterministic for a given seed.
ProbeReport probe_stable_recovery(const RevealMask& p, int rankBound, double boxBound, std::uint64_t seed,
                                  const ProbeOptions& opts = {});

struct ExperimentConfig {
    PatternFamily pattern = PatternFamily::Quasirandom;
    std::vector<std::size_t> sizes;
    int rankBound = 2;
    double boxBound = 1.0;
    SolverConfig solver;
    ProbeOptions probe;
    std::uint64_t seed = 0;
    std::string outputPath = "report";  ///< writes <outputPath>.json and <outputPath>.csv
    std::vector<std::string> maskFiles;  ///< FromFile only, one per size
    double density = 0.5;                ///< Quasirandom only

    void validate() const;
};

/// "key = value" lines; '#' starts a comment. Keys: pattern, sizes, rank, L,
/// seed, output, maskFiles, density, solver.{rho,maxIters,primalTol,dualTol,
/// overRelaxation}, probe.{lambda,iterations,starts}. Lists are comma or space
/// separated.
ExperimentConfig parse_experiment_config(std::istream& in);
/// As above; relative mask paths are resolved against the config file's directory.
ExperimentConfig read_experiment_config_file(const std::string& path);

/// Mask of the configured family for the index-th size.
RevealMask experiment_mask(const ExperimentConfig& cfg, std::size_t index);

/// Rank-K ground truth U V^T with +-1 factors, rescaled so the largest entry has
/// magnitude exactly L. Deterministic in (seed, m, n).
DenseMatrix synthesize_ground_truth(std::size_t m, std::size_t n, int rankBound, double boxBound,
                                    std::uint64_t seed);

struct ExperimentCell {
    std::size_t k = 0;
    std::size_t cols = 0;
    double density = 0.0;
    double maskedDiff = 0.0;
    double fullDiff = 0.0;
    ProbeVerdict probeVerdict = ProbeVerdict::StableLooking;
    double errModified = 0.0;
    double errPlain = 0.0;
    double nuclearTruth = 0.0;
    double nuclearModified = 0.0;
    double nuclearPlain = 0.0;
    int itersModified = 0;
    int itersPlain = 0;
    bool convergedModified = false;
    bool convergedPlain = false;
    double primalResidualModified = 0.0;
    double dualResidualModified = 0.0;
    double primalResidualPlain = 0.0;
    double dualResidualPlain = 0.0;
};

struct ExperimentReport {
    std::vector<ExperimentCell> cells;
    std::string json;  ///< includes the timestamp under "metadata" only
    std::string csv;
};

/// Runs both estimators and the adversary on every size (cells in parallel),
/// then writes the JSON and CSV reports atomically. Pass write = false to skip
/// the files.
ExperimentReport run_completion_experiment(const ExperimentConfig& cfg, bool write = true);

/// Command-line entry point. Returns 0 on success, 1 on usage or input errors,
/// 2 on numerical failure.
int cli_main(int argc, char** argv);

}  // namespace mclab
