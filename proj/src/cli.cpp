#include "mclab/block_approx.hpp"
#include "mclab/completion.hpp"
#include "mclab/cut_norm.hpp"
#include "mclab/errors.hpp"
#include "mclab/graphon.hpp"
#include "mclab/lab.hpp"

#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace mclab {

namespace {

using json = nlohmann::ordered_json;

void emit_matrix(const DenseMatrix& a, const std::string& output) {
    if (output.empty() || output == "-")
        write_matrix(std::cout, a);
    else
        write_matrix_file(output, a);
}

std::string real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

RevealMask generate_mask(const std::string& family, std::size_t k, double density) {
    if (family == "half-rows" || family == "halfRows") return gen_half_rows(k);
    if (family == "parity") return gen_parity(k);
    if (family == "quasirandom") return gen_quasirandom(k, density);
    if (family == "diagonal-blocks" || family == "diagonalBlocks") return gen_diagonal_blocks(k);
    if (family == "all-ones" || family == "allOnes") return RevealMask::all(k, k);
    throw std::invalid_argument("unknown mask family: " + family);
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"Matrix completion laboratory: low-rank completion, cut norms, graphons and recovery probes"};
    app.require_subcommand(1);
    int status = 0;

    // complete
    std::string cMatrix, cMask, cOut;
    double cBound = 1.0;
    bool cPlain = false;
    SolverConfig solver;
    auto* complete = app.add_subcommand("complete", "Nuclear-norm completion of the revealed entries");
    complete->add_option("matrix", cMatrix, "Matrix file; hidden entries are ignored")->required();
    complete->add_option("mask", cMask, "0/1 mask file")->required();
    complete->add_option("-L,--bound", cBound, "Entry bound L of the modified estimator");
    complete->add_flag("--plain", cPlain, "Drop the entry bound");
    complete->add_option("--rho", solver.rho, "Penalty parameter");
    complete->add_option("--max-iters", solver.maxIters, "Iteration cap");
    complete->add_option("--primal-tol", solver.primalTol, "Primal residual tolerance");
    complete->add_option("--dual-tol", solver.dualTol, "Dual residual tolerance");
    complete->add_option("--over-relaxation", solver.overRelaxation, "Relaxation factor in [1, 1.9]");
    complete->add_option("-o,--output", cOut, "Estimate file (default stdout)");
    complete->callback([&] {
        const DenseMatrix a = read_matrix_file(cMatrix);
        const RevealMask p = read_mask_file(cMask);
        const DenseMatrix revealed = hadamard(a, p);
        const CompletionResult r =
            cPlain ? complete_plain_cr(revealed, p, solver) : complete_modified_cr(revealed, p, cBound, solver);
        emit_matrix(r.estimate, cOut);
        std::cerr << "iterations " << r.iterations << " nuclear " << real(r.nuclearNorm) << " primal "
                  << real(r.primalResidual) << " dual " << real(r.dualResidual) << '\n';
        if (!r.converged) {
            std::cerr << "error: solver did not reach tolerance in " << r.iterations << " iterations\n";
            status = 2;
        }
    });

    // cutnorm
    std::string nMatrix;
    bool nExact = false;
    int nRestarts = 50;
    std::uint64_t nSeed = 0;
    auto* cutnorm = app.add_subcommand("cutnorm", "Cut norm of a matrix");
    cutnorm->add_option("matrix", nMatrix, "Matrix file")->required();
    cutnorm->add_flag("--exact", nExact, "Exhaustive search (shorter side at most 25)");
    cutnorm->add_option("--restarts", nRestarts, "Restarts of the alternating heuristic")->check(CLI::PositiveNumber);
    cutnorm->add_option("--seed", nSeed, "Seed of the heuristic");
    cutnorm->callback([&] {
        const DenseMatrix a = read_matrix_file(nMatrix);
        if (nExact) {
            std::cout << real(cut_norm_exact(a).value()) << '\n';
        } else {
            const CutNormEstimate e = cut_norm_lower(a, nRestarts, nSeed);
            std::cout << real(e.lowerBound) << ' ' << real(e.upperBound) << '\n';
        }
    });

    // cutdist
    std::string dA, dB;
    bool dExact = false;
    std::uint64_t dSeed = 0;
    auto* cutdist = app.add_subcommand("cutdist", "Cut distance between two matrices of equal shape");
    cutdist->add_option("a", dA, "First matrix file")->required();
    cutdist->add_option("b", dB, "Second matrix file")->required();
    cutdist->add_flag("--exact", dExact, "Enumerate all relabelings (dimensions at most 7)");
    cutdist->add_option("--seed", dSeed, "Seed of the annealing search");
    cutdist->callback([&] {
        const DenseMatrix a = read_matrix_file(dA);
        const DenseMatrix b = read_matrix_file(dB);
        const bool small = a.rows() <= kExactCutDistanceLimit && a.cols() <= kExactCutDistanceLimit;
        const CutDistanceResult r =
            (dExact || small) ? cut_distance_exact(a, b) : cut_distance_heuristic(a, b, dSeed);
        std::cout << real(r.value) << ' ' << (r.exact ? "exact" : "upper-bound") << '\n';
    });

    // discretize
    std::string gFile, gOut;
    std::size_t gM = 0, gN = 0;
    auto* discretize_cmd = app.add_subcommand("discretize", "m x n block averages of a step graphon");
    discretize_cmd->add_option("graphon", gFile, "Step graphon file")->required();
    discretize_cmd->add_option("m", gM, "Rows")->required()->check(CLI::PositiveNumber);
    discretize_cmd->add_option("n", gN, "Columns")->required()->check(CLI::PositiveNumber);
    discretize_cmd->add_option("-o,--output", gOut, "Matrix file (default stdout)");
    discretize_cmd->callback([&] { emit_matrix(discretize(read_step_graphon_file(gFile), gM, gN), gOut); });

    // verdict
    std::string vFile;
    std::vector<double> vEta;
    auto* verdict = app.add_subcommand("verdict", "Recovery verdict from the zero set of a step graphon");
    verdict->add_option("graphon", vFile, "Step graphon file")->required();
    verdict->add_option("--eta", vEta, "Thresholds for phi(eta)")->delimiter(',');
    verdict->callback([&] {
        const StepGraphon w = read_step_graphon_file(vFile);
        const ZeroMeasureReport r = vEta.empty() ? recovery_verdict(w) : recovery_verdict(w, vEta);
        json out{{"etaGrid", r.etaGrid}, {"phi", r.phiValues}, {"admitsRecovery", r.admitsRecovery}};
        if (r.resolutionWarning) out["warning"] = *r.resolutionWarning;
        std::cout << out.dump(2) << '\n';
    });

    // probe
    std::string pMask, pWitness, pReport;
    int pRank = 1;
    double pBound = 1.0;
    std::uint64_t pSeed = 0;
    ProbeOptions probeOpts;
    auto* probe = app.add_subcommand("probe", "Search for low-rank pairs that agree on the mask but differ elsewhere");
    probe->add_option("mask", pMask, "0/1 mask file")->required();
    probe->add_option("-K,--rank", pRank, "Rank bound K")->check(CLI::PositiveNumber);
    probe->add_option("-L,--bound", pBound, "Entry bound L");
    probe->add_option("--seed", pSeed, "Seed of the random starts");
    probe->add_option("--lambda", probeOpts.lambda, "Weight of the masked difference");
    probe->add_option("--iterations", probeOpts.iterations, "Iterations per start");
    probe->add_option("--starts", probeOpts.starts, "Random starts");
    probe->add_option("--witness", pWitness, "Write the witness pair to <prefix>_A.txt and <prefix>_B.txt");
    probe->add_option("--report", pReport, "Write the full report, with the search log, as JSON");
    probe->callback([&] {
        const RevealMask p = read_mask_file(pMask);
        const ProbeReport r = probe_stable_recovery(p, pRank, pBound, pSeed, probeOpts);
        json out{{"k", p.rows()},
                 {"cols", p.cols()},
                 {"maskedDiff", r.maskedDiff},
                 {"fullDiff", r.fullDiff},
                 {"witnessSource", r.witnessSource},
                 {"verdict", to_string(r.verdict)}};
        std::cout << out.dump(2) << '\n';
        if (!pWitness.empty()) {
            write_matrix_file(pWitness + "_A.txt", r.witnessA);
            write_matrix_file(pWitness + "_B.txt", r.witnessB);
        }
        if (!pReport.empty()) {
            json log = json::array();
            for (const auto& e : r.log)
                log.push_back({{"start", e.start},
                               {"iteration", e.iteration},
                               {"objective", e.objective},
                               {"maskedDiff", e.maskedDiff},
                               {"fullDiff", e.fullDiff}});
            out["log"] = log;
            write_file_atomic(pReport, out.dump(2) + "\n");
        }
    });

    // experiment
    std::string eConfig, eOut;
    auto* experiment = app.add_subcommand("experiment", "Run a completion experiment from a key = value config");
    experiment->add_option("config", eConfig, "Config file")->required();
    experiment->add_option("-o,--output", eOut, "Output prefix; overrides the config");
    experiment->callback([&] {
        ExperimentConfig cfg = read_experiment_config_file(eConfig);
        if (!eOut.empty()) cfg.outputPath = eOut;
        const ExperimentReport r = run_completion_experiment(cfg);
        std::cout << "k errModified errPlain maskedDiff fullDiff probe\n";
        for (const auto& c : r.cells)
            std::cout << c.k << ' ' << real(c.errModified) << ' ' << real(c.errPlain) << ' ' << real(c.maskedDiff)
                      << ' ' << real(c.fullDiff) << ' ' << to_string(c.probeVerdict) << '\n';
        std::cout << "wrote " << cfg.outputPath << ".json and " << cfg.outputPath << ".csv\n";
    });

    // generate
    std::string fFamily, fOut;
    std::size_t fK = 0;
    double fDensity = 0.5;
    auto* generate = app.add_subcommand("generate", "Write a k x k mask of a pattern family");
    generate->add_option("family", fFamily, "half-rows, parity, quasirandom, diagonal-blocks or all-ones")->required();
    generate->add_option("k", fK, "Size")->required()->check(CLI::PositiveNumber);
    generate->add_option("--density", fDensity, "Target density of quasirandom masks");
    generate->add_option("-o,--output", fOut, "Mask file (default stdout)");
    generate->callback([&] { emit_matrix(generate_mask(fFamily, fK, fDensity).matrix(), fOut); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << " (residual " << e.residual() << ")\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return status;
}

}  // namespace mclab
