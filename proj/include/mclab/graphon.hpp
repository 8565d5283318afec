#pragma once

#include "mclab/matrix.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mclab {

/// Piecewise-constant asymmetric graphon on [0,1]^2. Block (a, b) covers
/// [rowBreaks[a], rowBreaks[a+1]] x [colBreaks[b], colBreaks[b+1]].
struct StepGraphon {
    std::vector<double> rowBreaks;
    std::vector<double> colBreaks;
    DenseMatrix values;  ///< (rowBreaks.size()-1) x (colBreaks.size()-1), entries in [0,1]

    /// Validates breakpoints (strictly increasing from 0 to 1) and value range.
    StepGraphon(std::vector<double> rowBreaks, std::vector<double> colBreaks, DenseMatrix values);

    static StepGraphon constant(double p);
    /// Equal-width blocks, one per entry of `values`.
    static StepGraphon uniform_grid(DenseMatrix values);

    double operator()(double x, double y) const;
};

/// A graphon given by a callable. The evaluator must be deterministic and
/// Riemann integrable; its values are checked to lie in [0,1].
struct AnalyticGraphon {
    std::function<double(double, double)> evaluator;
    int quadratureDepth = 12;  ///< maximum dyadic refinement level

    double operator()(double x, double y) const;
};

using Graphon = std::variant<StepGraphon, AnalyticGraphon>;

/// m x n discrete approximation: entry (i, j) is the average of W over
/// [i/m, (i+1)/m] x [j/n, (j+1)/n]. Exact for step graphons; adaptive dyadic
/// midpoint rule to relative 1e-8 for analytic ones (NumericalError when the
/// maximum depth is reached first).
DenseMatrix discretize(const Graphon& w, std::size_t m, std::size_t n);

/// Lebesgue measure of {(x, y) : W(x, y) <= eta}. Exact for step graphons; for
/// analytic graphons, centre sampling on a 2^depth x 2^depth grid.
double zero_measure(const Graphon& w, double eta);

/// Grid cell area used by zero_measure, 0 when the value is exact.
double zero_measure_resolution(const Graphon& w);

struct ZeroMeasureReport {
    std::vector<double> etaGrid;
    std::vector<double> phiValues;
    bool admitsRecovery = false;
    std::optional<std::string> resolutionWarning;
};

std::vector<double> default_eta_grid();

/// Stable recovery holds for sequences converging to W iff W is nonzero almost
/// everywhere, i.e. iff phi(0) = 0.
ZeroMeasureReport recovery_verdict(const Graphon& w, std::vector<double> etaGrid = default_eta_grid());

/// Top floor(k/2) rows revealed.
RevealMask gen_half_rows(std::size_t k);
/// Entry revealed iff row and column indices have the same parity. k must be even.
RevealMask gen_parity(std::size_t k);
/// Revealed iff both indices lie in the first half or both in the second half.
RevealMask gen_diagonal_blocks(std::size_t k);
/// Relabeling that sends gen_parity(k) to gen_diagonal_blocks(k).
PermPair parity_block_perm(std::size_t k);

/// Smallest prime q >= k with q = 1 (mod 4).
std::size_t paley_prime(std::size_t k);

/// Deterministic quasirandom mask. For densityTarget == 1/2, entry (i, j)
/// (1-based) is revealed iff (i + j) mod q is a nonzero quadratic residue mod
/// q; otherwise iff ((i * j) mod q) / q < densityTarget.
RevealMask gen_quasirandom(std::size_t k, double densityTarget = 0.5);

// Step graphon text format: "p q", row breakpoints, column breakpoints, then
// p lines of q block values.
StepGraphon read_step_graphon(std::istream& in);
StepGraphon read_step_graphon_file(const std::string& path);
void write_step_graphon(std::ostream& out, const StepGraphon& w);

}  // namespace mclab
