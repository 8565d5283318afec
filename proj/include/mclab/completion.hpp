#pragma once

#include "mclab/matrix.hpp"

#include <vector>

namespace mclab {

/// Parameters of the nuclear-norm splitting solver.
struct SolverConfig {
    double rho = 1.0;             ///< augmented-Lagrangian penalty; nuclear prox uses 1/rho
    int maxIters = 2000;
    double primalTol = 1e-6;      ///< on ||X - Z|| in averaged Frobenius norm
    double dualTol = 1e-6;        ///< on rho ||Z - Z_prev|| in averaged Frobenius norm
    double overRelaxation = 1.6;  ///< in [1, 1.9]

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

struct CompletionResult {
    DenseMatrix estimate;
    double nuclearNorm = 0.0;
    int iterations = 0;
    double primalResidual = 0.0;
    double dualResidual = 0.0;
    double feasibilityGap = 0.0;  ///< max violation of revealed-entry agreement and of the box
    bool converged = false;
    std::vector<double> primalHistory;
    std::vector<double> dualHistory;
};

/// Proximal map of t * ||.||_*: sum_i max(s_i - t, 0) u_i v_i^T.
DenseMatrix svt(const DenseMatrix& a, double t);

/// Euclidean projection onto {B : B agrees with `revealed` on P, ||B||_inf <= L}.
/// Throws InfeasibleError when a revealed value exceeds L in magnitude.
DenseMatrix project_feasible(const DenseMatrix& b, const DenseMatrix& revealed, const RevealMask& p, double bound);

/// Projection onto {B : B agrees with `revealed` on P} (no box).
DenseMatrix project_revealed(const DenseMatrix& b, const DenseMatrix& revealed, const RevealMask& p);

/// Nuclear-norm minimiser among matrices that agree with `revealed` on P and
/// have all entries bounded by L in magnitude.
CompletionResult complete_modified_cr(const DenseMatrix& revealed, const RevealMask& p, double bound,
                                      const SolverConfig& cfg = {});

/// Nuclear-norm minimiser among matrices that agree with `revealed` on P.
CompletionResult complete_plain_cr(const DenseMatrix& revealed, const RevealMask& p, const SolverConfig& cfg = {});

}  // namespace mclab
