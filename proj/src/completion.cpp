#include "mclab/completion.hpp"

#include "mclab/errors.hpp"
#include "mclab/svd.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace mclab {

namespace {

void require_shapes(const DenseMatrix& b, const DenseMatrix& revealed, const RevealMask& p) {
    if (b.rows() != p.rows() || b.cols() != p.cols() || revealed.rows() != p.rows() ||
        revealed.cols() != p.cols())
        throw DimensionError("completion: matrix and mask dimensions differ");
}

void require_nonzero(const RevealMask& p) {
    if (p.count() == 0) throw std::invalid_argument("completion: the mask reveals no entries");
}

double feasibility_gap(const DenseMatrix& x, const DenseMatrix& revealed, const RevealMask& p,
                       std::optional<double> bound) {
    double gap = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) {
            if (p.revealed(i, j)) gap = std::max(gap, std::abs(x(i, j) - revealed(i, j)));
            if (bound) gap = std::max(gap, std::abs(x(i, j)) - *bound);
        }
    return gap;
}

// Two-block splitting for min ||X||_* + indicator_C(Z) s.t. X = Z, with
// over-relaxation. The returned estimate is the projected iterate Z, which is
// feasible by construction.
CompletionResult solve(const DenseMatrix& revealed, const RevealMask& p, const SolverConfig& cfg,
                       const std::function<DenseMatrix(const DenseMatrix&)>& project, std::optional<double> bound) {
    cfg.validate();
    require_nonzero(p);
    const double scale = std::sqrt(static_cast<double>(p.rows()) * static_cast<double>(p.cols()));
    const double alpha = cfg.overRelaxation;

    DenseMatrix z = project(hadamard(revealed, p));
    DenseMatrix u(p.rows(), p.cols());
    CompletionResult res{.estimate = z};

    for (int it = 1; it <= cfg.maxIters; ++it) {
        const DenseMatrix x = svt(z - u, 1.0 / cfg.rho);
        const DenseMatrix xh = alpha * x + (1.0 - alpha) * z;
        DenseMatrix zNext = project(xh + u);
        u = u + xh - zNext;

        res.primalResidual = frobenius(x - zNext) / scale;
        res.dualResidual = cfg.rho * frobenius(zNext - z) / scale;
        res.primalHistory.push_back(res.primalResidual);
        res.dualHistory.push_back(res.dualResidual);
        res.iterations = it;
        z = std::move(zNext);
        if (res.primalResidual < cfg.primalTol && res.dualResidual < cfg.dualTol) {
            res.converged = true;
            break;
        }
    }
    res.estimate = std::move(z);
    res.nuclearNorm = nuclear_norm(res.estimate);
    res.feasibilityGap = feasibility_gap(res.estimate, revealed, p, bound);
    return res;
}

}  // namespace

void SolverConfig::validate() const {
    if (!(rho > 0.0)) throw std::invalid_argument("solver: rho must be positive");
    if (maxIters < 1) throw std::invalid_argument("solver: maxIters must be positive");
    if (!(primalTol > 0.0 && primalTol < 1.0)) throw std::invalid_argument("solver: primalTol must lie in (0,1)");
    if (!(dualTol > 0.0 && dualTol < 1.0)) throw std::invalid_argument("solver: dualTol must lie in (0,1)");
    if (!(overRelaxation >= 1.0 && overRelaxation <= 1.9))
        throw std::invalid_argument("solver: overRelaxation must lie in [1, 1.9]");
}

DenseMatrix svt(const DenseMatrix& a, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("svt: threshold must be nonnegative");
    if (t == 0.0) return a;
    return svd(a).reconstruct_with([t](double s) { return std::max(s - t, 0.0); });
}

DenseMatrix project_feasible(const DenseMatrix& b, const DenseMatrix& revealed, const RevealMask& p, double bound) {
    require_shapes(b, revealed, p);
    if (!(bound > 0.0)) throw std::invalid_argument("project_feasible: bound must be positive");
    DenseMatrix out(b.rows(), b.cols());
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            if (p.revealed(i, j)) {
                const double v = revealed(i, j);
                if (std::abs(v) > bound) {
                    std::ostringstream msg;
                    msg << "revealed entry (" << i << "," << j << ") = " << v << " exceeds the bound " << bound;
                    throw InfeasibleError(msg.str());
                }
                out(i, j) = v;
            } else {
                out(i, j) = std::clamp(b(i, j), -bound, bound);
            }
        }
    return out;
}

DenseMatrix project_revealed(const DenseMatrix& b, const DenseMatrix& revealed, const RevealMask& p) {
    require_shapes(b, revealed, p);
    DenseMatrix out = b;
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            if (p.revealed(i, j)) out(i, j) = revealed(i, j);
    return out;
}

CompletionResult complete_modified_cr(const DenseMatrix& revealed, const RevealMask& p, double bound,
                                      const SolverConfig& cfg) {
    require_shapes(revealed, revealed, p);
    // Validates feasibility up front.
    project_feasible(revealed, revealed, p, bound);
    return solve(
        revealed, p, cfg, [&](const DenseMatrix& b) { return project_feasible(b, revealed, p, bound); }, bound);
}

CompletionResult complete_plain_cr(const DenseMatrix& revealed, const RevealMask& p, const SolverConfig& cfg) {
    require_shapes(revealed, revealed, p);
    return solve(
        revealed, p, cfg, [&](const DenseMatrix& b) { return project_revealed(b, revealed, p); }, std::nullopt);
}

}  // namespace mclab
