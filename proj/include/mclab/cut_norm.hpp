#pragma once

#include "mclab/graphon.hpp"
#include "mclab/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mclab {

/// Bounds on ||A||_cut = max |x^T A y| / (mn) over x in [-1,1]^m, y in [-1,1]^n.
/// The witnesses attain the lower bound.
struct CutNormEstimate {
    double lowerBound = 0.0;
    double upperBound = 0.0;
    std::vector<double> witnessX;
    std::vector<double> witnessY;
    bool exact = false;

    double value() const noexcept { return lowerBound; }
};

/// Largest shorter-side dimension accepted by cut_norm_exact.
inline constexpr std::size_t kExactCutNormLimit = 25;
/// Largest dimension accepted by cut_distance_exact.
inline constexpr std::size_t kExactCutDistanceLimit = 7;

/// Exact cut norm by enumerating sign vectors on the shorter side (the bilinear
/// form is maximised at vertices of the box). Throws DimensionError when
/// min(m, n) > kExactCutNormLimit.
CutNormEstimate cut_norm_exact(const DenseMatrix& a);

/// Alternating maximisation from random sign starts. Always a valid lower bound;
/// upperBound is cut_norm_upper(a).
CutNormEstimate cut_norm_lower(const DenseMatrix& a, int restarts = 50, std::uint64_t seed = 0);

/// min(sigma_1 / sqrt(mn), mean |a_ij|), a certified upper bound.
double cut_norm_upper(const DenseMatrix& a);

/// Exact value when affordable, else the certified upper bound.
double cut_norm_certified(const DenseMatrix& a, bool* exact = nullptr);

struct CutDistanceResult {
    double value = 0.0;  ///< delta(A, B) when exact, otherwise an upper bound
    PermPair perm;       ///< permutation of A attaining `value`
    bool exact = false;
};

/// min over row/column relabelings of ||A^{pi,tau} - B||_cut, by enumeration.
CutDistanceResult cut_distance_exact(const DenseMatrix& a, const DenseMatrix& b);

struct AnnealOptions {
    int restarts = 20;
    double decay = 0.95;             ///< temperature factor per stage
    int proposalsPerSize = 100;      ///< a stage has proposalsPerSize * (m + n) proposals
    double coolTo = 1e-3;   ///< a restart ends once the temperature is below coolTo * initial
    double maxWork = 2e9;   ///< budget across restarts, in proposals * m * n
};

/// Upper bound on the cut distance from simulated annealing over pairwise row
/// and column swaps, started from row/column-sum orderings.
CutDistanceResult cut_distance_heuristic(const DenseMatrix& a, const DenseMatrix& b, std::uint64_t seed = 0,
                                         const AnnealOptions& opts = {});

/// delta(A, W) = delta(A, W_{m,n}); exact when both dimensions allow enumeration.
CutDistanceResult cut_distance_to_graphon(const DenseMatrix& a, const Graphon& w, std::uint64_t seed = 0);

}  // namespace mclab
