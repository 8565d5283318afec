#pragma once

#include "mclab/graphon.hpp"
#include "mclab/matrix.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace mclab {

/// A row partition and a column partition; together they define the blocks
/// rowPartition[a] x colPartition[b].
struct PartitionPair {
    std::vector<std::vector<std::size_t>> rowPartition;
    std::vector<std::vector<std::size_t>> colPartition;

    /// Throws unless each side is a partition of {0..m-1} / {0..n-1} into non-empty parts.
    void validate(std::size_t m, std::size_t n) const;
    std::size_t block_count() const noexcept { return rowPartition.size() * colPartition.size(); }

    static PartitionPair singletons(std::size_t m, std::size_t n);
    static PartitionPair whole(std::size_t m, std::size_t n);
    /// Parts are the label classes, ordered by first appearance.
    static PartitionPair from_labels(const std::vector<std::size_t>& rowLabels,
                                     const std::vector<std::size_t>& colLabels);
};

/// True when every part of `fine` lies inside a single part of `coarse`.
bool refines(const std::vector<std::vector<std::size_t>>& fine, const std::vector<std::vector<std::size_t>>& coarse,
             std::size_t universe);

/// A^{P,Q}: every block replaced by its mean.
DenseMatrix block_average(const DenseMatrix& a, const PartitionPair& part);

/// True when `a` is constant (to within tol) on every block of `part`.
bool is_block_constant(const DenseMatrix& a, const PartitionPair& part, double tol = 0.0);

struct BlockApproxParams {
    double q = 0.0;
    double eps = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double delta = 0.0;  ///< singular value cutoff alpha sqrt(mn)
    double gamma = 0.0;  ///< row-vector grid beta / sqrt(m)
    double eta = 0.0;    ///< column-vector grid beta / sqrt(n)
};

struct BlockApproxResult {
    DenseMatrix a;  ///< approximates X^{pi,tau}
    DenseMatrix b;  ///< approximates Y^{pi,tau}
    PermPair perm;
    PartitionPair partition;  ///< in permuted coordinates; parts are contiguous runs
    std::size_t blockCount = 0;
    std::size_t rankX = 0;  ///< singular triples kept for X
    std::size_t rankY = 0;
    double errX = 0.0;  ///< ||X^{pi,tau} - A|| averaged Frobenius
    double errY = 0.0;
    BlockApproxParams params;
};

/// Parameters of the simultaneous block construction for target error eps.
BlockApproxParams block_approx_params(double q, double eps, std::size_t m, std::size_t n);

/// The proven worst-case block count (20000 q^6 eps^-10)^(5 q^2 eps^-2), as log10.
double block_count_bound_log10(double q, double eps);

/// Simultaneous block approximation of X and Y by truncating small singular
/// values, quantising singular vectors toward zero, and grouping rows/columns
/// with identical quantised coordinates. Requires ||X||_inf, ||Y||_inf <= 1,
/// nuclear norms <= q sqrt(mn), q >= 1, eps in (0,1).
BlockApproxResult block_approximate_pair(const DenseMatrix& x, const DenseMatrix& y, double q, double eps);

struct TransferBound {
    double lhs = 0.0;  ///< ||(A-B) o Q||
    double rhs = 0.0;  ///< ||(A-B) o P|| + sqrt(b ||P-Q||_cut) ||A-B||_inf
    double cutNorm = 0.0;
    bool cutExact = false;
    std::size_t blocks = 0;
};

/// Evaluates both sides of the block transfer inequality for block matrices A,
/// B on `part`, binary P and Q with entries in [0,1].
TransferBound block_transfer_bound(const DenseMatrix& a, const DenseMatrix& b, const PartitionPair& part,
                                   const RevealMask& p, const DenseMatrix& q);

enum class LevelStatus { Verified, Inconclusive, Violated };

std::string to_string(LevelStatus s);

struct RefinementLevel {
    int j = 0;
    PartitionPair partition;
    DenseMatrix averaged;  ///< A^{P_j, Q_j}
    std::size_t rank = 0;  ///< singular triples above sqrt(mn)/j
    double residualCut = 0.0;  ///< certified bound on ||A - A^{P_j,Q_j}||_cut
    bool residualExact = false;
    double residualLimit = 0.0;   ///< 2/j + 6 j^3 2^-j
    double partSizeLimit = 0.0;   ///< (2^{j+2} j)^{j^2}
    LevelStatus status = LevelStatus::Verified;
};

struct RefinementSequence {
    std::vector<RefinementLevel> levels;  ///< j = 1..jMax

    std::string to_json() const;
};

inline constexpr int kMaxRefinementLevel = 8;

/// Weak-regularity style partitions from quantised singular vectors, one level
/// per j = 1..jMax. Requires ||A||_inf <= 1 and 1 <= jMax <= 8.
RefinementSequence refinement_sequence(const DenseMatrix& a, int jMax);

/// Finite analogue of extracting a limit: level-j block averages of each mask,
/// rendered as step graphons with canonically ordered classes, averaged over
/// the masks on a common refinement of their breakpoints.
StepGraphon limit_estimate(const std::vector<RevealMask>& masks, int j);

/// L1 distance between two step graphons.
double l1_distance(const StepGraphon& a, const StepGraphon& b);

}  // namespace mclab
