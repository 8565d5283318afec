#pragma once

#include "mclab/matrix.hpp"

#include <cstddef>
#include <vector>

namespace mclab {

/// Rank-truncated singular value decomposition A = sum_i s_i u_i v_i^T.
struct SvdFactors {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;              ///< non-increasing, strictly positive
    std::vector<std::vector<double>> left;   ///< u_i, length rows, orthonormal
    std::vector<std::vector<double>> right;  ///< v_i, length cols, orthonormal

    std::size_t rank() const noexcept { return values.size(); }

    /// sum_i f(s_i) u_i v_i^T over the retained triples.
    template <class F>
    DenseMatrix reconstruct_with(F&& f) const {
        DenseMatrix out(rows, cols);
        for (std::size_t k = 0; k < values.size(); ++k) {
            const double s = f(values[k]);
            if (s == 0.0) continue;
            for (std::size_t i = 0; i < rows; ++i) {
                const double ui = s * left[k][i];
                if (ui == 0.0) continue;
                for (std::size_t j = 0; j < cols; ++j) out(i, j) += ui * right[k][j];
            }
        }
        return out;
    }

    DenseMatrix reconstruct() const {
        return reconstruct_with([](double s) { return s; });
    }
};

/// Relative cutoff below which a singular value counts as zero.
inline constexpr double kRankCutoff = 1e-12;

/// One-sided (Hestenes) Jacobi SVD with cyclic sweeps. A zero matrix yields no triples.
SvdFactors svd(const DenseMatrix& a);

std::vector<double> singular_values(const DenseMatrix& a);
double nuclear_norm(const DenseMatrix& a);
/// Largest singular value (the operator norm); 0 for the zero matrix.
double spectral_norm(const DenseMatrix& a);

}  // namespace mclab
