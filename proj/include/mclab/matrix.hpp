#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mclab {

/// Dense real m x n matrix stored row-major. Indices are 0-based.
///
/// Matrices are plain values: every free function in this library returns a
/// fresh matrix and never modifies its arguments. Mutable element access is
/// provided for building matrices.
class DenseMatrix {
public:
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);
    static DenseMatrix identity(std::size_t n);
    static DenseMatrix constant(std::size_t rows, std::size_t cols, double value) {
        return DenseMatrix(rows, cols, value);
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }
    std::span<const double> row(std::size_t i) const noexcept {
        return std::span<const double>(data_).subspan(i * cols_, cols_);
    }

    DenseMatrix transpose() const;

    /// Throws std::domain_error when some entry is NaN or infinite.
    void check_finite() const;

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a);
DenseMatrix operator*(double s, const DenseMatrix& a);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

/// Binary matrix marking revealed entries: 1 = revealed, 0 = hidden.
class RevealMask {
public:
    /// Throws std::invalid_argument unless every entry is exactly 0 or 1.
    explicit RevealMask(DenseMatrix m);

    static RevealMask all(std::size_t rows, std::size_t cols) {
        return RevealMask(DenseMatrix(rows, cols, 1.0));
    }

    const DenseMatrix& matrix() const noexcept { return m_; }
    std::size_t rows() const noexcept { return m_.rows(); }
    std::size_t cols() const noexcept { return m_.cols(); }
    bool revealed(std::size_t i, std::size_t j) const noexcept { return m_(i, j) != 0.0; }
    std::size_t count() const noexcept;
    double density() const noexcept {
        return static_cast<double>(count()) / static_cast<double>(m_.size());
    }

    friend bool operator==(const RevealMask&, const RevealMask&) = default;

private:
    DenseMatrix m_;
};

/// Row permutation pi and column permutation tau. Acting on A they give the
/// matrix whose (i, j) entry is a(pi[i], tau[j]).
struct PermPair {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;

    PermPair() = default;
    PermPair(std::vector<std::size_t> rowPerm, std::vector<std::size_t> colPerm);
    static PermPair identity(std::size_t m, std::size_t n);

    PermPair inverse() const;

    friend bool operator==(const PermPair&, const PermPair&) = default;
};

/// The pair equivalent to applying `first`, then `second`:
/// apply_perm(apply_perm(A, first), second) == apply_perm(A, then(first, second)).
PermPair then(const PermPair& first, const PermPair& second);

bool is_permutation(std::span<const std::size_t> p);

double frobenius(const DenseMatrix& a);
/// sqrt(sum a_ij^2 / mn)
double avg_frobenius(const DenseMatrix& a);
double linf_norm(const DenseMatrix& a);
/// Mean absolute entry, the L1 norm of the step graphon defined by `a`.
double mean_abs(const DenseMatrix& a);
double mean(const DenseMatrix& a);

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b);
inline DenseMatrix hadamard(const DenseMatrix& a, const RevealMask& p) {
    return hadamard(a, p.matrix());
}

DenseMatrix apply_perm(const DenseMatrix& a, const PermPair& p);
RevealMask apply_perm(const RevealMask& a, const PermPair& p);

// Text format: first line "m n", then m lines of n whitespace-separated reals.
DenseMatrix read_matrix(std::istream& in);
DenseMatrix read_matrix_file(const std::string& path);
RevealMask read_mask_file(const std::string& path);
void write_matrix(std::ostream& out, const DenseMatrix& a);
void write_matrix_file(const std::string& path, const DenseMatrix& a);

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace mclab
