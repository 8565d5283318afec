#include "mclab/matrix.hpp"

#include "mclab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mclab {

namespace {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        std::ostringstream msg;
        msg << op << ": dimension mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows()
            << "x" << b.cols();
        throw DimensionError(msg.str());
    }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
    if (data_.size() != rows * cols) throw DimensionError("entry count does not match dimensions");
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) throw DimensionError("matrix dimensions must be positive");
    DenseMatrix out(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != out.cols()) throw DimensionError("ragged row list");
        std::copy(rows[i].begin(), rows[i].end(), out.data_.begin() + i * out.cols_);
    }
    return out;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

void DenseMatrix::check_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) throw std::domain_error("matrix has a non-finite entry");
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "add");
    DenseMatrix out = a;
    auto o = out.data();
    auto bd = b.data();
    for (std::size_t k = 0; k < o.size(); ++k) o[k] += bd[k];
    return out;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "subtract");
    DenseMatrix out = a;
    auto o = out.data();
    auto bd = b.data();
    for (std::size_t k = 0; k < o.size(); ++k) o[k] -= bd[k];
    return out;
}

DenseMatrix operator-(const DenseMatrix& a) { return -1.0 * a; }

DenseMatrix operator*(double s, const DenseMatrix& a) {
    DenseMatrix out = a;
    for (double& v : out.data()) v *= s;
    return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimensions differ");
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

RevealMask::RevealMask(DenseMatrix m) : m_(std::move(m)) {
    for (double v : m_.data())
        if (v != 0.0 && v != 1.0) throw std::invalid_argument("reveal mask entries must be 0 or 1");
}

std::size_t RevealMask::count() const noexcept {
    return static_cast<std::size_t>(std::count(m_.data().begin(), m_.data().end(), 1.0));
}

bool is_permutation(std::span<const std::size_t> p) {
    std::vector<char> seen(p.size(), 0);
    for (std::size_t v : p) {
        if (v >= p.size() || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

PermPair::PermPair(std::vector<std::size_t> rowPerm, std::vector<std::size_t> colPerm)
    : rows(std::move(rowPerm)), cols(std::move(colPerm)) {
    if (!is_permutation(rows) || !is_permutation(cols))
        throw std::invalid_argument("PermPair: not a bijection");
}

PermPair PermPair::identity(std::size_t m, std::size_t n) {
    std::vector<std::size_t> r(m), c(n);
    for (std::size_t i = 0; i < m; ++i) r[i] = i;
    for (std::size_t j = 0; j < n; ++j) c[j] = j;
    return PermPair(std::move(r), std::move(c));
}

PermPair PermPair::inverse() const {
    std::vector<std::size_t> r(rows.size()), c(cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) r[rows[i]] = i;
    for (std::size_t j = 0; j < cols.size(); ++j) c[cols[j]] = j;
    return PermPair(std::move(r), std::move(c));
}

PermPair then(const PermPair& first, const PermPair& second) {
    if (first.rows.size() != second.rows.size() || first.cols.size() != second.cols.size())
        throw DimensionError("then: permutation sizes differ");
    std::vector<std::size_t> r(first.rows.size()), c(first.cols.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = first.rows[second.rows[i]];
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = first.cols[second.cols[j]];
    return PermPair(std::move(r), std::move(c));
}

double frobenius(const DenseMatrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

double avg_frobenius(const DenseMatrix& a) {
    return frobenius(a) / std::sqrt(static_cast<double>(a.rows()) * static_cast<double>(a.cols()));
}

double linf_norm(const DenseMatrix& a) {
    double m = 0.0;
    for (double v : a.data()) m = std::max(m, std::abs(v));
    return m;
}

double mean_abs(const DenseMatrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += std::abs(v);
    return s / static_cast<double>(a.size());
}

double mean(const DenseMatrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v;
    return s / static_cast<double>(a.size());
}

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "hadamard");
    DenseMatrix out = a;
    auto o = out.data();
    auto bd = b.data();
    for (std::size_t k = 0; k < o.size(); ++k) o[k] *= bd[k];
    return out;
}

DenseMatrix apply_perm(const DenseMatrix& a, const PermPair& p) {
    if (p.rows.size() != a.rows() || p.cols.size() != a.cols())
        throw DimensionError("apply_perm: permutation sizes do not match matrix");
    DenseMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto src = a.row(p.rows[i]);
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = src[p.cols[j]];
    }
    return out;
}

RevealMask apply_perm(const RevealMask& a, const PermPair& p) {
    return RevealMask(apply_perm(a.matrix(), p));
}

DenseMatrix read_matrix(std::istream& in) {
    std::string line;
    std::size_t lineNo = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineNo;
            if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    };
    if (!next_line()) throw ParseError(lineNo + 1, "missing header \"m n\"");
    std::istringstream header(line);
    long long m = 0, n = 0;
    std::string extra;
    if (!(header >> m >> n) || (header >> extra))
        throw ParseError(lineNo, "expected header \"m n\"");
    if (m <= 0 || n <= 0) throw ParseError(lineNo, "dimensions must be positive");

    DenseMatrix out(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < out.rows(); ++i) {
        if (!next_line())
            throw ParseError(lineNo + 1, "expected " + std::to_string(m) + " rows, got " +
                                             std::to_string(i));
        std::istringstream row(line);
        std::size_t j = 0;
        std::string tok;
        while (row >> tok) {
            if (j == out.cols()) throw ParseError(lineNo, "too many entries in row");
            char* end = nullptr;
            const double v = std::strtod(tok.c_str(), &end);
            if (end != tok.c_str() + tok.size()) throw ParseError(lineNo, "not a number: " + tok);
            if (!std::isfinite(v)) throw ParseError(lineNo, "non-finite entry: " + tok);
            out(i, j++) = v;
        }
        if (j != out.cols())
            throw ParseError(lineNo, "expected " + std::to_string(n) + " entries, got " +
                                         std::to_string(j));
    }
    if (next_line()) throw ParseError(lineNo, "trailing content after last row");
    return out;
}

DenseMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    try {
        return read_matrix(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path + ": " + e.detail());
    }
}

RevealMask read_mask_file(const std::string& path) {
    DenseMatrix m = read_matrix_file(path);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0.0 && m(i, j) != 1.0)
                throw ParseError(i + 2, path + ": mask entries must be 0 or 1");
    return RevealMask(std::move(m));
}

void write_matrix(std::ostream& out, const DenseMatrix& a) {
    out << a.rows() << ' ' << a.cols() << '\n';
    char buf[32];
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", a(i, j));
            if (j) out << ' ';
            out << buf;
        }
        out << '\n';
    }
}

void write_matrix_file(const std::string& path, const DenseMatrix& a) {
    std::ostringstream s;
    write_matrix(s, a);
    write_file_atomic(path, s.str());
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp);
        out << contents;
        if (!out.flush()) throw IoError("write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

}  // namespace mclab
