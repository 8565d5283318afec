#include "mclab/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mclab {

namespace {

constexpr double kRotationTol = 1e-14;
constexpr int kMaxSweeps = 80;

double dot(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void rotate(double* x, double* y, std::size_t n, double c, double s) {
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

// Requires a.rows() >= a.cols(). Columns of the working copy are made mutually
// orthogonal by plane rotations; the accumulated rotations give V.
SvdFactors jacobi_tall(const DenseMatrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();

    std::vector<double> w(m * n);  // column-major
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) w[j * m + i] = a(i, j);
    std::vector<double> v(n * n, 0.0);  // column-major
    for (std::size_t j = 0; j < n; ++j) v[j * n + j] = 1.0;

    std::vector<double> norm2(n);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        for (std::size_t j = 0; j < n; ++j) norm2[j] = dot(&w[j * m], &w[j * m], m);
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double alpha = norm2[p];
                const double beta = norm2[q];
                if (alpha == 0.0 || beta == 0.0) continue;
                const double gamma = dot(&w[p * m], &w[q * m], m);
                if (std::abs(gamma) <= kRotationTol * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                rotate(&w[p * m], &w[q * m], m, c, s);
                rotate(&v[p * n], &v[q * n], n, c, s);
                norm2[p] = alpha - t * gamma;
                norm2[q] = beta + t * gamma;
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(dot(&w[j * m], &w[j * m], m));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    SvdFactors out;
    out.rows = m;
    out.cols = n;
    const double top = sigma[order[0]];
    if (!(top > 0.0)) return out;
    for (std::size_t idx : order) {
        const double s = sigma[idx];
        if (!(s > kRankCutoff * top)) break;
        std::vector<double> u(&w[idx * m], &w[idx * m] + m);
        for (double& x : u) x /= s;
        out.values.push_back(s);
        out.left.push_back(std::move(u));
        out.right.emplace_back(&v[idx * n], &v[idx * n] + n);
    }
    return out;
}

}  // namespace

SvdFactors svd(const DenseMatrix& a) {
    if (a.rows() >= a.cols()) return jacobi_tall(a);
    SvdFactors t = jacobi_tall(a.transpose());
    std::swap(t.rows, t.cols);
    std::swap(t.left, t.right);
    return t;
}

std::vector<double> singular_values(const DenseMatrix& a) { return svd(a).values; }

double nuclear_norm(const DenseMatrix& a) {
    const auto s = singular_values(a);
    return std::accumulate(s.begin(), s.end(), 0.0);
}

double spectral_norm(const DenseMatrix& a) {
    const auto s = singular_values(a);
    return s.empty() ? 0.0 : s.front();
}

}  // namespace mclab
