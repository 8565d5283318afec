#include "mclab/cut_norm.hpp"

#include "mclab/errors.hpp"
#include "mclab/svd.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace mclab {

namespace {

constexpr std::size_t kRecomputeEvery = 4096;
constexpr std::size_t kExactRescoreLimit = 16;

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

double bilinear(const DenseMatrix& a, const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        if (x[i] == 0.0) continue;
        double r = 0.0;
        const auto row = a.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) r += row[j] * y[j];
        s += x[i] * r;
    }
    return s;
}

std::vector<double> times(const DenseMatrix& a, const std::vector<double>& y) {
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto row = a.row(i);
        double r = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) r += row[j] * y[j];
        out[i] = r;
    }
    return out;
}

std::vector<double> times_transposed(const DenseMatrix& a, const std::vector<double>& x) {
    std::vector<double> out(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        const auto row = a.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) out[j] += xi * row[j];
    }
    return out;
}

std::vector<double> signs(const std::vector<double>& v) {
    std::vector<double> s(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) s[i] = sign_of(v[i]);
    return s;
}

struct RowEnumeration {
    double best = 0.0;  // max of sum_j |(A^T x)_j| over enumerated x
    std::vector<double> x;
};

// Gray-code enumeration of x in {-1,1}^m with x_0 = +1 (x and -x give the same
// value). Requires a.rows() <= kExactCutNormLimit. Stops as soon as the running
// maximum exceeds `stopAbove`.
RowEnumeration enumerate_rows(const DenseMatrix& a, double stopAbove) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    std::vector<double> x(m, 1.0);
    std::vector<double> s = times_transposed(a, x);
    auto score = [&] {
        double v = 0.0;
        for (double sj : s) v += std::abs(sj);
        return v;
    };
    RowEnumeration out{score(), x};
    if (out.best > stopAbove) return out;

    const std::uint64_t total = std::uint64_t{1} << (m - 1);
    for (std::uint64_t g = 1; g < total; ++g) {
        const std::size_t i = 1 + static_cast<std::size_t>(std::countr_zero(g));
        const double f = -2.0 * x[i];
        const auto row = a.row(i);
        for (std::size_t j = 0; j < n; ++j) s[j] += f * row[j];
        x[i] = -x[i];
        if (g % kRecomputeEvery == 0) s = times_transposed(a, x);
        const double v = score();
        if (v > out.best) {
            out.best = v;
            out.x = x;
            if (v > stopAbove) return out;
        }
    }
    return out;
}

CutNormEstimate finish(const DenseMatrix& a, std::vector<double> x, std::vector<double> y, bool exact) {
    const double mn = static_cast<double>(a.rows()) * static_cast<double>(a.cols());
    CutNormEstimate est;
    // Summed in sorted order so relabeling A (and the witnesses) gives the same bits.
    std::vector<double> terms;
    terms.reserve(a.size());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) terms.push_back(x[i] * a(i, j) * y[j]);
    std::sort(terms.begin(), terms.end());
    double s = 0.0;
    for (double t : terms) s += t;
    est.lowerBound = std::abs(s) / mn;
    est.upperBound = est.lowerBound;
    est.witnessX = std::move(x);
    est.witnessY = std::move(y);
    est.exact = exact;
    return est;
}

// Exact unnormalised max |x^T A y|, abandoning once it exceeds stopAbove.
double exact_raw(const DenseMatrix& a, double stopAbove) {
    if (a.rows() <= a.cols()) return enumerate_rows(a, stopAbove).best;
    return enumerate_rows(a.transpose(), stopAbove).best;
}

std::vector<std::size_t> iota_vec(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
}

DenseMatrix permuted_difference(const DenseMatrix& a, const DenseMatrix& b, const std::vector<std::size_t>& rp,
                                const std::vector<std::size_t>& cp) {
    DenseMatrix d(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto src = a.row(rp[i]);
        const auto bi = b.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) d(i, j) = src[cp[j]] - bi[j];
    }
    return d;
}

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("cut distance: dimension mismatch");
}

// Ordering that matches A's row sums, ranked, to B's row sums, ranked.
std::vector<std::size_t> sum_matching(const std::vector<double>& sa, const std::vector<double>& sb) {
    const std::size_t n = sa.size();
    auto order = [n](const std::vector<double>& s) {
        auto idx = iota_vec(n);
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return s[x] < s[y]; });
        return idx;
    };
    const auto oa = order(sa);
    const auto ob = order(sb);
    std::vector<std::size_t> p(n);
    for (std::size_t r = 0; r < n; ++r) p[ob[r]] = oa[r];
    return p;
}

// Cheap annealing score: min(sigma_1 estimate / sqrt(mn), mean |d|). The power
// iteration is warm-started from `vec`, so it tracks sigma_1 across small moves.
class SwapScorer {
public:
    // The start vector is deliberately not constant: differences with zero
    // row sums are common (equal-density masks) and would annihilate it.
    SwapScorer(std::size_t m, std::size_t n) : vec_(n), tmp_(m) {
        double nrm = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            vec_[j] = 1.0 + std::fmod(0.6180339887498949 * static_cast<double>(j + 1), 1.0);
            nrm += vec_[j] * vec_[j];
        }
        for (double& v : vec_) v /= std::sqrt(nrm);
    }

    double operator()(const DenseMatrix& d) {
        const double mn = static_cast<double>(d.rows()) * static_cast<double>(d.cols());
        const double l1 = mean_abs(d);
        double sigma = 0.0;
        for (int it = 0; it < kPowerIters; ++it) {
            tmp_ = times(d, vec_);
            auto next = times_transposed(d, tmp_);
            double nrm = 0.0;
            for (double v : next) nrm += v * v;
            nrm = std::sqrt(nrm);
            if (nrm == 0.0) {
                sigma = 0.0;
                break;
            }
            sigma = std::sqrt(nrm);
            for (std::size_t j = 0; j < next.size(); ++j) vec_[j] = next[j] / nrm;
        }
        return std::min(sigma / std::sqrt(mn), l1);
    }

private:
    static constexpr int kPowerIters = 6;
    std::vector<double> vec_;
    std::vector<double> tmp_;
};

}  // namespace

CutNormEstimate cut_norm_exact(const DenseMatrix& a) {
    if (std::min(a.rows(), a.cols()) > kExactCutNormLimit)
        throw DimensionError("cut_norm_exact: shorter dimension exceeds the enumeration limit of " +
                             std::to_string(kExactCutNormLimit));
    const double inf = std::numeric_limits<double>::infinity();
    if (a.rows() <= a.cols()) {
        auto e = enumerate_rows(a, inf);
        auto y = signs(times_transposed(a, e.x));
        return finish(a, std::move(e.x), std::move(y), true);
    }
    auto e = enumerate_rows(a.transpose(), inf);
    auto x = signs(times(a, e.x));
    return finish(a, std::move(x), std::move(e.x), true);
}

CutNormEstimate cut_norm_lower(const DenseMatrix& a, int restarts, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    std::vector<double> bestX(a.rows(), 1.0), bestY(a.cols(), 1.0);
    double best = std::abs(bilinear(a, bestX, bestY));
    for (int r = 0; r < std::max(restarts, 1); ++r) {
        std::vector<double> y(a.cols());
        for (double& v : y) v = coin(rng) ? 1.0 : -1.0;
        std::vector<double> x;
        double value = -1.0;
        for (int it = 0; it < 1000; ++it) {
            x = signs(times(a, y));
            auto yNext = signs(times_transposed(a, x));
            const double v = std::abs(bilinear(a, x, yNext));
            const bool fixed = (yNext == y);
            y = std::move(yNext);
            if (fixed || v <= value) {
                value = std::max(v, value);
                break;
            }
            value = v;
        }
        const double v = std::abs(bilinear(a, x, y));
        if (v > best) {
            best = v;
            bestX = x;
            bestY = y;
        }
    }
    auto est = finish(a, std::move(bestX), std::move(bestY), false);
    est.upperBound = std::max(cut_norm_upper(a), est.lowerBound);
    return est;
}

double cut_norm_upper(const DenseMatrix& a) {
    const double mn = static_cast<double>(a.rows()) * static_cast<double>(a.cols());
    return std::min(spectral_norm(a) / std::sqrt(mn), mean_abs(a));
}

double cut_norm_certified(const DenseMatrix& a, bool* exact) {
    const bool small = std::min(a.rows(), a.cols()) <= kExactRescoreLimit;
    if (exact) *exact = small;
    return small ? cut_norm_exact(a).value() : cut_norm_upper(a);
}

CutDistanceResult cut_distance_exact(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b);
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (m > kExactCutDistanceLimit || n > kExactCutDistanceLimit)
        throw DimensionError("cut_distance_exact: dimensions exceed the enumeration limit of " +
                             std::to_string(kExactCutDistanceLimit));
    const double mn = static_cast<double>(m) * static_cast<double>(n);
    // |sum of entries| is invariant under relabeling and bounds the cut norm from below.
    const double floorRaw = std::abs(mean(a) - mean(b)) * mn;

    auto rp = iota_vec(m);
    auto bestRows = rp;
    auto bestCols = iota_vec(n);
    double best = std::numeric_limits<double>::infinity();
    do {
        auto cp = iota_vec(n);
        do {
            const double v = exact_raw(permuted_difference(a, b, rp, cp), best);
            if (v < best) {
                best = v;
                bestRows = rp;
                bestCols = cp;
                if (best <= floorRaw * (1.0 + 1e-15)) goto done;
            }
        } while (std::next_permutation(cp.begin(), cp.end()));
    } while (std::next_permutation(rp.begin(), rp.end()));
done:
    CutDistanceResult out;
    out.perm = PermPair(bestRows, bestCols);
    out.value = cut_norm_exact(apply_perm(a, out.perm) - b).value();
    out.exact = true;
    return out;
}

CutDistanceResult cut_distance_heuristic(const DenseMatrix& a, const DenseMatrix& b, std::uint64_t seed,
                                         const AnnealOptions& opts) {
    require_same_shape(a, b);
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SwapScorer score(m, n);

    auto row_sums = [](const DenseMatrix& x) {
        std::vector<double> s(x.rows(), 0.0);
        for (std::size_t i = 0; i < x.rows(); ++i)
            for (double v : x.row(i)) s[i] += v;
        return s;
    };
    const auto start_rows = sum_matching(row_sums(a), row_sums(b));
    const auto start_cols = sum_matching(row_sums(a.transpose()), row_sums(b.transpose()));

    std::vector<std::size_t> bestRows = start_rows, bestCols = start_cols;
    double best = score(permuted_difference(a, b, bestRows, bestCols));
    const double t0 = best;
    const std::size_t budget = static_cast<std::size_t>(opts.maxWork / std::max(1.0, static_cast<double>(m * n)));
    std::size_t spent = 0;

    for (int r = 0; r < opts.restarts && best > 1e-12 && spent < budget; ++r) {
        std::vector<std::size_t> rp = start_rows, cp = start_cols;
        if (r > 0) {
            std::shuffle(rp.begin(), rp.end(), rng);
            std::shuffle(cp.begin(), cp.end(), rng);
        }
        double cur = score(permuted_difference(a, b, rp, cp));
        double temp = t0;
        const std::size_t perStage = static_cast<std::size_t>(opts.proposalsPerSize) * (m + n);
        for (; temp >= opts.coolTo * t0 && best > 1e-12 && spent < budget; temp *= opts.decay) {
            for (std::size_t k = 0; k < perStage && spent < budget; ++k, ++spent) {
                const bool rowMove = (m > 1) && (n < 2 || unit(rng) * static_cast<double>(m + n) < static_cast<double>(m));
                auto& p = rowMove ? rp : cp;
                if (p.size() < 2) continue;
                std::uniform_int_distribution<std::size_t> pick(0, p.size() - 1);
                const std::size_t i = pick(rng);
                std::size_t j = pick(rng);
                if (i == j) j = (j + 1) % p.size();
                std::swap(p[i], p[j]);
                const double cand = score(permuted_difference(a, b, rp, cp));
                const double delta = cand - cur;
                if (delta <= 0.0 || (temp > 0.0 && unit(rng) < std::exp(-delta / temp))) {
                    cur = cand;
                    if (cur < best) {
                        best = cur;
                        bestRows = rp;
                        bestCols = cp;
                        if (best <= 1e-12) break;
                    }
                } else {
                    std::swap(p[i], p[j]);
                }
            }
        }
    }

    CutDistanceResult out;
    out.perm = PermPair(bestRows, bestCols);
    bool exact = false;
    out.value = cut_norm_certified(apply_perm(a, out.perm) - b, &exact);
    out.exact = false;
    return out;
}

CutDistanceResult cut_distance_to_graphon(const DenseMatrix& a, const Graphon& w, std::uint64_t seed) {
    const DenseMatrix wd = discretize(w, a.rows(), a.cols());
    if (a.rows() <= kExactCutDistanceLimit && a.cols() <= kExactCutDistanceLimit) return cut_distance_exact(a, wd);
    return cut_distance_heuristic(a, wd, seed);
}

}  // namespace mclab
