#include "mclab/block_approx.hpp"

#include "mclab/cut_norm.hpp"
#include "mclab/errors.hpp"
#include "mclab/svd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace mclab {

namespace {

using Key = std::vector<std::int64_t>;

// Values within 1e-9 grid units of a grid point are treated as lying on it, so
// that floating-point noise does not split classes of equal coordinates.
double snap(double r) {
    const double nr = std::round(r);
    return std::abs(r - nr) <= 1e-9 * std::max(1.0, std::abs(r)) ? nr : r;
}

// Classes of indices with equal keys, ordered by first appearance.
std::vector<std::vector<std::size_t>> classes_of(const std::vector<Key>& keys) {
    std::map<Key, std::size_t> id;
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        auto [it, inserted] = id.emplace(keys[i], out.size());
        if (inserted) out.emplace_back();
        out[it->second].push_back(i);
    }
    return out;
}

void check_partition(const std::vector<std::vector<std::size_t>>& parts, std::size_t n, const char* side) {
    std::vector<char> seen(n, 0);
    std::size_t total = 0;
    for (const auto& part : parts) {
        if (part.empty()) throw std::invalid_argument(std::string(side) + " partition has an empty part");
        for (std::size_t i : part) {
            if (i >= n) throw DimensionError(std::string(side) + " partition index out of range");
            if (seen[i]) throw std::invalid_argument(std::string(side) + " partition parts overlap");
            seen[i] = 1;
            ++total;
        }
    }
    if (total != n) throw DimensionError(std::string(side) + " partition does not cover all indices");
}

std::vector<std::size_t> labels_of(const std::vector<std::vector<std::size_t>>& parts, std::size_t n) {
    std::vector<std::size_t> lab(n, 0);
    for (std::size_t c = 0; c < parts.size(); ++c)
        for (std::size_t i : parts[c]) lab[i] = c;
    return lab;
}

std::vector<double> cumulative_breaks(const std::vector<std::size_t>& sizes) {
    std::vector<double> out{0.0};
    std::size_t acc = 0;
    const double total = static_cast<double>(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}));
    for (std::size_t s : sizes) {
        acc += s;
        out.push_back(static_cast<double>(acc) / total);
    }
    out.back() = 1.0;
    return out;
}

std::vector<double> merge_breaks(std::vector<double> all) {
    std::sort(all.begin(), all.end());
    std::vector<double> out;
    for (double v : all)
        if (out.empty() || v - out.back() > 1e-12) out.push_back(v);
    out.front() = 0.0;
    if (out.back() < 1.0 - 1e-12) out.push_back(1.0);
    out.back() = 1.0;
    return out;
}

// Canonical class order: larger classes first, then larger mean value, then
// smallest member.
void canonical_order(std::vector<std::vector<std::size_t>>& parts, const std::vector<double>& lineMeans) {
    auto avg = [&](const std::vector<std::size_t>& part) {
        double s = 0.0;
        for (std::size_t i : part) s += lineMeans[i];
        return s / static_cast<double>(part.size());
    };
    std::stable_sort(parts.begin(), parts.end(), [&](const auto& x, const auto& y) {
        if (x.size() != y.size()) return x.size() > y.size();
        const double ax = avg(x), ay = avg(y);
        if (ax != ay) return ax > ay;
        return x.front() < y.front();
    });
}

}  // namespace

void PartitionPair::validate(std::size_t m, std::size_t n) const {
    check_partition(rowPartition, m, "row");
    check_partition(colPartition, n, "column");
}

PartitionPair PartitionPair::singletons(std::size_t m, std::size_t n) {
    PartitionPair p;
    for (std::size_t i = 0; i < m; ++i) p.rowPartition.push_back({i});
    for (std::size_t j = 0; j < n; ++j) p.colPartition.push_back({j});
    return p;
}

PartitionPair PartitionPair::whole(std::size_t m, std::size_t n) {
    PartitionPair p;
    p.rowPartition.emplace_back(m);
    std::iota(p.rowPartition[0].begin(), p.rowPartition[0].end(), std::size_t{0});
    p.colPartition.emplace_back(n);
    std::iota(p.colPartition[0].begin(), p.colPartition[0].end(), std::size_t{0});
    return p;
}

PartitionPair PartitionPair::from_labels(const std::vector<std::size_t>& rowLabels,
                                         const std::vector<std::size_t>& colLabels) {
    auto build = [](const std::vector<std::size_t>& labels) {
        std::vector<Key> keys;
        for (std::size_t l : labels) keys.push_back({static_cast<std::int64_t>(l)});
        return classes_of(keys);
    };
    return PartitionPair{build(rowLabels), build(colLabels)};
}

bool refines(const std::vector<std::vector<std::size_t>>& fine, const std::vector<std::vector<std::size_t>>& coarse,
             std::size_t universe) {
    const auto lab = labels_of(coarse, universe);
    for (const auto& part : fine)
        for (std::size_t i : part)
            if (lab[i] != lab[part.front()]) return false;
    return true;
}

DenseMatrix block_average(const DenseMatrix& a, const PartitionPair& part) {
    part.validate(a.rows(), a.cols());
    DenseMatrix out(a.rows(), a.cols());
    for (const auto& rows : part.rowPartition)
        for (const auto& cols : part.colPartition) {
            double s = 0.0;
            for (std::size_t i : rows)
                for (std::size_t j : cols) s += a(i, j);
            const double avg = s / static_cast<double>(rows.size() * cols.size());
            for (std::size_t i : rows)
                for (std::size_t j : cols) out(i, j) = avg;
        }
    return out;
}

bool is_block_constant(const DenseMatrix& a, const PartitionPair& part, double tol) {
    part.validate(a.rows(), a.cols());
    for (const auto& rows : part.rowPartition)
        for (const auto& cols : part.colPartition) {
            const double ref = a(rows.front(), cols.front());
            for (std::size_t i : rows)
                for (std::size_t j : cols)
                    if (std::abs(a(i, j) - ref) > tol) return false;
        }
    return true;
}

BlockApproxParams block_approx_params(double q, double eps, std::size_t m, std::size_t n) {
    BlockApproxParams p;
    p.q = q;
    p.eps = eps;
    const double c = std::cbrt(4.0) + 1.0 / std::cbrt(2.0);
    p.beta = std::pow(eps / (c * std::pow(q, 2.0 / 3.0)), 3.0);
    p.alpha = std::cbrt(16.0) * std::cbrt(q) * std::pow(p.beta, 2.0 / 3.0);
    const double dm = static_cast<double>(m);
    const double dn = static_cast<double>(n);
    p.delta = p.alpha * std::sqrt(dm * dn);
    p.gamma = p.beta / std::sqrt(dm);
    p.eta = p.beta / std::sqrt(dn);
    return p;
}

double block_count_bound_log10(double q, double eps) {
    return 5.0 * q * q / (eps * eps) * std::log10(20000.0 * std::pow(q, 6.0) * std::pow(eps, -10.0));
}

BlockApproxResult block_approximate_pair(const DenseMatrix& x, const DenseMatrix& y, double q, double eps) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) throw DimensionError("block_approximate_pair: X and Y differ in shape");
    if (!(q >= 1.0)) throw std::invalid_argument("block_approximate_pair: q must be at least 1");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("block_approximate_pair: eps must lie in (0,1)");
    if (linf_norm(x) > 1.0 + 1e-12 || linf_norm(y) > 1.0 + 1e-12)
        throw std::invalid_argument("block_approximate_pair: entries must be bounded by 1");

    const std::size_t m = x.rows();
    const std::size_t n = x.cols();
    const double root = std::sqrt(static_cast<double>(m) * static_cast<double>(n));
    const SvdFactors sx = svd(x);
    const SvdFactors sy = svd(y);
    auto nuclear = [](const SvdFactors& f) { return std::accumulate(f.values.begin(), f.values.end(), 0.0); };
    if (nuclear(sx) > q * root * (1.0 + 1e-9) || nuclear(sy) > q * root * (1.0 + 1e-9))
        throw std::invalid_argument("block_approximate_pair: nuclear norm exceeds q sqrt(mn)");

    const BlockApproxParams prm = block_approx_params(q, eps, m, n);
    auto kept = [&](const SvdFactors& f) {
        std::size_t k = 0;
        while (k < f.values.size() && f.values[k] > prm.delta) ++k;
        return k;
    };
    const std::size_t k1 = kept(sx);
    const std::size_t l1 = kept(sy);

    // Closest grid multiple with magnitude not exceeding the original.
    auto quantise = [](double v, double grid) { return static_cast<std::int64_t>(std::trunc(snap(v / grid))); };

    std::vector<Key> rowKeys(m), colKeys(n);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t i = 0; i < k1; ++i) rowKeys[a].push_back(quantise(sx.left[i][a], prm.gamma));
        for (std::size_t i = 0; i < l1; ++i) rowKeys[a].push_back(quantise(sy.left[i][a], prm.gamma));
    }
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t i = 0; i < k1; ++i) colKeys[b].push_back(quantise(sx.right[i][b], prm.eta));
        for (std::size_t i = 0; i < l1; ++i) colKeys[b].push_back(quantise(sy.right[i][b], prm.eta));
    }

    auto order_classes = [](std::vector<std::vector<std::size_t>> parts) {
        std::stable_sort(parts.begin(), parts.end(), [](const auto& s, const auto& t) {
            if (s.size() != t.size()) return s.size() > t.size();
            return s.front() < t.front();
        });
        return parts;
    };
    const auto rowClasses = order_classes(classes_of(rowKeys));
    const auto colClasses = order_classes(classes_of(colKeys));

    std::vector<std::size_t> pi, tau;
    PartitionPair part;
    for (const auto& c : rowClasses) {
        part.rowPartition.emplace_back();
        for (std::size_t i : c) {
            part.rowPartition.back().push_back(pi.size());
            pi.push_back(i);
        }
    }
    for (const auto& c : colClasses) {
        part.colPartition.emplace_back();
        for (std::size_t j : c) {
            part.colPartition.back().push_back(tau.size());
            tau.push_back(j);
        }
    }

    // Quantised low-rank parts, evaluated directly in permuted coordinates and clipped to [-1, 1].
    auto build = [&](const SvdFactors& f, std::size_t count, std::size_t offset) {
        DenseMatrix out(m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (std::size_t t = 0; t < count; ++t)
                    s += f.values[t] * (static_cast<double>(rowKeys[pi[i]][offset + t]) * prm.gamma) *
                         (static_cast<double>(colKeys[tau[j]][offset + t]) * prm.eta);
                out(i, j) = std::clamp(s, -1.0, 1.0);
            }
        return out;
    };

    BlockApproxResult res{.a = build(sx, k1, 0),
                          .b = build(sy, l1, k1),
                          .perm = PermPair(pi, tau),
                          .partition = std::move(part)};
    res.blockCount = res.partition.block_count();
    res.rankX = k1;
    res.rankY = l1;
    res.errX = avg_frobenius(apply_perm(x, res.perm) - res.a);
    res.errY = avg_frobenius(apply_perm(y, res.perm) - res.b);
    res.params = prm;
    return res;
}

TransferBound block_transfer_bound(const DenseMatrix& a, const DenseMatrix& b, const PartitionPair& part,
                                   const RevealMask& p, const DenseMatrix& q) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != p.rows() || a.cols() != p.cols() ||
        a.rows() != q.rows() || a.cols() != q.cols())
        throw DimensionError("block_transfer_bound: dimension mismatch");
    part.validate(a.rows(), a.cols());
    const double tol = 1e-12 * (1.0 + std::max(linf_norm(a), linf_norm(b)));
    if (!is_block_constant(a, part, tol) || !is_block_constant(b, part, tol))
        throw std::invalid_argument("block_transfer_bound: A and B must be constant on every block");
    for (double v : q.data())
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("block_transfer_bound: Q entries must lie in [0,1]");

    const DenseMatrix diff = a - b;
    TransferBound out;
    out.blocks = part.block_count();
    out.cutNorm = cut_norm_certified(p.matrix() - q, &out.cutExact);
    out.lhs = avg_frobenius(hadamard(diff, q));
    out.rhs = avg_frobenius(hadamard(diff, p)) +
              std::sqrt(static_cast<double>(out.blocks) * out.cutNorm) * linf_norm(diff);
    return out;
}

std::string to_string(LevelStatus s) {
    switch (s) {
        case LevelStatus::Verified: return "verified";
        case LevelStatus::Inconclusive: return "inconclusive";
        case LevelStatus::Violated: return "violated";
    }
    return "unknown";
}

RefinementSequence refinement_sequence(const DenseMatrix& a, int jMax) {
    if (jMax < 1 || jMax > kMaxRefinementLevel)
        throw std::invalid_argument("refinement_sequence: jMax must lie in [1, " +
                                    std::to_string(kMaxRefinementLevel) + "]");
    if (linf_norm(a) > 1.0 + 1e-12) throw std::invalid_argument("refinement_sequence: entries must be bounded by 1");

    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    const double root = std::sqrt(static_cast<double>(m) * static_cast<double>(n));
    const SvdFactors f = svd(a);

    // Coordinates in units of m^{-1/2} (rows) and n^{-1/2} (columns), snapped on
    // the finest grid so every level floors the same value.
    auto scaled = [&](const std::vector<double>& v, std::size_t len) {
        std::vector<double> out(v.size());
        for (std::size_t k = 0; k < v.size(); ++k)
            out[k] = std::ldexp(snap(std::ldexp(v[k] * std::sqrt(static_cast<double>(len)), jMax)), -jMax);
        return out;
    };
    std::vector<std::vector<double>> us, vs;
    for (std::size_t i = 0; i < f.rank(); ++i) {
        us.push_back(scaled(f.left[i], m));
        vs.push_back(scaled(f.right[i], n));
    }

    RefinementSequence seq;
    for (int j = 1; j <= jMax; ++j) {
        const double dj = static_cast<double>(j);
        std::size_t l = 0;
        while (l < f.rank() && f.values[l] > root / dj) ++l;

        std::vector<Key> rowKeys(m), colKeys(n);
        for (std::size_t i = 0; i < l; ++i) {
            for (std::size_t r = 0; r < m; ++r)
                rowKeys[r].push_back(static_cast<std::int64_t>(std::floor(std::ldexp(us[i][r], j))));
            for (std::size_t c = 0; c < n; ++c)
                colKeys[c].push_back(static_cast<std::int64_t>(std::floor(std::ldexp(vs[i][c], j))));
        }
        PartitionPair part{classes_of(rowKeys), classes_of(colKeys)};
        DenseMatrix avg = block_average(a, part);

        RefinementLevel lvl{.j = j, .partition = std::move(part), .averaged = std::move(avg)};
        lvl.rank = l;
        lvl.residualCut = cut_norm_certified(a - lvl.averaged, &lvl.residualExact);
        lvl.residualLimit = 2.0 / dj + 6.0 * dj * dj * dj * std::ldexp(1.0, -j);
        lvl.partSizeLimit = std::pow(std::ldexp(dj, j + 2), dj * dj);

        const bool sizesOk = static_cast<double>(lvl.partition.rowPartition.size()) <= lvl.partSizeLimit &&
                             static_cast<double>(lvl.partition.colPartition.size()) <= lvl.partSizeLimit;
        bool refinesPrev = true;
        if (!seq.levels.empty()) {
            const auto& prev = seq.levels.back().partition;
            refinesPrev = refines(lvl.partition.rowPartition, prev.rowPartition, m) &&
                          refines(lvl.partition.colPartition, prev.colPartition, n);
        }
        if (!sizesOk || !refinesPrev)
            lvl.status = LevelStatus::Violated;
        else if (lvl.residualCut <= lvl.residualLimit)
            lvl.status = LevelStatus::Verified;
        else
            lvl.status = lvl.residualExact ? LevelStatus::Violated : LevelStatus::Inconclusive;
        seq.levels.push_back(std::move(lvl));
    }
    return seq;
}

std::string RefinementSequence::to_json() const {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& lvl : levels) {
        out.push_back({{"j", lvl.j},
                       {"rank", lvl.rank},
                       {"rowParts", lvl.partition.rowPartition.size()},
                       {"colParts", lvl.partition.colPartition.size()},
                       {"partSizeLimit", lvl.partSizeLimit},
                       {"residualCut", lvl.residualCut},
                       {"residualExact", lvl.residualExact},
                       {"residualLimit", lvl.residualLimit},
                       {"status", to_string(lvl.status)}});
    }
    return nlohmann::ordered_json{{"levels", out}}.dump(2);
}

StepGraphon limit_estimate(const std::vector<RevealMask>& masks, int j) {
    if (masks.empty()) throw std::invalid_argument("limit_estimate: no masks given");
    for (std::size_t k = 1; k < masks.size(); ++k)
        if (masks[k].rows() < masks[k - 1].rows() || masks[k].cols() < masks[k - 1].cols())
            throw std::invalid_argument("limit_estimate: mask dimensions must be non-decreasing");

    std::vector<StepGraphon> steps;
    for (const auto& mask : masks) {
        const DenseMatrix& a = mask.matrix();
        const auto seq = refinement_sequence(a, j);
        const auto& lvl = seq.levels.back();

        std::vector<double> rowMeans(a.rows(), 0.0), colMeans(a.cols(), 0.0);
        for (std::size_t r = 0; r < a.rows(); ++r)
            for (std::size_t c = 0; c < a.cols(); ++c) {
                rowMeans[r] += a(r, c) / static_cast<double>(a.cols());
                colMeans[c] += a(r, c) / static_cast<double>(a.rows());
            }
        auto rows = lvl.partition.rowPartition;
        auto cols = lvl.partition.colPartition;
        canonical_order(rows, rowMeans);
        canonical_order(cols, colMeans);

        std::vector<std::size_t> rs, cs;
        for (const auto& p : rows) rs.push_back(p.size());
        for (const auto& p : cols) cs.push_back(p.size());
        DenseMatrix vals(rows.size(), cols.size());
        for (std::size_t x = 0; x < rows.size(); ++x)
            for (std::size_t y = 0; y < cols.size(); ++y)
                vals(x, y) = std::clamp(lvl.averaged(rows[x].front(), cols[y].front()), 0.0, 1.0);
        steps.emplace_back(cumulative_breaks(rs), cumulative_breaks(cs), std::move(vals));
    }

    std::vector<double> rAll, cAll;
    for (const auto& s : steps) {
        rAll.insert(rAll.end(), s.rowBreaks.begin(), s.rowBreaks.end());
        cAll.insert(cAll.end(), s.colBreaks.begin(), s.colBreaks.end());
    }
    auto rb = merge_breaks(std::move(rAll));
    auto cb = merge_breaks(std::move(cAll));
    DenseMatrix vals(rb.size() - 1, cb.size() - 1);
    for (std::size_t x = 0; x + 1 < rb.size(); ++x)
        for (std::size_t y = 0; y + 1 < cb.size(); ++y) {
            const double cx = 0.5 * (rb[x] + rb[x + 1]);
            const double cy = 0.5 * (cb[y] + cb[y + 1]);
            double s = 0.0;
            for (const auto& g : steps) s += g(cx, cy);
            vals(x, y) = std::clamp(s / static_cast<double>(steps.size()), 0.0, 1.0);
        }
    return StepGraphon(std::move(rb), std::move(cb), std::move(vals));
}

double l1_distance(const StepGraphon& a, const StepGraphon& b) {
    std::vector<double> rAll = a.rowBreaks, cAll = a.colBreaks;
    rAll.insert(rAll.end(), b.rowBreaks.begin(), b.rowBreaks.end());
    cAll.insert(cAll.end(), b.colBreaks.begin(), b.colBreaks.end());
    const auto rb = merge_breaks(std::move(rAll));
    const auto cb = merge_breaks(std::move(cAll));
    double total = 0.0;
    for (std::size_t x = 0; x + 1 < rb.size(); ++x)
        for (std::size_t y = 0; y + 1 < cb.size(); ++y) {
            const double cx = 0.5 * (rb[x] + rb[x + 1]);
            const double cy = 0.5 * (cb[y] + cb[y + 1]);
            total += (rb[x + 1] - rb[x]) * (cb[y + 1] - cb[y]) * std::abs(a(cx, cy) - b(cx, cy));
        }
    return total;
}

}  // namespace mclab
