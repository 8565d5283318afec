#include "mclab/graphon.hpp"

#include "mclab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mclab {

namespace {

constexpr double kQuadratureTol = 1e-8;

void check_breaks(const std::vector<double>& b, const char* which) {
    if (b.size() < 2) throw std::invalid_argument(std::string(which) + " breakpoints: need at least two");
    if (b.front() != 0.0 || b.back() != 1.0)
        throw std::invalid_argument(std::string(which) + " breakpoints must span [0,1]");
    for (std::size_t i = 1; i < b.size(); ++i)
        if (!(b[i] > b[i - 1]))
            throw std::invalid_argument(std::string(which) + " breakpoints must be strictly increasing");
}

std::size_t locate(const std::vector<double>& breaks, double x) {
    const auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
    const auto idx = static_cast<std::size_t>(it - breaks.begin());
    if (idx == 0) return 0;
    return std::min(idx - 1, breaks.size() - 2);
}

// overlap[c][a] = length of [c/cells, (c+1)/cells] intersected with block a.
std::vector<std::vector<double>> overlaps(const std::vector<double>& breaks, std::size_t cells) {
    std::vector<std::vector<double>> out(cells, std::vector<double>(breaks.size() - 1, 0.0));
    for (std::size_t c = 0; c < cells; ++c) {
        const double lo = static_cast<double>(c) / static_cast<double>(cells);
        const double hi = static_cast<double>(c + 1) / static_cast<double>(cells);
        for (std::size_t a = 0; a + 1 < breaks.size(); ++a) {
            const double len = std::min(hi, breaks[a + 1]) - std::max(lo, breaks[a]);
            if (len > 0.0) out[c][a] = len;
        }
    }
    return out;
}

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Index of the only block a cell overlaps, or kNone.
std::size_t sole_block(const std::vector<double>& overlap) {
    std::size_t found = kNone;
    for (std::size_t a = 0; a < overlap.size(); ++a) {
        if (overlap[a] == 0.0) continue;
        if (found != kNone) return kNone;
        found = a;
    }
    return found;
}

DenseMatrix discretize_step(const StepGraphon& w, std::size_t m, std::size_t n) {
    const auto ro = overlaps(w.rowBreaks, m);
    const auto co = overlaps(w.colBreaks, n);
    const double scale = static_cast<double>(m) * static_cast<double>(n);
    DenseMatrix out(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            // A cell inside one block takes its value as is, without rounding.
            const std::size_t a0 = sole_block(ro[i]), b0 = sole_block(co[j]);
            if (a0 != kNone && b0 != kNone) {
                out(i, j) = w.values(a0, b0);
                continue;
            }
            double s = 0.0;
            for (std::size_t a = 0; a < ro[i].size(); ++a) {
                if (ro[i][a] == 0.0) continue;
                for (std::size_t b = 0; b < co[j].size(); ++b) s += ro[i][a] * co[j][b] * w.values(a, b);
            }
            out(i, j) = std::clamp(s * scale, 0.0, 1.0);
        }
    return out;
}

double midpoint_average(const AnalyticGraphon& w, double x0, double x1, double y0, double y1, int depth) {
    const std::size_t cells = std::size_t{1} << depth;
    const double hx = (x1 - x0) / static_cast<double>(cells);
    const double hy = (y1 - y0) / static_cast<double>(cells);
    double s = 0.0;
    for (std::size_t a = 0; a < cells; ++a) {
        const double x = x0 + (static_cast<double>(a) + 0.5) * hx;
        for (std::size_t b = 0; b < cells; ++b) s += w(x, y0 + (static_cast<double>(b) + 0.5) * hy);
    }
    return s / static_cast<double>(cells * cells);
}

bool close_enough(double prev, double cur) {
    const double diff = std::abs(cur - prev);
    return diff <= kQuadratureTol * std::abs(cur) || diff <= 1e-15;
}

// Successive midpoint levels; a Richardson-extrapolated sequence (error O(h^4)
// for smooth W) is checked alongside the raw one.
double cell_average(const AnalyticGraphon& w, double x0, double x1, double y0, double y1) {
    double prevRaw = midpoint_average(w, x0, x1, y0, y1, 0);
    double prevExtrap = prevRaw;
    double residual = 0.0;
    for (int d = 1; d <= w.quadratureDepth; ++d) {
        const double raw = midpoint_average(w, x0, x1, y0, y1, d);
        if (close_enough(prevRaw, raw)) return raw;
        const double extrap = (4.0 * raw - prevRaw) / 3.0;
        if (d >= 2 && close_enough(prevExtrap, extrap)) return std::clamp(extrap, 0.0, 1.0);
        residual = std::abs(raw - prevRaw);
        prevRaw = raw;
        prevExtrap = extrap;
    }
    std::ostringstream msg;
    msg << "discretize: quadrature did not converge on cell [" << x0 << "," << x1 << "]x[" << y0 << ","
        << y1 << "] at depth " << w.quadratureDepth << " (residual " << residual << ")";
    throw NumericalError(msg.str(), residual);
}

DenseMatrix discretize_analytic(const AnalyticGraphon& w, std::size_t m, std::size_t n) {
    DenseMatrix out(m, n);
    const double dm = static_cast<double>(m);
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out(i, j) = cell_average(w, static_cast<double>(i) / dm, static_cast<double>(i + 1) / dm,
                                     static_cast<double>(j) / dn, static_cast<double>(j + 1) / dn);
    return out;
}

bool is_prime(std::size_t q) {
    if (q < 2) return false;
    for (std::size_t d = 2; d * d <= q; ++d)
        if (q % d == 0) return false;
    return true;
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

StepGraphon::StepGraphon(std::vector<double> rb, std::vector<double> cb, DenseMatrix vals)
    : rowBreaks(std::move(rb)), colBreaks(std::move(cb)), values(std::move(vals)) {
    check_breaks(rowBreaks, "row");
    check_breaks(colBreaks, "column");
    if (values.rows() != rowBreaks.size() - 1 || values.cols() != colBreaks.size() - 1)
        throw DimensionError("step graphon: value matrix does not match breakpoints");
    for (double v : values.data())
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("step graphon values must lie in [0,1]");
}

StepGraphon StepGraphon::constant(double p) { return StepGraphon({0.0, 1.0}, {0.0, 1.0}, DenseMatrix(1, 1, p)); }

StepGraphon StepGraphon::uniform_grid(DenseMatrix vals) {
    std::vector<double> rb(vals.rows() + 1), cb(vals.cols() + 1);
    for (std::size_t a = 0; a <= vals.rows(); ++a) rb[a] = static_cast<double>(a) / static_cast<double>(vals.rows());
    for (std::size_t b = 0; b <= vals.cols(); ++b) cb[b] = static_cast<double>(b) / static_cast<double>(vals.cols());
    return StepGraphon(std::move(rb), std::move(cb), std::move(vals));
}

double StepGraphon::operator()(double x, double y) const {
    return values(locate(rowBreaks, x), locate(colBreaks, y));
}

double AnalyticGraphon::operator()(double x, double y) const {
    const double v = evaluator(x, y);
    if (!(v >= -1e-12 && v <= 1.0 + 1e-12))
        throw std::domain_error("graphon evaluator returned a value outside [0,1]");
    return std::clamp(v, 0.0, 1.0);
}

DenseMatrix discretize(const Graphon& w, std::size_t m, std::size_t n) {
    if (m == 0 || n == 0) throw DimensionError("discretize: dimensions must be positive");
    return std::visit(
        [&](const auto& g) -> DenseMatrix {
            if constexpr (std::is_same_v<std::decay_t<decltype(g)>, StepGraphon>)
                return discretize_step(g, m, n);
            else
                return discretize_analytic(g, m, n);
        },
        w);
}

double zero_measure(const Graphon& w, double eta) {
    if (const auto* s = std::get_if<StepGraphon>(&w)) {
        double area = 0.0;
        for (std::size_t a = 0; a < s->values.rows(); ++a)
            for (std::size_t b = 0; b < s->values.cols(); ++b)
                if (s->values(a, b) <= eta)
                    area += (s->rowBreaks[a + 1] - s->rowBreaks[a]) * (s->colBreaks[b + 1] - s->colBreaks[b]);
        return std::min(area, 1.0);
    }
    const auto& g = std::get<AnalyticGraphon>(w);
    const std::size_t cells = std::size_t{1} << g.quadratureDepth;
    const double h = 1.0 / static_cast<double>(cells);
    std::size_t hits = 0;
    for (std::size_t a = 0; a < cells; ++a) {
        const double x = (static_cast<double>(a) + 0.5) * h;
        for (std::size_t b = 0; b < cells; ++b)
            if (g(x, (static_cast<double>(b) + 0.5) * h) <= eta) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(cells * cells);
}

double zero_measure_resolution(const Graphon& w) {
    if (std::holds_alternative<StepGraphon>(w)) return 0.0;
    const double h = std::ldexp(1.0, -std::get<AnalyticGraphon>(w).quadratureDepth);
    return h * h;
}

std::vector<double> default_eta_grid() { return {0.0, 1e-4, 1e-3, 1e-2}; }

ZeroMeasureReport recovery_verdict(const Graphon& w, std::vector<double> etaGrid) {
    if (etaGrid.empty()) etaGrid = default_eta_grid();
    std::sort(etaGrid.begin(), etaGrid.end());
    if (etaGrid.front() != 0.0) etaGrid.insert(etaGrid.begin(), 0.0);

    ZeroMeasureReport rep;
    rep.etaGrid = etaGrid;
    for (double eta : etaGrid) rep.phiValues.push_back(zero_measure(w, eta));
    // Sublevel sets are nested; keep the reported curve monotone under sampling noise.
    for (std::size_t i = 1; i < rep.phiValues.size(); ++i)
        rep.phiValues[i] = std::max(rep.phiValues[i], rep.phiValues[i - 1]);

    const double resolution = zero_measure_resolution(w);
    rep.admitsRecovery = rep.phiValues.front() <= resolution * 0.5;
    if (resolution > 0.0) {
        std::ostringstream note;
        note << "phi estimated by centre sampling; sets of measure below " << resolution
             << " may be missed";
        rep.resolutionWarning = note.str();
    }
    if (rep.admitsRecovery && rep.phiValues.size() > 1 && rep.phiValues[1] > 0.0) {
        std::ostringstream note;
        if (rep.resolutionWarning) note << *rep.resolutionWarning << "; ";
        note << "marginal: phi(" << etaGrid[1] << ") = " << rep.phiValues[1] << " > 0";
        rep.resolutionWarning = note.str();
    }
    return rep;
}

RevealMask gen_half_rows(std::size_t k) {
    if (k < 2) throw std::invalid_argument("gen_half_rows: k must be at least 2");
    DenseMatrix m(k, k);
    for (std::size_t i = 0; i < k / 2; ++i)
        for (std::size_t j = 0; j < k; ++j) m(i, j) = 1.0;
    return RevealMask(std::move(m));
}

RevealMask gen_parity(std::size_t k) {
    if (k == 0 || k % 2 != 0) throw std::invalid_argument("gen_parity: k must be even and positive");
    DenseMatrix m(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) m(i, j) = (i % 2 == j % 2) ? 1.0 : 0.0;
    return RevealMask(std::move(m));
}

RevealMask gen_diagonal_blocks(std::size_t k) {
    if (k == 0 || k % 2 != 0) throw std::invalid_argument("gen_diagonal_blocks: k must be even and positive");
    DenseMatrix m(k, k);
    const std::size_t h = k / 2;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) m(i, j) = ((i < h) == (j < h)) ? 1.0 : 0.0;
    return RevealMask(std::move(m));
}

PermPair parity_block_perm(std::size_t k) {
    if (k == 0 || k % 2 != 0) throw std::invalid_argument("parity_block_perm: k must be even and positive");
    // Even 1-based indices (odd 0-based) come first, then odd 1-based ones.
    const std::size_t h = k / 2;
    std::vector<std::size_t> p(k);
    for (std::size_t i = 0; i < h; ++i) {
        p[i] = 2 * i + 1;
        p[h + i] = 2 * i;
    }
    return PermPair(p, p);
}

std::size_t paley_prime(std::size_t k) {
    std::size_t q = std::max<std::size_t>(k, 5);
    while (q % 4 != 1 || !is_prime(q)) ++q;
    return q;
}

RevealMask gen_quasirandom(std::size_t k, double densityTarget) {
    if (k < 2) throw std::invalid_argument("gen_quasirandom: k must be at least 2");
    if (!(densityTarget > 0.0 && densityTarget < 1.0))
        throw std::invalid_argument("gen_quasirandom: densityTarget must lie in (0,1)");
    const std::size_t q = paley_prime(k);
    DenseMatrix m(k, k);
    if (densityTarget == 0.5) {
        std::vector<char> residue(q, 0);
        for (std::size_t x = 1; x < q; ++x) residue[(x * x) % q] = 1;
        for (std::size_t i = 1; i <= k; ++i)
            for (std::size_t j = 1; j <= k; ++j) m(i - 1, j - 1) = residue[(i + j) % q] ? 1.0 : 0.0;
    } else {
        const double dq = static_cast<double>(q);
        for (std::size_t i = 1; i <= k; ++i)
            for (std::size_t j = 1; j <= k; ++j)
                m(i - 1, j - 1) = (static_cast<double>((i * j) % q) / dq < densityTarget) ? 1.0 : 0.0;
    }
    return RevealMask(std::move(m));
}

StepGraphon read_step_graphon(std::istream& in) {
    std::string line;
    std::size_t lineNo = 0;
    auto next_values = [&](std::size_t expected, const char* what) {
        while (std::getline(in, line)) {
            ++lineNo;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            std::istringstream s(line);
            std::vector<double> vals;
            std::string tok;
            while (s >> tok) {
                char* end = nullptr;
                const double v = std::strtod(tok.c_str(), &end);
                if (end != tok.c_str() + tok.size() || !std::isfinite(v))
                    throw ParseError(lineNo, "not a finite number: " + tok);
                vals.push_back(v);
            }
            if (vals.size() != expected)
                throw ParseError(lineNo, std::string(what) + ": expected " + std::to_string(expected) +
                                             " values, got " + std::to_string(vals.size()));
            return vals;
        }
        throw ParseError(lineNo + 1, std::string("unexpected end of input, missing ") + what);
    };

    const auto header = next_values(2, "header \"p q\"");
    const std::size_t headerLine = lineNo;
    if (header[0] < 1 || header[1] < 1 || header[0] != std::floor(header[0]) || header[1] != std::floor(header[1]))
        throw ParseError(headerLine, "p and q must be positive integers");
    const auto p = static_cast<std::size_t>(header[0]);
    const auto q = static_cast<std::size_t>(header[1]);
    auto rb = next_values(p + 1, "row breakpoints");
    const std::size_t rbLine = lineNo;
    auto cb = next_values(q + 1, "column breakpoints");
    const std::size_t cbLine = lineNo;
    try {
        check_breaks(rb, "row");
    } catch (const std::invalid_argument& e) {
        throw ParseError(rbLine, e.what());
    }
    try {
        check_breaks(cb, "column");
    } catch (const std::invalid_argument& e) {
        throw ParseError(cbLine, e.what());
    }
    DenseMatrix vals(p, q);
    for (std::size_t a = 0; a < p; ++a) {
        const auto row = next_values(q, "block values");
        for (std::size_t b = 0; b < q; ++b) {
            if (!(row[b] >= 0.0 && row[b] <= 1.0)) throw ParseError(lineNo, "block values must lie in [0,1]");
            vals(a, b) = row[b];
        }
    }
    return StepGraphon(std::move(rb), std::move(cb), std::move(vals));
}

StepGraphon read_step_graphon_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    try {
        return read_step_graphon(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path + ": " + e.detail());
    }
}

void write_step_graphon(std::ostream& out, const StepGraphon& w) {
    out << w.values.rows() << ' ' << w.values.cols() << '\n';
    auto line = [&](const std::vector<double>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << fmt_double(v[i]);
        out << '\n';
    };
    line(w.rowBreaks);
    line(w.colBreaks);
    for (std::size_t a = 0; a < w.values.rows(); ++a) {
        for (std::size_t b = 0; b < w.values.cols(); ++b) out << (b ? " " : "") << fmt_double(w.values(a, b));
        out << '\n';
    }
}

}  // namespace mclab
