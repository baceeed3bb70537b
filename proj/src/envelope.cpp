#include "quadenv/envelope.hpp"

#include <algorithm>
#include <cmath>

namespace quadenv {

namespace {

void check_t(double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw DomainError("envelope parameter t must be positive and finite");
}

// Scratch buffers for the parabola sweep, reused across lines.
struct Sweep {
    std::vector<std::int64_t> root;  // parabola roots in the hull
    std::vector<double> bound;       // bound[k]..bound[k+1] is where root[k] wins
    std::vector<double> line_in;
    std::vector<double> line_out;

    void reserve(std::size_t n) {
        root.reserve(n);
        bound.reserve(n + 1);
        line_in.resize(n);
        line_out.resize(n);
    }
};

// out[i] = min over finite f[j] of f[j] + a (i - j)^2.  An all-infinite line
// yields an all +inf output (used by the separable 2D pass); -inf and NaN are
// rejected.  At an intersection falling exactly on a node the later parabola
// wins the right side.
void envelope_line(std::span<const double> f, double a, std::span<double> out, Sweep& ws) {
    const std::int64_t n = static_cast<std::int64_t>(f.size());
    ws.root.clear();
    ws.bound.clear();
    for (std::int64_t j = 0; j < n; ++j) {
        const double fj = f[j];
        if (fj == kInf) continue;
        if (std::isnan(fj) || fj == -kInf)
            throw DomainError("inf-type envelope input must not contain -inf or NaN");
        if (ws.root.empty()) {
            ws.root.push_back(j);
            ws.bound.push_back(-kInf);
            ws.bound.push_back(kInf);
            continue;
        }
        double s;
        for (;;) {
            const std::int64_t j1 = ws.root.back();
            // intersection abscissa of the parabolas rooted at j1 and j
            s = (fj - f[j1]) / (2.0 * a * double(j - j1)) + 0.5 * double(j + j1);
            if (ws.root.size() > 1 && s <= ws.bound[ws.root.size() - 1]) {
                ws.root.pop_back();
                ws.bound.pop_back();
            } else {
                break;
            }
        }
        ws.root.push_back(j);
        ws.bound.back() = s;
        ws.bound.push_back(kInf);
    }
    if (ws.root.empty()) {
        std::fill(out.begin(), out.end(), kInf);
        return;
    }
    std::size_t k = 0;
    for (std::int64_t q = 0; q < n; ++q) {
        while (ws.bound[k + 1] <= double(q)) ++k;
        const double d = double(q - ws.root[k]);
        out[q] = f[ws.root[k]] + a * d * d;
    }
}

}  // namespace

std::vector<double> lower_envelope_1d(std::span<const double> f, double h, double t) {
    check_t(t);
    if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("grid step h must be positive");
    if (f.empty()) throw DomainError("lower_envelope_1d: empty input");
    if (std::all_of(f.begin(), f.end(), [](double v) { return v == kInf; }))
        throw DomainError("lower_envelope_1d: all entries are +inf");
    Sweep ws;
    ws.reserve(f.size());
    std::vector<double> out(f.size());
    envelope_line(f, h * h / t, out, ws);
    return out;
}

GridFunction inf_convolve(const GridFunction& u, double t) {
    check_t(t);
    if (u.has_neg_inf()) throw DomainError("inf_convolve: input must not contain -inf");
    const GridSpec& spec = u.spec();
    bool any_finite = std::any_of(u.values().begin(), u.values().end(),
                                  [](double v) { return std::isfinite(v); });
    if (!any_finite) throw DomainError("inf_convolve: input has no finite entry");

    Sweep ws;
    std::vector<double> vals = u.values();
    if (spec.dim() == 1) {
        ws.reserve(vals.size());
        envelope_line(vals, spec.spacing(0) * spec.spacing(0) / t, ws.line_out, ws);
        vals = ws.line_out;
        return GridFunction(spec, std::move(vals), false);
    }

    const std::int64_t n0 = spec.extent(0), n1 = spec.extent(1);
    ws.reserve(static_cast<std::size_t>(std::max(n0, n1)));
    const double a1 = spec.spacing(1) * spec.spacing(1) / t;
    for (std::int64_t i = 0; i < n0; ++i) {
        std::span<double> row(vals.data() + i * n1, static_cast<std::size_t>(n1));
        std::copy(row.begin(), row.end(), ws.line_in.begin());
        envelope_line(std::span<const double>(ws.line_in.data(), row.size()), a1,
                      std::span<double>(ws.line_out.data(), row.size()), ws);
        std::copy_n(ws.line_out.begin(), row.size(), row.begin());
    }
    const double a0 = spec.spacing(0) * spec.spacing(0) / t;
    for (std::int64_t j = 0; j < n1; ++j) {
        for (std::int64_t i = 0; i < n0; ++i) ws.line_in[i] = vals[i * n1 + j];
        envelope_line(std::span<const double>(ws.line_in.data(), static_cast<std::size_t>(n0)), a0,
                      std::span<double>(ws.line_out.data(), static_cast<std::size_t>(n0)), ws);
        for (std::int64_t i = 0; i < n0; ++i) vals[i * n1 + j] = ws.line_out[i];
    }
    return GridFunction(spec, std::move(vals), false);
}

GridFunction sup_convolve(const GridFunction& u, double t) {
    check_t(t);
    if (u.has_pos_inf()) throw DomainError("sup_convolve: input must not contain +inf");
    return negate(inf_convolve(negate(u), t));
}

GridFunction inf_convolve_bruteforce(const GridFunction& u, double t, bool allow_large) {
    check_t(t);
    if (u.has_neg_inf()) throw DomainError("inf_convolve_bruteforce: input must not contain -inf");
    const GridSpec& spec = u.spec();
    const std::int64_t n = spec.node_count();
    if (n > 100000 && !allow_large)
        throw DomainError("inf_convolve_bruteforce: node count exceeds the quadratic-cost guard");

    const auto& vals = u.values();
    std::vector<double> out(vals.size(), kInf);
    if (spec.dim() == 1) {
        const double a = spec.spacing(0) * spec.spacing(0) / t;
        for (std::int64_t i = 0; i < n; ++i) {
            double best = kInf;
            for (std::int64_t j = 0; j < n; ++j) {
                if (vals[j] == kInf) continue;
                const double d = double(i - j);
                best = std::min(best, vals[j] + a * d * d);
            }
            out[i] = best;
        }
    } else {
        const std::int64_t n0 = spec.extent(0), n1 = spec.extent(1);
        const double a0 = spec.spacing(0) * spec.spacing(0) / t;
        const double a1 = spec.spacing(1) * spec.spacing(1) / t;
        for (std::int64_t i = 0; i < n0; ++i) {
            for (std::int64_t j = 0; j < n1; ++j) {
                double best = kInf;
                for (std::int64_t p = 0; p < n0; ++p) {
                    const double dp = double(i - p);
                    const double base = a0 * dp * dp;
                    const double* rowp = vals.data() + p * n1;
                    for (std::int64_t q = 0; q < n1; ++q) {
                        if (rowp[q] == kInf) continue;
                        const double dq = double(j - q);
                        best = std::min(best, rowp[q] + base + a1 * dq * dq);
                    }
                }
                out[spec.index(i, j)] = best;
            }
        }
    }
    if (std::any_of(out.begin(), out.end(), [](double v) { return v == kInf; }))
        throw DomainError("inf_convolve_bruteforce: input has no finite entry");
    return GridFunction(spec, std::move(out), false);
}

double ConjugateTable::convexity_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i + 2 < slopes.size(); ++i) {
        const double dl = (values[i + 1] - values[i]) / (slopes[i + 1] - slopes[i]);
        const double dr = (values[i + 2] - values[i + 1]) / (slopes[i + 2] - slopes[i + 1]);
        worst = std::max(worst, dl - dr);
    }
    return worst;
}

ConjugateTable legendre_conjugate(const GridFunction& u, std::span<const double> slopes) {
    if (u.spec().dim() != 1) throw DomainError("legendre_conjugate: 1D grids only");
    if (!u.all_finite()) throw DomainError("legendre_conjugate: input must be finite");
    if (slopes.empty()) throw DomainError("legendre_conjugate: empty slope list");
    if (!std::is_sorted(slopes.begin(), slopes.end()))
        throw DomainError("legendre_conjugate: slopes must be sorted ascending");

    const GridSpec& spec = u.spec();
    const std::int64_t n = spec.extent(0);
    ConjugateTable table;
    table.slopes.assign(slopes.begin(), slopes.end());
    table.values.resize(slopes.size());
    for (std::size_t pi = 0; pi < slopes.size(); ++pi) {
        const double p = slopes[pi];
        double best = -kInf;
        for (std::int64_t i = 0; i < n; ++i)
            best = std::max(best, p * spec.coordinate(0, i) - u[i]);
        table.values[pi] = best;
    }
    return table;
}

GridFunction quadratic_bidual(const GridFunction& u, double t) {
    check_t(t);
    if (u.spec().dim() != 1) throw DomainError("quadratic_bidual: 1D grids only");
    if (!u.all_finite()) throw DomainError("quadratic_bidual: input must be finite");
    const GridSpec& spec = u.spec();
    const std::int64_t n = spec.extent(0);

    std::vector<double> v(static_cast<std::size_t>(n));
    std::vector<double> slopes(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        const double x = spec.coordinate(0, i);
        v[i] = u[i] + x * x / t;
        slopes[i] = 2.0 * x / t;
    }
    ConjugateTable star = legendre_conjugate(GridFunction(spec, std::move(v)), slopes);

    std::vector<double> out(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        const double x = spec.coordinate(0, i);
        double best = -kInf;
        for (std::int64_t k = 0; k < n; ++k)
            best = std::max(best, slopes[k] * x - star.values[k]);
        out[i] = best - x * x / t;
    }
    return GridFunction(spec, std::move(out));
}

}  // namespace quadenv
