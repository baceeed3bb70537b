#include "quadenv/circle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "quadenv/analysis.hpp"
#include "quadenv/regularize.hpp"

namespace quadenv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_pm_pi(double d) {
    d = std::fmod(d + std::numbers::pi, kTwoPi);
    if (d < 0.0) d += kTwoPi;
    return d - std::numbers::pi;
}

double bump(double s) {
    const double r = s / 0.9;
    if (std::abs(r) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r * r));
}

}  // namespace

double CircleFunction::theta(std::int64_t j) const { return kTwoPi * double(j) / double(n); }

double CircleFunction::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

CircleFunction CircleAtlas::weight_on_circle(std::size_t i) const {
    const Chart& chart = charts[i];
    const GridSpec& gs = weights[i].spec();
    CircleFunction g{circle_nodes, std::vector<double>(static_cast<std::size_t>(circle_nodes), 0.0)};
    const double h_theta = kTwoPi / double(circle_nodes);
    for (std::int64_t m = 0; m < gs.extent(0); ++m) {
        const double angle = chart.to_angle(gs.coordinate(0, m));
        const auto j = static_cast<std::int64_t>(std::llround(angle / h_theta));
        g.values[((j % circle_nodes) + circle_nodes) % circle_nodes] = weights[i][m];
    }
    return g;
}

CircleAtlas build_atlas(int n_charts, std::int64_t nodes_per_chart) {
    if (n_charts < 3) throw DomainError("build_atlas: need at least 3 charts");
    if (nodes_per_chart < 64) throw DomainError("build_atlas: need at least 64 nodes per chart");

    CircleAtlas atlas;
    atlas.circle_nodes = std::int64_t(n_charts) * nodes_per_chart;
    const double h_theta = kTwoPi / double(atlas.circle_nodes);
    const double half_width =
        std::min(0.9 * std::numbers::pi * (2.0 / double(n_charts)) * 1.5,
                 std::numbers::pi * (1.0 - 1e-12));
    const double h_s = h_theta / half_width;
    const auto m_max = static_cast<std::int64_t>(std::floor((1.0 - 1e-12) / h_s));

    for (int i = 0; i < n_charts; ++i) {
        atlas.charts.push_back(Chart{kTwoPi * double(i) / double(n_charts), half_width});
        atlas.center_node.push_back(std::int64_t(i) * nodes_per_chart);
    }

    // raw bumps at every circle node, then normalize so the sum is exactly 1
    std::vector<std::vector<double>> raw(static_cast<std::size_t>(n_charts));
    std::vector<double> total(static_cast<std::size_t>(atlas.circle_nodes), 0.0);
    for (int i = 0; i < n_charts; ++i) {
        raw[i].assign(static_cast<std::size_t>(atlas.circle_nodes), 0.0);
        for (std::int64_t j = 0; j < atlas.circle_nodes; ++j) {
            const double d = wrap_pm_pi(double(j) * h_theta - atlas.charts[i].center);
            raw[i][j] = bump(d / half_width);
            total[j] += raw[i][j];
        }
    }
    for (std::int64_t j = 0; j < atlas.circle_nodes; ++j)
        if (!(total[j] > 0.0))
            throw DomainError("build_atlas: parameters too small to cover the circle");

    GridSpec chart_grid = GridSpec::make_1d(-double(m_max) * h_s, h_s, 2 * m_max + 1);
    for (int i = 0; i < n_charts; ++i) {
        std::vector<double> w(static_cast<std::size_t>(2 * m_max + 1));
        for (std::int64_t m = -m_max; m <= m_max; ++m) {
            const std::int64_t j =
                ((atlas.center_node[i] + m) % atlas.circle_nodes + atlas.circle_nodes) %
                atlas.circle_nodes;
            w[m + m_max] = raw[i][j] / total[j];
        }
        atlas.weights.emplace_back(chart_grid, std::move(w));
    }
    return atlas;
}

GridFunction pull_to_chart(const CircleFunction& f, const Chart& chart, const GridSpec& grid) {
    if (grid.dim() != 1) throw DomainError("pull_to_chart: chart grids are 1D");
    if (f.n < 3 || static_cast<std::int64_t>(f.values.size()) != f.n)
        throw DomainError("pull_to_chart: malformed circle function");
    const double h_theta = kTwoPi / double(f.n);
    std::vector<double> out(static_cast<std::size_t>(grid.extent(0)));
    for (std::int64_t m = 0; m < grid.extent(0); ++m) {
        const double angle = chart.to_angle(grid.coordinate(0, m));
        const double pos = angle / h_theta;
        const double rounded = std::round(pos);
        if (std::abs(pos - rounded) < 1e-9) {
            const auto j = static_cast<std::int64_t>(rounded);
            out[m] = f.values[((j % f.n) + f.n) % f.n];
        } else {
            const auto j0 = static_cast<std::int64_t>(std::floor(pos));
            const double frac = pos - double(j0);
            const double v0 = f.values[((j0 % f.n) + f.n) % f.n];
            const double v1 = f.values[(((j0 + 1) % f.n) + f.n) % f.n];
            out[m] = (1.0 - frac) * v0 + frac * v1;
        }
    }
    return GridFunction(grid, std::move(out));
}

CircleFunction push_to_circle(const GridFunction& g, const Chart& chart, std::int64_t n) {
    if (g.spec().dim() != 1) throw DomainError("push_to_circle: chart grids are 1D");
    if (n < 3) throw DomainError("push_to_circle: need n >= 3");
    CircleFunction out{n, std::vector<double>(static_cast<std::size_t>(n), 0.0)};
    const double h_theta = kTwoPi / double(n);
    const GridSpec& grid = g.spec();
    const double s_lo = grid.coordinate(0, 0);
    const double s_hi = grid.coordinate(0, grid.extent(0) - 1);
    for (std::int64_t j = 0; j < n; ++j) {
        const double s = wrap_pm_pi(double(j) * h_theta - chart.center) / chart.half_width;
        if (std::abs(s) >= 1.0 || s < s_lo || s > s_hi) continue;
        const double pos = (s - s_lo) / grid.spacing(0);
        const double rounded = std::round(pos);
        if (std::abs(pos - rounded) < 1e-9) {
            out.values[j] = g[static_cast<std::int64_t>(rounded)];
        } else {
            const auto m0 = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(pos)), 0,
                                                     grid.extent(0) - 2);
            const double frac = pos - double(m0);
            out.values[j] = (1.0 - frac) * g[m0] + frac * g[m0 + 1];
        }
    }
    return out;
}

namespace {

CircleFunction multiply_on_circle(const CircleFunction& a, const CircleFunction& b) {
    CircleFunction out{a.n, std::vector<double>(a.values.size())};
    for (std::size_t j = 0; j < a.values.size(); ++j) out.values[j] = a.values[j] * b.values[j];
    return out;
}

void check_atlas_matches(const CircleAtlas& atlas, const CircleFunction& f) {
    if (f.n != atlas.circle_nodes)
        throw DomainError("atlas was built for a different circle resolution");
    if (static_cast<std::int64_t>(f.values.size()) != f.n)
        throw DomainError("malformed circle function");
}

}  // namespace

CircleAtlas localization_constants(CircleAtlas atlas, const CircleFunction& u,
                                   const CircleFunction& v) {
    check_atlas_matches(atlas, u);
    check_atlas_matches(atlas, v);
    for (double x : u.values)
        if (!std::isfinite(x)) throw DomainError("localization_constants: u must be finite");
    for (double x : v.values)
        if (!std::isfinite(x)) throw DomainError("localization_constants: v must be finite");

    atlas.a.clear();
    for (std::size_t i = 0; i < atlas.charts.size(); ++i) {
        CircleFunction g = atlas.weight_on_circle(i);
        GridFunction wu = pull_to_chart(multiply_on_circle(g, u), atlas.charts[i],
                                        atlas.weights[i].spec());
        GridFunction wv = pull_to_chart(multiply_on_circle(g, v), atlas.charts[i],
                                        atlas.weights[i].spec());
        const double ku = semiconcavity_constant(pad(wu, 8, 0.0));
        const double kv = semiconcavity_constant(pad(negate(wv), 8, 0.0));
        atlas.a.push_back(std::clamp(std::min(ku, kv), 1e-6, 1e3));
    }
    return atlas;
}

namespace detail {

std::int64_t zero_extension_margin(double t_chart, double osc, double h_s) {
    // the inner minimizers move at most sqrt(t * osc); doubled for safety
    const double width = 2.0 * std::sqrt(t_chart * osc);
    return static_cast<std::int64_t>(std::ceil(width / h_s));
}

}  // namespace detail

CircleFunction g_t_apply(const CircleAtlas& atlas, const CircleFunction& f, double t) {
    check_atlas_matches(atlas, f);
    if (atlas.a.size() != atlas.charts.size())
        throw DomainError("g_t_apply: localization constants are unset");
    if (!(t > 0.0) || t > 1.0) throw DomainError("g_t_apply: t must lie in (0, 1]");

    double fmax = -kInf, fmin = kInf;
    for (double x : f.values) {
        if (!std::isfinite(x)) throw DomainError("g_t_apply: f must be finite");
        fmax = std::max(fmax, std::abs(x));
        fmin = std::min(fmin, x);
    }
    const double osc = 1.0 + fmax - std::min(0.0, fmin);

    CircleFunction total{f.n, std::vector<double>(f.values.size(), 0.0)};
    for (std::size_t i = 0; i < atlas.charts.size(); ++i) {
        CircleFunction g = atlas.weight_on_circle(i);
        GridFunction F =
            pull_to_chart(multiply_on_circle(g, f), atlas.charts[i], atlas.weights[i].spec());
        const double t_chart = t * atlas.a[i];
        const std::int64_t margin =
            detail::zero_extension_margin(t_chart, osc, F.spec().spacing(0));
        GridFunction w = symmetric_r(pad(F, margin, 0.0), t_chart);
        CircleFunction piece = push_to_circle(w, atlas.charts[i], f.n);
        for (std::size_t j = 0; j < total.values.size(); ++j) total.values[j] += piece.values[j];
    }
    return total;
}

}  // namespace quadenv
