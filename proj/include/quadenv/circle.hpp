#pragma once

#include <cstdint>
#include <vector>

#include "quadenv/grid.hpp"

namespace quadenv {

/// Chart of S^1: s in (-1,1) maps to angle center + half_width * s.
struct Chart {
    double center = 0.0;      ///< in [0, 2pi)
    double half_width = 1.0;  ///< in (0, pi): relatively compact image

    double to_angle(double s) const { return center + half_width * s; }
};

/// Samples at angles 2 pi j / n, periodic (node n == node 0).
struct CircleFunction {
    std::int64_t n = 0;
    std::vector<double> values;

    double theta(std::int64_t j) const;
    double max_abs() const;
};

/// Chart atlas on S^1 with a smooth partition of unity and per-chart
/// localization constants a_i. The chart parameter grids are the exact
/// preimages of the circle nodes, so transfers are interpolation-free.
struct CircleAtlas {
    std::vector<Chart> charts;
    std::vector<GridFunction> weights;  ///< g_i . phi_i on each chart grid
    std::vector<double> a;              ///< localization constants; empty until computed

    std::int64_t circle_nodes = 0;          ///< resolution the atlas is built for
    std::vector<std::int64_t> center_node;  ///< circle node index of each chart center

    /// g_i sampled at all circle nodes (zero outside the chart image).
    CircleFunction weight_on_circle(std::size_t i) const;
};

/// Charts at centers 2 pi i / n_charts with half width 0.9*pi*(2/n_charts)*1.5
/// (clamped below pi), weights from the bump exp(-1/(1-(s/0.9)^2)) normalized
/// so the pulled-back sum is exactly 1 at each of the n_charts*nodes_per_chart
/// circle nodes. Localization constants are left unset.
CircleAtlas build_atlas(int n_charts, std::int64_t nodes_per_chart);

/// f(phi(s)) sampled at the chart-grid nodes; exact index mapping where the
/// grid is commensurate with the circle, linear interpolation otherwise.
GridFunction pull_to_chart(const CircleFunction& f, const Chart& chart, const GridSpec& grid);

/// Write a chart-grid function back to the circle: values at circle nodes
/// inside the chart image, 0 elsewhere.
CircleFunction push_to_circle(const GridFunction& g, const Chart& chart, std::int64_t n);

/// Fill a_i = min over the pair of the semiconcavity constants of
/// (g_i u) . phi_i and -(g_i v) . phi_i, measured on the zero-padded chart
/// grid, clamped to [1e-6, 1e3].
CircleAtlas localization_constants(CircleAtlas atlas, const CircleFunction& u,
                                   const CircleFunction& v);

/// G_t f = sum_i push(R_{t a_i}(pull(g_i f) extended by zero)). Charts are
/// processed in fixed order; only charts whose image contains a node
/// contribute there. t must lie in (0, 1] and a must be filled.
CircleFunction g_t_apply(const CircleAtlas& atlas, const CircleFunction& f, double t);

namespace detail {
/// Padding margin (in chart-grid nodes) used by g_t_apply for one chart.
std::int64_t zero_extension_margin(double t_chart, double osc, double h_s);
}  // namespace detail

}  // namespace quadenv
