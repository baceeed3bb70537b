#include "quadenv/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace quadenv {

double ModulusTable::monotonicity_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < rho.size(); ++i) worst = std::max(worst, rho[i] - rho[i + 1]);
    return worst;
}

double ModulusTable::subadditivity_defect() const {
    // radii are m*h for m = 1..M, so index arithmetic stands in for radius sums
    double worst = 0.0;
    const std::size_t m = rho.size();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            const std::size_t s = i + j + 1;  // (i+1) + (j+1) - 1 as an index
            if (s >= m) break;
            worst = std::max(worst, rho[s] - rho[i] - rho[j]);
        }
    return worst;
}

double semiconcavity_constant(const GridFunction& u) {
    if (!u.all_finite()) throw DomainError("semiconcavity_constant: input must be finite");
    const double eps = u.eps();
    SecondDifferenceField field = second_differences(u, true);
    double k = kInf;
    for (const auto& dir : field.directions) {
        const double m = dir.max_positive();
        if (m <= eps) continue;
        k = std::min(k, 2.0 * dir.step_length * dir.step_length / m);
    }
    return k;
}

double semiconvexity_constant(const GridFunction& u) { return semiconcavity_constant(negate(u)); }

ModulusTable modulus_of_continuity(const GridFunction& u) {
    if (u.spec().dim() != 1) throw DomainError("modulus_of_continuity: 1D grids only");
    if (!u.all_finite()) throw DomainError("modulus_of_continuity: input must be finite");
    const auto& v = u.values();
    const std::int64_t n = static_cast<std::int64_t>(v.size());
    const double h = u.spec().spacing(0);
    ModulusTable table;
    table.radii.resize(static_cast<std::size_t>(n - 1));
    table.rho.resize(static_cast<std::size_t>(n - 1));
    // sup over displacements of length <= m h (unit-ball convention), i.e. a
    // running max over the exact-distance maxima; this is what keeps rho
    // non-decreasing and subadditive
    double running = 0.0;
    for (std::int64_t m = 1; m < n; ++m) {
        for (std::int64_t i = 0; i + m < n; ++i)
            running = std::max(running, std::abs(v[i + m] - v[i]));
        table.radii[m - 1] = double(m) * h;
        table.rho[m - 1] = running;
    }
    return table;
}

EpsilonBound epsilon_bound(const ModulusTable& rho, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("epsilon_bound: t must be positive");
    if (rho.radii.empty() || rho.radii.size() != rho.rho.size())
        throw DomainError("epsilon_bound: malformed modulus table");
    EpsilonBound out;
    for (std::size_t i = 0; i < rho.radii.size(); ++i)
        out.exact = std::max(out.exact, rho.rho[i] - rho.radii[i] * rho.radii[i] / t);

    // right-continuous step extension: round the radius up to the next
    // tabulated one, clamped at the last (the global oscillation)
    const double r = std::sqrt(t);
    std::size_t idx = rho.radii.size() - 1;
    for (std::size_t i = 0; i < rho.radii.size(); ++i) {
        if (rho.radii[i] >= r - 1e-12 * (1.0 + r)) {
            idx = i;
            break;
        }
    }
    const double rh = rho.rho[idx];
    out.closed_form = rh + rh * rh / 4.0;
    return out;
}

double gradient_lipschitz_estimate(const GridFunction& u) {
    if (!u.all_finite()) throw DomainError("gradient_lipschitz_estimate: input must be finite");
    SecondDifferenceField field = second_differences(u, true);
    double worst = 0.0;
    for (const auto& dir : field.directions)
        worst = std::max(worst, dir.max_abs() / (dir.step_length * dir.step_length));
    return worst;
}

RegularityReport c11_report(const GridFunction& u, double t, std::optional<double> slack) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("c11_report: t must be positive");
    if (!u.all_finite()) throw DomainError("c11_report: input must be finite");

    RegularityReport report;
    report.slack_used = slack.value_or(10.0 * u.eps());
    SecondDifferenceField field = second_differences(u, true);
    double k_cc = kInf, k_cv = kInf;
    bool holds = true;
    double grad = 0.0;
    const double eps = u.eps();
    for (const auto& dir : field.directions) {
        const double h2 = dir.step_length * dir.step_length;
        const double pos = dir.max_positive();
        const double neg = dir.max_negative();
        if (pos > eps) k_cc = std::min(k_cc, 2.0 * h2 / pos);
        if (neg > eps) k_cv = std::min(k_cv, 2.0 * h2 / neg);
        grad = std::max(grad, dir.max_abs() / h2);
        const double level = 2.0 * h2 / t + report.slack_used;
        holds = holds && pos <= level && neg <= level;
    }
    report.k_semiconcave = k_cc;
    report.k_semiconvex = k_cv;
    report.grad_lipschitz = grad;
    if (holds) report.c11_at_t = t;
    return report;
}

}  // namespace quadenv
