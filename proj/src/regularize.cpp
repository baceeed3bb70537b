#include "quadenv/regularize.hpp"

#include <algorithm>
#include <cmath>

namespace quadenv {

GridFunction lasry_lions(const GridFunction& u, double s, double t) {
    if (!(s > 0.0) || !(s < t) || !std::isfinite(t))
        throw DomainError("lasry_lions requires 0 < s < t");
    if (!u.all_finite()) throw DomainError("lasry_lions: input must be finite");
    return sup_convolve(inf_convolve(u, t), s);
}

GridFunction symmetric_r(const GridFunction& f, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("symmetric_r requires t > 0");
    if (!f.all_finite()) throw DomainError("symmetric_r: input must be finite");
    return sup_convolve(inf_convolve(sup_convolve(f, t), 2.0 * t), t);
}

std::pair<double, double> semigroup_defect(const GridFunction& u, double s, double t) {
    if (!(s > 0.0) || !(t > 0.0)) throw DomainError("semigroup_defect requires s, t > 0");
    if (!u.all_finite()) throw DomainError("semigroup_defect: input must be finite");
    GridFunction two_step = inf_convolve(inf_convolve(u, s), t);
    GridFunction one_step = inf_convolve(u, s + t);
    double lo = kInf, hi = -kInf;
    for (std::size_t i = 0; i < two_step.values().size(); ++i) {
        const double d = two_step.values()[i] - one_step.values()[i];
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return {lo, hi};
}

double semigroup_defect_bound(const GridSpec& spec, double s, double t) {
    double b = 0.0;
    for (int a = 0; a < spec.dim(); ++a) {
        const double h = spec.spacing(a);
        b += h * h / 4.0 * (1.0 / s + 1.0 / t);
    }
    return b;
}

PinchResult ilmanen_sandwich(const GridFunction& u, const GridFunction& v,
                             const std::optional<GridFunction>& f, std::optional<double> k) {
    if (!(u.spec() == v.spec())) throw DomainError("ilmanen_sandwich: u and v grids must match");
    if (!u.all_finite() || !v.all_finite())
        throw DomainError("ilmanen_sandwich: sentinel-bearing inputs are not supported");
    const double eps = fp_eps(std::max(u.max_abs(), v.max_abs()));
    for (std::size_t i = 0; i < u.values().size(); ++i)
        if (u.values()[i] < v.values()[i] - eps)
            throw DomainError("ilmanen_sandwich: u < v somewhere (domain violation)");
    if (f) {
        if (!(f->spec() == u.spec())) throw DomainError("ilmanen_sandwich: f grid must match");
        if (!f->all_finite()) throw DomainError("ilmanen_sandwich: f must be finite");
        for (std::size_t i = 0; i < u.values().size(); ++i) {
            const double fi = f->values()[i];
            if (fi > u.values()[i] + eps || fi < v.values()[i] - eps)
                throw DomainError("ilmanen_sandwich: f must lie between v and u");
        }
    }

    PinchResult result;
    result.k_upper = semiconcavity_constant(u);
    result.k_lower = semiconcavity_constant(negate(v));
    double auto_k = std::min(result.k_upper, result.k_lower);
    auto_k = std::clamp(auto_k, 1e-6, 1e6);
    if (!(auto_k > 0.0))
        throw DomainError("ilmanen_sandwich: inputs are not semiconcave/semiconvex");
    if (k) {
        if (!(*k > 0.0) || !std::isfinite(*k)) throw DomainError("ilmanen_sandwich: k must be positive");
        result.t_used = std::min(*k, auto_k);
    } else {
        result.t_used = auto_k;
    }

    result.w = symmetric_r(f ? *f : u, result.t_used);
    double defect = 0.0;
    for (std::size_t i = 0; i < u.values().size(); ++i) {
        defect = std::max(defect, result.w.values()[i] - u.values()[i]);
        defect = std::max(defect, v.values()[i] - result.w.values()[i]);
    }
    result.sandwich_defect = std::max(defect, 0.0);
    result.regularity = c11_report(result.w, result.t_used);
    return result;
}

}  // namespace quadenv
