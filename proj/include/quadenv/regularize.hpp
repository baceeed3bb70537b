#pragma once

#include <optional>
#include <utility>

#include "quadenv/analysis.hpp"
#include "quadenv/envelope.hpp"

namespace quadenv {

/// Result of the C^{1,1} sandwich construction.
struct PinchResult {
    GridFunction w;
    double t_used = 0.0;
    double k_upper = 0.0;          ///< semiconcavity constant of u
    double k_lower = 0.0;          ///< semiconcavity constant of -v
    double sandwich_defect = 0.0;  ///< max(max(w-u), max(v-w), 0)
    RegularityReport regularity;   ///< c11_report of w at t_used
};

/// Upper-lower smoothing sup_s(inf_t(u)): C^{1,1} regularization with
/// 0 < s < t. Output second differences lie in
/// [-2h^2/s - eps, 2h^2/(t-s) + discretization slack].
GridFunction lasry_lions(const GridFunction& u, double s, double t);

/// The symmetric regularizer R_t = sup_t . inf_2t . sup_t. Semiconvex side
/// exact (d2 >= -2h^2/t); semiconcave side within discretization slack of
/// 2h^2/t; pinches between a semiconcave upper and semiconvex lower bound.
GridFunction symmetric_r(const GridFunction& f, double t);

/// Extremes of T_t(T_s u) - T_{t+s} u over nodes: (min_signed, max).
/// min_signed >= -eps and max <= sum_axes (h_a^2/4)(1/s + 1/t) + eps.
std::pair<double, double> semigroup_defect(const GridFunction& u, double s, double t);

/// The bound the semigroup defect contract promises for a given grid.
double semigroup_defect_bound(const GridSpec& spec, double s, double t);

/// C^{1,1} sandwich: given u >= v with u semiconcave and -v semiconcave,
/// build w = symmetric_r(f or u, t) with t = min(k, auto-k); auto-k is
/// min(semiconcavity(u), semiconcavity(-v)) clamped to [1e-6, 1e6].
/// Throws DomainError when u < v beyond roundoff or the chain f between
/// u and v is violated.
PinchResult ilmanen_sandwich(const GridFunction& u, const GridFunction& v,
                             const std::optional<GridFunction>& f = std::nullopt,
                             std::optional<double> k = std::nullopt);

}  // namespace quadenv
