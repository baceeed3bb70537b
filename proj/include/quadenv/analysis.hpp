#pragma once

#include <optional>
#include <vector>

#include "quadenv/grid.hpp"

namespace quadenv {

/// Sampled modulus of continuity rho(r) at lattice radii r = m h.
struct ModulusTable {
    std::vector<double> radii;  ///< sorted, positive, multiples of h
    std::vector<double> rho;    ///< non-negative, non-decreasing

    /// Largest violation of monotonicity (0 when valid).
    double monotonicity_defect() const;
    /// Largest violation of rho(r+r') <= rho(r) + rho(r') over tabulated triples.
    double subadditivity_defect() const;
};

/// Semiconcavity/semiconvexity constants and the C^{1,1} verdict. Unbounded
/// constants are IEEE +inf, never a large finite surrogate.
struct RegularityReport {
    double k_semiconcave = 0.0;
    double k_semiconvex = 0.0;
    double grad_lipschitz = 0.0;
    /// Set to t when both |d2| bounds hold at level 2 h_e^2 / t.
    std::optional<double> c11_at_t;
    double slack_used = 0.0;
};

/// k* = sup{ k : every direction second difference <= 2 h_e^2 / k }, i.e.
/// min over directions of 2 h_e^2 / (max positive d2); +inf when u bends
/// down everywhere. Valid constants are (0, k*]: smaller k is weaker.
double semiconcavity_constant(const GridFunction& u);

/// Semiconvexity constant, = semiconcavity_constant(-u).
double semiconvexity_constant(const GridFunction& u);

/// rho(m h) = max over node pairs at lattice distance m of |u difference|,
/// m = 1 .. n-1. 1D only.
ModulusTable modulus_of_continuity(const GridFunction& u);

struct EpsilonBound {
    double exact = 0.0;        ///< max over tabulated r of (rho(r) - r^2/t), floored at 0
    double closed_form = 0.0;  ///< rho^(sqrt t) + rho^(sqrt t)^2 / 4, step extension
};

/// The uniform envelope approximation error implied by a modulus table;
/// exact <= closed_form always.
EpsilonBound epsilon_bound(const ModulusTable& rho, double t);

/// max over directions and interior nodes of |d2 u| / h_e^2 — the discrete
/// bound on the gradient's directional Lipschitz constant.
double gradient_lipschitz_estimate(const GridFunction& u);

/// Both constants, the gradient estimate, and the verdict at level t.
/// slack is the absolute tolerance added to the 2 h_e^2/t bounds; defaults
/// to 10 * fp_eps of u.
RegularityReport c11_report(const GridFunction& u, double t,
                            std::optional<double> slack = std::nullopt);

}  // namespace quadenv
