#pragma once

#include <span>
#include <vector>

#include "quadenv/grid.hpp"

namespace quadenv {

/// Discrete Legendre-Fenchel conjugate u*(p) = max_x (p x - u(x)) sampled at
/// a sorted slope list. Values are convex as a function of slope index.
struct ConjugateTable {
    std::vector<double> slopes;
    std::vector<double> values;

    /// Largest violation of discrete convexity in the slope variable
    /// (divided-difference test; 0 for exact tables up to roundoff).
    double convexity_defect() const;
};

/// g(i) = min_j f(j) + (i-j)^2 h^2 / t via the lower-envelope-of-parabolas
/// sweep, O(n). +inf entries are skipped as absent parabolas; -inf and NaN
/// are rejected, as is an all-infinite input.
std::vector<double> lower_envelope_1d(std::span<const double> f, double h, double t);

/// Quadratic inf-convolution T_t u(x) = min_y u(y) + |y-x|^2/t over grid
/// nodes, exact; separable axis passes in 2D. Input may carry +inf (skipped),
/// never -inf.
GridFunction inf_convolve(const GridFunction& u, double t);

/// Quadratic sup-convolution, the negation dual of inf_convolve. Input may
/// carry -inf, never +inf.
GridFunction sup_convolve(const GridFunction& u, double t);

/// Exhaustive O(n^2) scan over all node pairs; the oracle inf_convolve is
/// measured against. Guarded to <= 100000 nodes unless allow_large.
GridFunction inf_convolve_bruteforce(const GridFunction& u, double t, bool allow_large = false);

/// u*(p) = max over nodes x of (p x - u(x)); u must be 1D and finite,
/// slopes sorted ascending.
ConjugateTable legendre_conjugate(const GridFunction& u, std::span<const double> slopes);

/// Second route to sup_convolve(inf_convolve(u,t),t) on 1D grids: form
/// v = u + x^2/t, conjugate twice over the grid-induced slopes p = 2x/t,
/// subtract x^2/t. Independent of the envelope sweep.
GridFunction quadratic_bidual(const GridFunction& u, double t);

}  // namespace quadenv
