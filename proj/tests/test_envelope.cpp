#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "quadenv/envelope.hpp"

using namespace quadenv;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

GridFunction random_grid(std::uint64_t seed, std::int64_t n, double h, double lo = -1.0,
                         double hi = 1.0) {
    return generate(GeneratorKind::RandomBetween, std::vector<double>{lo, hi},
                    GridSpec::make_1d(-1.0, h, n), seed);
}

}  // namespace

TEST_CASE("lower_envelope_1d: single finite parabola") {
    std::vector<double> f{0.0, kInf, kInf};
    std::vector<double> g = lower_envelope_1d(f, 1.0, 1.0);
    CHECK(g == std::vector<double>{0.0, 1.0, 4.0});
}

TEST_CASE("lower_envelope_1d: constants are fixed points") {
    std::vector<double> f(17, 3.25);
    CHECK(lower_envelope_1d(f, 0.1, 0.7) == f);
}

TEST_CASE("lower_envelope_1d: x^2 becomes x^2/2 at t=1") {
    const double h = 0.01, t = 1.0;
    GridSpec s = GridSpec::make_1d(-2.0, h, 401);
    std::vector<double> f(401);
    for (std::int64_t i = 0; i < 401; ++i) f[i] = s.coordinate(0, i) * s.coordinate(0, i);
    std::vector<double> g = lower_envelope_1d(f, h, t);
    // the bound is attained exactly at odd nodes; allow roundoff on top
    const double tol = h * h / 4.0 * (1.0 + 1.0 / t) + 1e-12;
    for (std::int64_t i = 20; i < 381; ++i) {
        const double x = s.coordinate(0, i);
        CHECK(std::abs(g[i] - x * x / 2.0) <= tol);
    }
}

TEST_CASE("lower_envelope_1d: error cases") {
    CHECK_THROWS_AS(lower_envelope_1d(std::vector<double>{kInf, kInf}, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(lower_envelope_1d(std::vector<double>{0.0, -kInf}, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(lower_envelope_1d(std::vector<double>{0.0, std::nan("")}, 1.0, 1.0),
                    DomainError);
    CHECK_THROWS_AS(lower_envelope_1d(std::vector<double>{0.0, 1.0}, 1.0, 0.0), DomainError);
}

TEST_CASE("inf_convolve of |x|: Huber values") {
    GridSpec s = GridSpec::make_1d(-4.0, 0.01, 801);
    GridFunction u = generate(GeneratorKind::Abs, {}, s);
    GridFunction g = inf_convolve(u, 1.0);
    // node x = 0.25 sits in the quadratic region: x^2/t
    CHECK(std::abs(g[425] - 0.0625) <= 1e-6);
    // node x = 2.0 sits in the linear region: |x| - t/4
    CHECK(std::abs(g[600] - 1.75) <= 1e-6);
}

TEST_CASE("duality: inf_convolve(-u) = -sup_convolve(u) exactly") {
    GridFunction u = random_grid(11, 97, 0.02);
    GridFunction lhs = inf_convolve(negate(u), 0.3);
    GridFunction rhs = negate(sup_convolve(u, 0.3));
    CHECK(max_abs_diff(lhs.values(), rhs.values()) == 0.0);
}

TEST_CASE("sup_convolve examples") {
    GridSpec s = GridSpec::make_1d(-4.0, 0.01, 801);
    std::vector<double> q(801);
    for (std::int64_t i = 0; i < 801; ++i) q[i] = s.coordinate(0, i) * s.coordinate(0, i);
    GridFunction u(s, q);
    GridFunction g = sup_convolve(u, 0.5);
    CHECK(std::abs(g[500] - 2.0) <= 1e-5);  // x=1: x^2/(1-a t) with a=1

    GridFunction a = generate(GeneratorKind::Abs, {}, s);
    GridFunction ga = sup_convolve(a, 0.5);
    CHECK(std::abs(ga[400] - 0.125) <= 1e-9);  // t/4 at the kink

    GridFunction c = generate(GeneratorKind::Constant, std::vector<double>{2.5}, s);
    GridFunction gc = sup_convolve(c, 0.7);
    for (double v : gc.values()) CHECK(v == 2.5);
}

TEST_CASE("oracle equivalence on seeded 1D grids") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        SplitMix64 rng(seed * 7919 + 1);
        const std::int64_t n = 17 + rng.below(100);
        const double h = rng.uniform(0.005, 0.05);
        GridFunction u = random_grid(seed, n, h);
        if (seed % 3 == 0) {
            auto vals = u.values();
            for (std::int64_t i = 0; i < n / 8; ++i) vals[rng.below(n)] = kInf;
            u = GridFunction(u.spec(), vals, true);
        }
        for (double t : {0.01, 0.1, 1.0}) {
            GridFunction fast = inf_convolve(u, t);
            GridFunction brute = inf_convolve_bruteforce(u, t);
            CHECK(max_abs_diff(fast.values(), brute.values()) <= u.eps());
        }
    }
}

TEST_CASE("oracle equivalence on a 2D grid, and separability") {
    GridSpec s = GridSpec::make_2d({-1.0, -0.5}, {0.04, 0.03}, {23, 31});
    GridFunction u = generate(GeneratorKind::RandomBetween, std::vector<double>{-1.0, 1.0}, s, 5);
    for (double t : {0.05, 0.5}) {
        GridFunction fast = inf_convolve(u, t);
        GridFunction brute = inf_convolve_bruteforce(u, t);
        CHECK(max_abs_diff(fast.values(), brute.values()) <= u.eps());
    }
}

TEST_CASE("brute force guard") {
    GridSpec s = GridSpec::make_1d(0.0, 0.001, 200001);
    GridFunction u = generate(GeneratorKind::Constant, std::vector<double>{0.0}, s);
    CHECK_THROWS_AS(inf_convolve_bruteforce(u, 1.0), DomainError);
}

TEST_CASE("ordering chain is exact") {
    GridFunction u = random_grid(3, 151, 0.013);
    const double eps = u.eps();
    auto [umin, umax] = std::minmax_element(u.values().begin(), u.values().end());
    for (double t : {0.01, 0.5}) {
        GridFunction lo = inf_convolve(u, t);
        GridFunction hi = sup_convolve(u, t);
        for (std::int64_t i = 0; i < u.size(); ++i) {
            CHECK(lo[i] >= *umin - eps);
            CHECK(lo[i] <= u[i] + eps);
            CHECK(hi[i] >= u[i] - eps);
            CHECK(hi[i] <= *umax + eps);
        }
    }
}

TEST_CASE("monotonicity in t and order preservation") {
    GridFunction u = random_grid(17, 101, 0.02);
    GridFunction a = inf_convolve(u, 0.2);
    GridFunction b = inf_convolve(u, 0.6);
    for (std::int64_t i = 0; i < u.size(); ++i) CHECK(b[i] <= a[i]);

    GridFunction v = combine(PointwiseOp::Add, u, 0.3);  // u <= v pointwise
    GridFunction tu = inf_convolve(u, 0.4);
    GridFunction tv = inf_convolve(v, 0.4);
    for (std::int64_t i = 0; i < u.size(); ++i) CHECK(tu[i] <= tv[i]);
}

TEST_CASE("outputs are exactly t-semiconcave (axis and diagonal)") {
    GridSpec s = GridSpec::make_2d({-1.0, -1.0}, {0.05, 0.04}, {41, 51});
    GridFunction u = generate(GeneratorKind::RandomBetween, std::vector<double>{-1.0, 1.0}, s, 23);
    for (double t : {0.05, 0.7}) {
        GridFunction g = inf_convolve(u, t);
        SecondDifferenceField d = second_differences(g, true);
        for (const auto& dir : d.directions) {
            const double bound = 2.0 * dir.step_length * dir.step_length / t;
            CHECK(dir.max_positive() <= bound + 1e-12 * (1.0 + u.max_abs()));
        }
    }
}

TEST_CASE("legendre_conjugate examples") {
    GridSpec s = GridSpec::make_1d(-2.0, 0.01, 401);
    std::vector<double> half_sq(401);
    for (std::int64_t i = 0; i < 401; ++i) {
        const double x = s.coordinate(0, i);
        half_sq[i] = 0.5 * x * x;
    }
    ConjugateTable t1 = legendre_conjugate(GridFunction(s, half_sq), std::vector<double>{1.0});
    CHECK(std::abs(t1.values[0] - 0.5) <= 5e-5);

    GridFunction a = generate(GeneratorKind::Abs, {}, s);
    ConjugateTable t2 = legendre_conjugate(a, std::vector<double>{0.5});
    CHECK(std::abs(t2.values[0]) <= 1e-12);

    GridFunction c = generate(GeneratorKind::Constant, std::vector<double>{4.0}, s);
    ConjugateTable t3 = legendre_conjugate(c, std::vector<double>{0.0});
    CHECK(t3.values[0] == -4.0);

    CHECK_THROWS_AS(legendre_conjugate(a, std::vector<double>{}), DomainError);
    CHECK_THROWS_AS(legendre_conjugate(a, std::vector<double>{1.0, -1.0}), DomainError);
}

TEST_CASE("conjugate tables are convex in the slope") {
    GridFunction u = random_grid(29, 83, 0.025);
    std::vector<double> slopes;
    for (int i = 0; i <= 80; ++i) slopes.push_back(-2.0 + 0.05 * i);
    ConjugateTable table = legendre_conjugate(u, slopes);
    CHECK(table.convexity_defect() <= 1e-12);
}

TEST_CASE("quadratic_bidual drops the non-convex middle") {
    GridSpec s = GridSpec::make_1d(-1.0, 1.0, 3);
    GridFunction u(s, {0.0, 2.0, 0.0});
    GridFunction b = quadratic_bidual(u, 1.0);
    CHECK(b[0] == doctest::Approx(0.0));
    CHECK(b[1] == doctest::Approx(1.0));
    CHECK(b[2] == doctest::Approx(0.0));
}

TEST_CASE("quadratic_bidual recovers -x^2 at t=0.5 up to grid rounding") {
    // -x^2 is 0.5-semiconvex, so the bidual reproduces it; the inner
    // maximizer lands off-grid at odd nodes, leaving an O(h^2) dip
    const double h = 0.01;
    GridSpec s = GridSpec::make_1d(-1.0, h, 201);
    std::vector<double> v(201);
    for (std::int64_t i = 0; i < 201; ++i) {
        const double x = s.coordinate(0, i);
        v[i] = -x * x;
    }
    GridFunction u(s, v);
    GridFunction b = quadratic_bidual(u, 0.5);
    for (std::int64_t i = 0; i < 201; ++i) {
        CHECK(b[i] <= u[i] + 1e-12);
        CHECK(std::abs(b[i] - u[i]) <= 1.5 * h * h);
    }
}

TEST_CASE("quadratic_bidual agrees with the envelope route") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        GridFunction u = random_grid(seed, 121, 0.017);
        for (double t : {0.1, 0.5, 1.0}) {
            GridFunction via_env = sup_convolve(inf_convolve(u, t), t);
            GridFunction via_dual = quadratic_bidual(u, t);
            CHECK(max_abs_diff(via_env.values(), via_dual.values()) <= 1e-9);
        }
    }
}

TEST_CASE("opening never exceeds the input; equality on sup-convolve images") {
    GridFunction g = random_grid(31, 141, 0.014);
    for (double t : {0.1, 0.5}) {
        GridFunction u = sup_convolve(g, t);  // image function: exact fixed point
        GridFunction w = sup_convolve(inf_convolve(u, t), t);
        CHECK(max_abs_diff(w.values(), u.values()) <= 1e-12 * (1.0 + u.max_abs()));

        GridFunction w2 = sup_convolve(inf_convolve(g, t), t);
        for (std::int64_t i = 0; i < g.size(); ++i) CHECK(w2[i] <= g[i] + g.eps());
    }
}

TEST_CASE("convex u on a coarse grid is recovered by the opening") {
    // three nodes, h = 1, t = 1: the grid-induced slopes are rich enough
    GridSpec s = GridSpec::make_1d(-1.0, 1.0, 3);
    GridFunction u(s, {1.0, 0.0, 1.0});
    GridFunction w = sup_convolve(inf_convolve(u, 1.0), 1.0);
    CHECK(w.values() == u.values());
}

TEST_CASE("discrete semigroup sandwich") {
    GridFunction u = random_grid(41, 201, 0.01);
    const double h = 0.01;
    for (auto [sp, tp] : {std::pair{0.5, 0.5}, std::pair{0.1, 0.3}}) {
        GridFunction two = inf_convolve(inf_convolve(u, sp), tp);
        GridFunction one = inf_convolve(u, sp + tp);
        const double bound = h * h / 4.0 * (1.0 / sp + 1.0 / tp);
        for (std::int64_t i = 0; i < u.size(); ++i) {
            CHECK(two[i] >= one[i] - u.eps());
            CHECK(two[i] <= one[i] + bound + u.eps());
        }
    }
}
