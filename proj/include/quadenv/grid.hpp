#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "quadenv/common.hpp"

namespace quadenv {

/// Uniform axis-aligned grid geometry in one or two dimensions.
/// Node i on axis a sits at origin[a] + i * spacing[a].
class GridSpec {
public:
    GridSpec() = default;

    static GridSpec make_1d(double origin, double spacing, std::int64_t n);
    static GridSpec make_2d(std::array<double, 2> origin, std::array<double, 2> spacing,
                            std::array<std::int64_t, 2> shape);

    /// Parse the CLI shorthand "a:h:b": 1D nodes a, a+h, ..., up to b.
    static GridSpec from_range(const std::string& range);

    int dim() const { return dim_; }
    double origin(int axis) const { return origin_[axis]; }
    double spacing(int axis) const { return spacing_[axis]; }
    std::int64_t extent(int axis) const { return shape_[axis]; }

    std::int64_t node_count() const;
    double coordinate(int axis, std::int64_t i) const { return origin_[axis] + double(i) * spacing_[axis]; }

    /// Row-major flat index.
    std::int64_t index(std::int64_t i, std::int64_t j = 0) const {
        return dim_ == 1 ? i : i * shape_[1] + j;
    }

    bool operator==(const GridSpec& o) const;

private:
    GridSpec(int dim, std::array<double, 2> origin, std::array<double, 2> spacing,
             std::array<std::int64_t, 2> shape);

    int dim_ = 1;
    std::array<double, 2> origin_{0.0, 0.0};
    std::array<double, 2> spacing_{1.0, 1.0};
    std::array<std::int64_t, 2> shape_{3, 1};
};

/// Sampled real values on a GridSpec, row-major. With extended=true the
/// samples may contain +/-inf sentinels (never NaN); +inf entries are legal
/// only for inf-type operations, -inf only for sup-type ones.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(GridSpec spec, std::vector<double> values, bool extended = false);

    const GridSpec& spec() const { return spec_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    bool extended() const { return extended_; }

    std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
    double operator[](std::int64_t i) const { return values_[static_cast<std::size_t>(i)]; }

    bool has_pos_inf() const;
    bool has_neg_inf() const;
    bool all_finite() const;
    /// Largest |value| over finite entries (0 if none).
    double max_abs() const;
    /// 1e-12 * (1 + max|u|), the repository-wide comparison tolerance.
    double eps() const { return fp_eps(max_abs()); }

private:
    GridSpec spec_;
    std::vector<double> values_;
    bool extended_ = false;
};

enum class GeneratorKind {
    Constant,
    Quadratic,
    Abs,
    LipschitzTrig,
    MinOfParabolas,
    MaxOfParabolas,
    RandomBetween,
};

GeneratorKind generator_kind_from_name(const std::string& name);

/// Deterministic test-function generators.
///   constant         [c]
///   quadratic        [a]                  a * |x|^2
///   abs              []                   |x| (Euclidean norm in 2D)
///   lipschitz-trig   [L, omega]           Lipschitz constant L, frequency omega
///   min-of-parabolas [k, c..., v]         min_m v_m + |x - c_m|^2 / k, centers
///                                         snapped to grid nodes (dim coords each)
///   max-of-parabolas [k, c..., v]         max_m v_m - |x - c_m|^2 / k
///   random-between   [lo, hi]             iid uniform, seeded
GridFunction generate(GeneratorKind kind, std::span<const double> params, const GridSpec& spec,
                      std::uint64_t seed = 0);
GridFunction generate(const std::string& kind, std::span<const double> params, const GridSpec& spec,
                      std::uint64_t seed = 0);

enum class PointwiseOp { Add, Subtract, Scale, Negate, Min, Max, Multiply };

PointwiseOp pointwise_op_from_name(const std::string& name);

/// Pointwise algebra. Sentinels follow IEEE-754 extended arithmetic; any
/// combination that would produce NaN from non-NaN inputs (inf - inf,
/// 0 * inf) is rejected.
GridFunction combine(PointwiseOp op, const GridFunction& a, const GridFunction& b);
GridFunction combine(PointwiseOp op, const GridFunction& a, double scalar);
GridFunction negate(const GridFunction& a);

/// One stencil direction of a SecondDifferenceField.
struct SecondDifferenceDirection {
    std::array<int, 2> step;   ///< index offset per axis
    double step_length;        ///< grid step length along the direction
    /// Centered second difference u(x+e) - 2u(x) + u(x-e) at every node;
    /// NaN where a neighbor is missing.
    std::vector<double> values;

    double max_positive() const;
    double max_negative() const;  ///< max of -d2 (positive when u bends up)
    double max_abs() const;
};

struct SecondDifferenceField {
    GridSpec spec;
    std::vector<SecondDifferenceDirection> directions;
};

/// Axis-direction (and, in 2D, optionally diagonal) second differences.
/// Diagonal step length is sqrt(h0^2 + h1^2).
SecondDifferenceField second_differences(const GridFunction& u, bool include_diagonals = true);

/// Enlarge the grid by margin_nodes on every side of every axis; new nodes
/// hold fill (which may be +/-inf).
GridFunction pad(const GridFunction& u, std::int64_t margin_nodes, double fill);

}  // namespace quadenv
