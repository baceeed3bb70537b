#include "quadenv/grid.hpp"

#include <algorithm>
#include <cmath>

namespace quadenv {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw DomainError(msg);
}

}  // namespace

GridSpec::GridSpec(int dim, std::array<double, 2> origin, std::array<double, 2> spacing,
                   std::array<std::int64_t, 2> shape)
    : dim_(dim), origin_(origin), spacing_(spacing), shape_(shape) {
    require(dim_ == 1 || dim_ == 2, "GridSpec: dim must be 1 or 2");
    for (int a = 0; a < dim_; ++a) {
        require(std::isfinite(origin_[a]), "GridSpec: origin must be finite");
        require(std::isfinite(spacing_[a]) && spacing_[a] > 0.0,
                "GridSpec: spacing must be positive");
        require(shape_[a] >= 3, "GridSpec: shape must be >= 3 per axis");
    }
}

GridSpec GridSpec::make_1d(double origin, double spacing, std::int64_t n) {
    return GridSpec(1, {origin, 0.0}, {spacing, 1.0}, {n, 1});
}

GridSpec GridSpec::make_2d(std::array<double, 2> origin, std::array<double, 2> spacing,
                           std::array<std::int64_t, 2> shape) {
    return GridSpec(2, origin, spacing, shape);
}

GridSpec GridSpec::from_range(const std::string& range) {
    double a = 0.0, h = 0.0, b = 0.0;
    std::size_t pos1 = range.find(':');
    std::size_t pos2 = (pos1 == std::string::npos) ? std::string::npos : range.find(':', pos1 + 1);
    if (pos1 == std::string::npos || pos2 == std::string::npos)
        throw DomainError("grid range must look like a:h:b, got '" + range + "'");
    try {
        a = std::stod(range.substr(0, pos1));
        h = std::stod(range.substr(pos1 + 1, pos2 - pos1 - 1));
        b = std::stod(range.substr(pos2 + 1));
    } catch (const std::exception&) {
        throw DomainError("grid range must look like a:h:b, got '" + range + "'");
    }
    require(h > 0.0 && b > a, "grid range needs h > 0 and b > a");
    auto n = static_cast<std::int64_t>(std::floor((b - a) / h + 1e-9)) + 1;
    return make_1d(a, h, n);
}

std::int64_t GridSpec::node_count() const {
    std::int64_t n = 1;
    for (int a = 0; a < dim_; ++a) n *= shape_[a];
    return n;
}

bool GridSpec::operator==(const GridSpec& o) const {
    if (dim_ != o.dim_) return false;
    for (int a = 0; a < dim_; ++a)
        if (origin_[a] != o.origin_[a] || spacing_[a] != o.spacing_[a] || shape_[a] != o.shape_[a])
            return false;
    return true;
}

GridFunction::GridFunction(GridSpec spec, std::vector<double> values, bool extended)
    : spec_(std::move(spec)), values_(std::move(values)), extended_(extended) {
    require(static_cast<std::int64_t>(values_.size()) == spec_.node_count(),
            "GridFunction: values length must equal the node count");
    for (double v : values_) {
        if (std::isnan(v)) throw DomainError("GridFunction: NaN entries are never allowed");
        if (!extended_ && !std::isfinite(v))
            throw DomainError("GridFunction: infinite entry in a non-extended function");
    }
}

bool GridFunction::has_pos_inf() const {
    return std::any_of(values_.begin(), values_.end(), [](double v) { return v == kInf; });
}

bool GridFunction::has_neg_inf() const {
    return std::any_of(values_.begin(), values_.end(), [](double v) { return v == -kInf; });
}

bool GridFunction::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double v : values_)
        if (std::isfinite(v)) m = std::max(m, std::abs(v));
    return m;
}

GeneratorKind generator_kind_from_name(const std::string& name) {
    if (name == "constant") return GeneratorKind::Constant;
    if (name == "quadratic") return GeneratorKind::Quadratic;
    if (name == "abs") return GeneratorKind::Abs;
    if (name == "lipschitz-trig") return GeneratorKind::LipschitzTrig;
    if (name == "min-of-parabolas") return GeneratorKind::MinOfParabolas;
    if (name == "max-of-parabolas") return GeneratorKind::MaxOfParabolas;
    if (name == "random-between") return GeneratorKind::RandomBetween;
    throw DomainError("unknown generator kind '" + name + "'");
}

namespace {

// Nearest grid node to a requested coordinate, clamped into the grid.
std::int64_t snap(const GridSpec& spec, int axis, double coord) {
    auto i = static_cast<std::int64_t>(std::llround((coord - spec.origin(axis)) / spec.spacing(axis)));
    return std::clamp<std::int64_t>(i, 0, spec.extent(axis) - 1);
}

template <typename F>
std::vector<double> sample(const GridSpec& spec, F&& f) {
    std::vector<double> out(static_cast<std::size_t>(spec.node_count()));
    if (spec.dim() == 1) {
        for (std::int64_t i = 0; i < spec.extent(0); ++i) out[i] = f(spec.coordinate(0, i), 0.0);
    } else {
        std::size_t k = 0;
        for (std::int64_t i = 0; i < spec.extent(0); ++i)
            for (std::int64_t j = 0; j < spec.extent(1); ++j)
                out[k++] = f(spec.coordinate(0, i), spec.coordinate(1, j));
    }
    return out;
}

}  // namespace

GridFunction generate(GeneratorKind kind, std::span<const double> params, const GridSpec& spec,
                      std::uint64_t seed) {
    const int d = spec.dim();
    switch (kind) {
        case GeneratorKind::Constant: {
            require(params.size() == 1, "constant expects 1 parameter");
            double c = params[0];
            return GridFunction(spec, sample(spec, [&](double, double) { return c; }));
        }
        case GeneratorKind::Quadratic: {
            require(params.size() == 1, "quadratic expects 1 parameter");
            double a = params[0];
            return GridFunction(
                spec, sample(spec, [&](double x, double y) { return a * (x * x + y * y); }));
        }
        case GeneratorKind::Abs: {
            require(params.empty(), "abs expects no parameters");
            return GridFunction(
                spec, sample(spec, [&](double x, double y) { return std::sqrt(x * x + y * y); }));
        }
        case GeneratorKind::LipschitzTrig: {
            require(params.size() == 2, "lipschitz-trig expects [L, omega]");
            double L = params[0], w = params[1];
            require(L >= 0.0 && w > 0.0, "lipschitz-trig needs L >= 0, omega > 0");
            double amp = L / (w * std::sqrt(double(d)));
            return GridFunction(spec, sample(spec, [&](double x, double y) {
                                    double s = std::sin(w * x);
                                    if (d == 2) s += std::sin(w * y);
                                    return amp * s;
                                }));
        }
        case GeneratorKind::MinOfParabolas:
        case GeneratorKind::MaxOfParabolas: {
            bool is_min = kind == GeneratorKind::MinOfParabolas;
            std::size_t stride = static_cast<std::size_t>(d) + 1;
            require(params.size() >= 1 + stride && (params.size() - 1) % stride == 0,
                    "min/max-of-parabolas expects [k, (center..., value) x m]");
            double k = params[0];
            require(k > 0.0 && std::isfinite(k), "parabola curvature parameter k must be positive");
            std::size_t m = (params.size() - 1) / stride;
            std::vector<std::array<double, 2>> centers(m);
            std::vector<double> offsets(m);
            for (std::size_t p = 0; p < m; ++p) {
                centers[p][0] = spec.coordinate(0, snap(spec, 0, params[1 + p * stride]));
                centers[p][1] =
                    d == 2 ? spec.coordinate(1, snap(spec, 1, params[2 + p * stride])) : 0.0;
                offsets[p] = params[1 + p * stride + static_cast<std::size_t>(d)];
            }
            return GridFunction(spec, sample(spec, [&](double x, double y) {
                                    double best = is_min ? kInf : -kInf;
                                    for (std::size_t p = 0; p < m; ++p) {
                                        double dx = x - centers[p][0];
                                        double dy = y - centers[p][1];
                                        double q = (dx * dx + dy * dy) / k;
                                        double val = is_min ? offsets[p] + q : offsets[p] - q;
                                        best = is_min ? std::min(best, val) : std::max(best, val);
                                    }
                                    return best;
                                }));
        }
        case GeneratorKind::RandomBetween: {
            require(params.size() == 2, "random-between expects [lo, hi]");
            double lo = params[0], hi = params[1];
            require(lo <= hi, "random-between needs lo <= hi");
            SplitMix64 rng(seed);
            std::vector<double> out(static_cast<std::size_t>(spec.node_count()));
            for (double& v : out) v = rng.uniform(lo, hi);
            return GridFunction(spec, std::move(out));
        }
    }
    throw DomainError("unknown generator kind");
}

GridFunction generate(const std::string& kind, std::span<const double> params, const GridSpec& spec,
                      std::uint64_t seed) {
    return generate(generator_kind_from_name(kind), params, spec, seed);
}

PointwiseOp pointwise_op_from_name(const std::string& name) {
    if (name == "add") return PointwiseOp::Add;
    if (name == "subtract") return PointwiseOp::Subtract;
    if (name == "scale") return PointwiseOp::Scale;
    if (name == "negate") return PointwiseOp::Negate;
    if (name == "min") return PointwiseOp::Min;
    if (name == "max") return PointwiseOp::Max;
    if (name == "multiply") return PointwiseOp::Multiply;
    throw DomainError("unknown pointwise op '" + name + "'");
}

namespace {

double apply_op(PointwiseOp op, double x, double y) {
    double r = 0.0;
    switch (op) {
        case PointwiseOp::Add: r = x + y; break;
        case PointwiseOp::Subtract: r = x - y; break;
        case PointwiseOp::Scale: r = x * y; break;
        case PointwiseOp::Multiply: r = x * y; break;
        case PointwiseOp::Min: r = std::min(x, y); break;
        case PointwiseOp::Max: r = std::max(x, y); break;
        case PointwiseOp::Negate: r = -x; break;
    }
    if (std::isnan(r))
        throw DomainError("combine: invalid sentinel combination (would produce NaN)");
    return r;
}

GridFunction combine_with(PointwiseOp op, const GridFunction& a, const GridFunction* b,
                          double scalar) {
    if (b != nullptr && !(a.spec() == b->spec()))
        throw DomainError("combine: grid specs must be identical");
    std::vector<double> out(a.values().size());
    bool any_inf = false;
    for (std::size_t i = 0; i < out.size(); ++i) {
        double y = (b != nullptr) ? b->values()[i] : scalar;
        out[i] = apply_op(op, a.values()[i], y);
        any_inf = any_inf || !std::isfinite(out[i]);
    }
    return GridFunction(a.spec(), std::move(out), any_inf);
}

}  // namespace

GridFunction combine(PointwiseOp op, const GridFunction& a, const GridFunction& b) {
    if (op == PointwiseOp::Negate) return negate(a);
    if (op == PointwiseOp::Scale)
        throw DomainError("combine: scale takes a scalar second argument");
    return combine_with(op, a, &b, 0.0);
}

GridFunction combine(PointwiseOp op, const GridFunction& a, double scalar) {
    if (op == PointwiseOp::Negate) return negate(a);
    return combine_with(op, a, nullptr, scalar);
}

GridFunction negate(const GridFunction& a) {
    std::vector<double> out(a.values().size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = -a.values()[i];
    return GridFunction(a.spec(), std::move(out), a.extended());
}

double SecondDifferenceDirection::max_positive() const {
    double m = 0.0;
    for (double v : values)
        if (!std::isnan(v)) m = std::max(m, v);
    return m;
}

double SecondDifferenceDirection::max_negative() const {
    double m = 0.0;
    for (double v : values)
        if (!std::isnan(v)) m = std::max(m, -v);
    return m;
}

double SecondDifferenceDirection::max_abs() const { return std::max(max_positive(), max_negative()); }

SecondDifferenceField second_differences(const GridFunction& u, bool include_diagonals) {
    if (!u.all_finite())
        throw DomainError("second_differences: non-finite values encountered");
    const GridSpec& spec = u.spec();
    const auto& vals = u.values();
    const double nan = std::numeric_limits<double>::quiet_NaN();

    std::vector<std::array<int, 2>> steps;
    steps.push_back({1, 0});
    if (spec.dim() == 2) {
        steps.push_back({0, 1});
        if (include_diagonals) {
            steps.push_back({1, 1});
            steps.push_back({1, -1});
        }
    }

    SecondDifferenceField field;
    field.spec = spec;
    for (auto st : steps) {
        SecondDifferenceDirection dir;
        dir.step = st;
        double hx = spec.spacing(0) * st[0];
        double hy = spec.dim() == 2 ? spec.spacing(1) * st[1] : 0.0;
        dir.step_length = std::sqrt(hx * hx + hy * hy);
        dir.values.assign(vals.size(), nan);
        const std::int64_t n0 = spec.extent(0);
        const std::int64_t n1 = spec.dim() == 2 ? spec.extent(1) : 1;
        for (std::int64_t i = 0; i < n0; ++i) {
            for (std::int64_t j = 0; j < n1; ++j) {
                std::int64_t ip = i + st[0], im = i - st[0];
                std::int64_t jp = j + st[1], jm = j - st[1];
                if (ip < 0 || ip >= n0 || im < 0 || im >= n0) continue;
                if (jp < 0 || jp >= n1 || jm < 0 || jm >= n1) continue;
                dir.values[spec.index(i, j)] =
                    vals[spec.index(ip, jp)] - 2.0 * vals[spec.index(i, j)] + vals[spec.index(im, jm)];
            }
        }
        field.directions.push_back(std::move(dir));
    }
    return field;
}

GridFunction pad(const GridFunction& u, std::int64_t margin_nodes, double fill) {
    if (margin_nodes < 0) throw DomainError("pad: margin must be >= 0");
    if (std::isnan(fill)) throw DomainError("pad: fill must not be NaN");
    if (margin_nodes == 0) return u;
    const GridSpec& s = u.spec();
    GridSpec ns = s.dim() == 1
                      ? GridSpec::make_1d(s.origin(0) - double(margin_nodes) * s.spacing(0),
                                          s.spacing(0), s.extent(0) + 2 * margin_nodes)
                      : GridSpec::make_2d({s.origin(0) - double(margin_nodes) * s.spacing(0),
                                           s.origin(1) - double(margin_nodes) * s.spacing(1)},
                                          {s.spacing(0), s.spacing(1)},
                                          {s.extent(0) + 2 * margin_nodes,
                                           s.extent(1) + 2 * margin_nodes});
    std::vector<double> out(static_cast<std::size_t>(ns.node_count()), fill);
    if (s.dim() == 1) {
        for (std::int64_t i = 0; i < s.extent(0); ++i) out[i + margin_nodes] = u[i];
    } else {
        for (std::int64_t i = 0; i < s.extent(0); ++i)
            for (std::int64_t j = 0; j < s.extent(1); ++j)
                out[ns.index(i + margin_nodes, j + margin_nodes)] = u[s.index(i, j)];
    }
    bool ext = u.extended() || !std::isfinite(fill);
    return GridFunction(ns, std::move(out), ext);
}

}  // namespace quadenv
