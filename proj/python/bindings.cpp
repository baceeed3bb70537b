#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "quadenv/analysis.hpp"
#include "quadenv/circle.hpp"
#include "quadenv/envelope.hpp"
#include "quadenv/io.hpp"
#include "quadenv/regularize.hpp"

namespace py = pybind11;
using namespace quadenv;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quadratic inf/sup envelope operators on sampled grids";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_RuntimeError);

    py::class_<GridSpec>(m, "GridSpec")
        .def_static("make_1d", &GridSpec::make_1d, py::arg("origin"), py::arg("spacing"),
                    py::arg("n"))
        .def_static("make_2d", &GridSpec::make_2d, py::arg("origin"), py::arg("spacing"),
                    py::arg("shape"))
        .def_static("from_range", &GridSpec::from_range, py::arg("range"))
        .def_property_readonly("dim", &GridSpec::dim)
        .def("origin", &GridSpec::origin)
        .def("spacing", &GridSpec::spacing)
        .def("extent", &GridSpec::extent)
        .def("node_count", &GridSpec::node_count)
        .def("coordinate", &GridSpec::coordinate)
        .def("__eq__", [](const GridSpec& a, const GridSpec& b) { return a == b; });

    py::class_<GridFunction>(m, "GridFunction")
        .def(py::init<GridSpec, std::vector<double>, bool>(), py::arg("spec"), py::arg("values"),
             py::arg("extended") = false)
        .def_property_readonly("spec", &GridFunction::spec)
        .def_property_readonly("values",
                               [](const GridFunction& g) { return g.values(); })
        .def_property_readonly("extended", &GridFunction::extended)
        .def("max_abs", &GridFunction::max_abs)
        .def("eps", &GridFunction::eps)
        .def("__len__", &GridFunction::size);

    m.def(
        "generate",
        [](const std::string& kind, const std::vector<double>& params, const GridSpec& spec,
           std::uint64_t seed) { return generate(kind, params, spec, seed); },
        py::arg("kind"), py::arg("params"), py::arg("spec"), py::arg("seed") = 0);
    m.def(
        "combine",
        [](const std::string& op, const GridFunction& a, const GridFunction& b) {
            return combine(pointwise_op_from_name(op), a, b);
        },
        py::arg("op"), py::arg("a"), py::arg("b"));
    m.def(
        "combine_scalar",
        [](const std::string& op, const GridFunction& a, double s) {
            return combine(pointwise_op_from_name(op), a, s);
        },
        py::arg("op"), py::arg("a"), py::arg("scalar"));
    m.def("negate", &negate, py::arg("u"));
    m.def("pad", &pad, py::arg("u"), py::arg("margin_nodes"), py::arg("fill"));

    m.def(
        "lower_envelope_1d",
        [](const std::vector<double>& f, double h, double t) {
            return lower_envelope_1d(f, h, t);
        },
        py::arg("f"), py::arg("h"), py::arg("t"));
    m.def("inf_convolve", &inf_convolve, py::arg("u"), py::arg("t"));
    m.def("sup_convolve", &sup_convolve, py::arg("u"), py::arg("t"));
    m.def("inf_convolve_bruteforce", &inf_convolve_bruteforce, py::arg("u"), py::arg("t"),
          py::arg("allow_large") = false);
    m.def(
        "legendre_conjugate",
        [](const GridFunction& u, const std::vector<double>& slopes) {
            ConjugateTable t = legendre_conjugate(u, slopes);
            return py::make_tuple(t.slopes, t.values);
        },
        py::arg("u"), py::arg("slopes"));
    m.def("quadratic_bidual", &quadratic_bidual, py::arg("u"), py::arg("t"));

    m.def("lasry_lions", &lasry_lions, py::arg("u"), py::arg("s"), py::arg("t"));
    m.def("symmetric_r", &symmetric_r, py::arg("f"), py::arg("t"));
    m.def("semigroup_defect", &semigroup_defect, py::arg("u"), py::arg("s"), py::arg("t"));

    py::class_<RegularityReport>(m, "RegularityReport")
        .def_readonly("k_semiconcave", &RegularityReport::k_semiconcave)
        .def_readonly("k_semiconvex", &RegularityReport::k_semiconvex)
        .def_readonly("grad_lipschitz", &RegularityReport::grad_lipschitz)
        .def_readonly("c11_at_t", &RegularityReport::c11_at_t)
        .def_readonly("slack_used", &RegularityReport::slack_used);

    py::class_<PinchResult>(m, "PinchResult")
        .def_readonly("w", &PinchResult::w)
        .def_readonly("t_used", &PinchResult::t_used)
        .def_readonly("k_upper", &PinchResult::k_upper)
        .def_readonly("k_lower", &PinchResult::k_lower)
        .def_readonly("sandwich_defect", &PinchResult::sandwich_defect)
        .def_readonly("regularity", &PinchResult::regularity);

    m.def("ilmanen_sandwich", &ilmanen_sandwich, py::arg("u"), py::arg("v"),
          py::arg("f") = std::nullopt, py::arg("k") = std::nullopt);

    m.def("semiconcavity_constant", &semiconcavity_constant, py::arg("u"));
    m.def("semiconvexity_constant", &semiconvexity_constant, py::arg("u"));
    m.def(
        "modulus_of_continuity",
        [](const GridFunction& u) {
            ModulusTable t = modulus_of_continuity(u);
            return py::make_tuple(t.radii, t.rho);
        },
        py::arg("u"));
    m.def(
        "epsilon_bound",
        [](const std::vector<double>& radii, const std::vector<double>& rho, double t) {
            EpsilonBound b = epsilon_bound(ModulusTable{radii, rho}, t);
            return py::make_tuple(b.exact, b.closed_form);
        },
        py::arg("radii"), py::arg("rho"), py::arg("t"));
    m.def("gradient_lipschitz_estimate", &gradient_lipschitz_estimate, py::arg("u"));
    m.def("c11_report", &c11_report, py::arg("u"), py::arg("t"),
          py::arg("slack") = std::nullopt);

    py::class_<Chart>(m, "Chart")
        .def(py::init([](double center, double half_width) {
                 return Chart{center, half_width};
             }),
             py::arg("center"), py::arg("half_width"))
        .def_readonly("center", &Chart::center)
        .def_readonly("half_width", &Chart::half_width);

    py::class_<CircleFunction>(m, "CircleFunction")
        .def(py::init([](std::int64_t n, std::vector<double> values) {
                 return CircleFunction{n, std::move(values)};
             }),
             py::arg("n"), py::arg("values"))
        .def_readonly("n", &CircleFunction::n)
        .def_readonly("values", &CircleFunction::values)
        .def("theta", &CircleFunction::theta);

    py::class_<CircleAtlas>(m, "CircleAtlas")
        .def_readonly("charts", &CircleAtlas::charts)
        .def_readonly("weights", &CircleAtlas::weights)
        .def_readonly("a", &CircleAtlas::a)
        .def_readonly("circle_nodes", &CircleAtlas::circle_nodes)
        .def("weight_on_circle", &CircleAtlas::weight_on_circle);

    m.def("build_atlas", &build_atlas, py::arg("n_charts"), py::arg("nodes_per_chart"));
    m.def("pull_to_chart", &pull_to_chart, py::arg("f"), py::arg("chart"), py::arg("grid"));
    m.def("push_to_circle", &push_to_circle, py::arg("g"), py::arg("chart"), py::arg("n"));
    m.def("localization_constants", &localization_constants, py::arg("atlas"), py::arg("u"),
          py::arg("v"));
    m.def("g_t_apply", &g_t_apply, py::arg("atlas"), py::arg("f"), py::arg("t"));

    m.def(
        "read_grid",
        [](const std::string& path) {
            GridFile f = read_grid(path);
            return py::make_tuple(f.fn, f.metadata);
        },
        py::arg("path"));
    m.def(
        "write_grid",
        [](const std::string& path, const GridFunction& g,
           const std::map<std::string, std::string>& metadata) { write_grid(path, g, metadata); },
        py::arg("path"), py::arg("g"),
        py::arg("metadata") = std::map<std::string, std::string>{});
    m.def("emit_plot_data", &emit_plot_data, py::arg("g"), py::arg("path"));
}
