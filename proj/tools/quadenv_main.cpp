// quadenv: quadratic inf/sup envelope operators on sampled grids.
//
// Exit codes: 0 success, 1 usage error, 2 input format error, 3 domain
// violation (e.g. u < v in pinch).

#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quadenv/analysis.hpp"
#include "quadenv/circle.hpp"
#include "quadenv/envelope.hpp"
#include "quadenv/io.hpp"
#include "quadenv/regularize.hpp"

using nlohmann::json;
using namespace quadenv;

namespace {

json json_real(double v) {
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    return v;
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

json regularity_json(const RegularityReport& r) {
    json j;
    j["k_semiconcave"] = json_real(r.k_semiconcave);
    j["k_semiconvex"] = json_real(r.k_semiconvex);
    j["grad_lipschitz"] = json_real(r.grad_lipschitz);
    j["c11_at_t"] = r.c11_at_t ? json(*r.c11_at_t) : json(nullptr);
    j["c11_slack"] = r.slack_used;
    return j;
}

void write_report(const std::string& path, json report) { write_text_atomic(path, report.dump(2) + "\n"); }

std::vector<double> parse_slope_range(const std::string& range) {
    GridSpec s = GridSpec::from_range(range);
    std::vector<double> out(static_cast<std::size_t>(s.extent(0)));
    for (std::int64_t i = 0; i < s.extent(0); ++i) out[i] = s.coordinate(0, i);
    return out;
}

CircleFunction circle_from_file(const std::string& path) {
    GridFile file = read_grid(path);
    if (file.fn.spec().dim() != 1)
        throw FormatError("circle input must be a 1D grid file of samples at 2*pi*j/n");
    CircleFunction f;
    f.n = file.fn.spec().extent(0);
    f.values = file.fn.values();
    return f;
}

void write_circle(const std::string& path, const CircleFunction& f) {
    const double two_pi = 6.283185307179586476925286766559;
    GridSpec spec = GridSpec::make_1d(0.0, two_pi / double(f.n), f.n);
    write_grid(path, GridFunction(spec, f.values), {{"topology", "circle"}});
}

int run(int argc, char** argv) {
    CLI::App app{"quadratic inf/sup envelope operators on sampled grids"};
    app.require_subcommand(1);

    // ---- gen ----------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a named test function");
    std::string gen_kind, gen_grid, gen_grid_y, gen_out, gen_csv;
    std::vector<double> gen_params;
    std::uint64_t gen_seed = 0;
    std::int64_t gen_circle = 0;
    gen->add_option("--kind", gen_kind, "generator name")->required();
    gen->add_option("--params", gen_params, "generator parameters");
    gen->add_option("--grid", gen_grid, "1D grid as a:h:b (axis 0 in 2D)");
    gen->add_option("--grid-y", gen_grid_y, "axis 1 as a:h:b (makes the grid 2D)");
    gen->add_option("--circle-nodes", gen_circle, "sample on the circle at 2*pi*j/n instead");
    gen->add_option("--seed", gen_seed, "seed for random generators");
    gen->add_option("-o,--output", gen_out, "output grid file")->required();
    gen->add_option("--csv", gen_csv, "also write plot data");

    // ---- envelope -----------------------------------------------------
    auto* env = app.add_subcommand("envelope", "inf/sup convolution T_t / T̆_t");
    std::string env_mode = "inf", env_in, env_out, env_report, env_csv;
    double env_t = 0.0;
    bool env_brute = false, env_allow_large = false;
    env->add_option("--mode", env_mode, "inf or sup")->check(CLI::IsMember({"inf", "sup"}));
    env->add_option("--t", env_t, "envelope width t > 0")->required();
    env->add_flag("--brute-force", env_brute, "use the exhaustive oracle");
    env->add_flag("--allow-large", env_allow_large, "lift the brute-force size guard");
    env->add_option("-i,--input", env_in)->required();
    env->add_option("-o,--output", env_out)->required();
    env->add_option("--report", env_report);
    env->add_option("--csv", env_csv);

    // ---- regularize ---------------------------------------------------
    auto* reg = app.add_subcommand("regularize", "R_t or upper-lower (Lasry-Lions) smoothing");
    std::string reg_op = "rt", reg_in, reg_out, reg_report, reg_csv;
    double reg_t = 0.0, reg_s = 0.0;
    reg->add_option("--op", reg_op, "rt (symmetric) or ll")->check(CLI::IsMember({"rt", "ll"}));
    reg->add_option("--t", reg_t)->required();
    reg->add_option("--s", reg_s, "inner width for ll (0 < s < t)");
    reg->add_option("-i,--input", reg_in)->required();
    reg->add_option("-o,--output", reg_out)->required();
    reg->add_option("--report", reg_report);
    reg->add_option("--csv", reg_csv);

    // ---- pinch --------------------------------------------------------
    auto* pinch = app.add_subcommand("pinch", "C^{1,1} sandwich w between u and v");
    std::string pinch_u, pinch_v, pinch_f, pinch_k = "auto", pinch_out, pinch_report;
    pinch->add_option("-u", pinch_u, "upper bound grid file")->required();
    pinch->add_option("-v", pinch_v, "lower bound grid file")->required();
    pinch->add_option("-f", pinch_f, "function to regularize (defaults to u)");
    pinch->add_option("--k", pinch_k, "pinch level: auto or a positive real");
    pinch->add_option("-o,--output", pinch_out)->required();
    pinch->add_option("--report", pinch_report);

    // ---- analyze ------------------------------------------------------
    auto* ana = app.add_subcommand("analyze", "regularity constants and modulus of continuity");
    std::string ana_in, ana_report, ana_modulus;
    double ana_t = 0.0;
    ana->add_option("-i,--input", ana_in)->required();
    auto* ana_topt = ana->add_option("--t", ana_t, "level for the C^{1,1} verdict and epsilon(t)");
    ana->add_option("--report", ana_report)->required();
    ana->add_option("--modulus", ana_modulus, "write the modulus table (1D inputs)");

    // ---- conjugate ----------------------------------------------------
    auto* conj = app.add_subcommand("conjugate", "discrete Legendre-Fenchel conjugate");
    std::string conj_in, conj_slopes, conj_out;
    conj->add_option("-i,--input", conj_in)->required();
    conj->add_option("--slopes", conj_slopes, "slope list as a:h:b")->required();
    conj->add_option("-o,--output", conj_out)->required();

    // ---- circle -------------------------------------------------------
    auto* circ = app.add_subcommand("circle", "partition-of-unity regularizer G_t on S^1");
    std::string circ_in, circ_u, circ_v, circ_out, circ_report;
    int circ_charts = 3;
    std::int64_t circ_nodes = 512;
    double circ_t = 0.0;
    circ->add_option("--charts", circ_charts, "number of charts (>= 3)");
    circ->add_option("--nodes", circ_nodes, "circle nodes per chart (>= 64)");
    circ->add_option("--t", circ_t, "t in (0, 1]")->required();
    circ->add_option("-i,--input", circ_in, "circle samples (n = charts * nodes)")->required();
    circ->add_option("-u", circ_u, "upper bound for the localization constants (defaults to f)");
    circ->add_option("-v", circ_v, "lower bound (defaults to f)");
    circ->add_option("-o,--output", circ_out)->required();
    circ->add_option("--report", circ_report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (gen->parsed()) {
        GridSpec spec;
        if (gen_circle > 0) {
            const double two_pi = 6.283185307179586476925286766559;
            spec = GridSpec::make_1d(0.0, two_pi / double(gen_circle), gen_circle);
        } else if (!gen_grid.empty() && gen_grid_y.empty()) {
            spec = GridSpec::from_range(gen_grid);
        } else if (!gen_grid.empty()) {
            GridSpec gx = GridSpec::from_range(gen_grid);
            GridSpec gy = GridSpec::from_range(gen_grid_y);
            spec = GridSpec::make_2d({gx.origin(0), gy.origin(0)}, {gx.spacing(0), gy.spacing(0)},
                                     {gx.extent(0), gy.extent(0)});
        } else {
            throw CLI::ValidationError("gen", "one of --grid or --circle-nodes is required");
        }
        GridFunction g = generate(gen_kind, gen_params, spec, gen_seed);
        std::map<std::string, std::string> meta;
        if (gen_circle > 0) meta["topology"] = "circle";
        write_grid(gen_out, g, meta);
        if (!gen_csv.empty()) emit_plot_data(g, gen_csv);
        return 0;
    }

    if (env->parsed()) {
        GridFile in = read_grid(env_in);
        Stopwatch clock;
        GridFunction out = env_mode == "inf"
                               ? (env_brute ? inf_convolve_bruteforce(in.fn, env_t, env_allow_large)
                                            : inf_convolve(in.fn, env_t))
                               : (env_brute ? negate(inf_convolve_bruteforce(negate(in.fn), env_t,
                                                                             env_allow_large))
                                            : sup_convolve(in.fn, env_t));
        const double elapsed = clock.ms();
        write_grid(env_out, out);
        if (!env_csv.empty()) emit_plot_data(out, env_csv);
        if (!env_report.empty()) {
            json r;
            r["operation"] = env_brute ? env_mode + "_convolve_bruteforce" : env_mode + "_convolve";
            r["inputs"] = {{"u", grid_digest(in.fn)}};
            r["parameters"] = {{"t", env_t}};
            r["tolerances"] = {{"fp_eps", in.fn.eps()}};
            r["timings_ms"] = {{"total", elapsed}};
            write_report(env_report, r);
        }
        return 0;
    }

    if (reg->parsed()) {
        GridFile in = read_grid(reg_in);
        Stopwatch clock;
        GridFunction out = reg_op == "rt" ? symmetric_r(in.fn, reg_t)
                                          : lasry_lions(in.fn, reg_s, reg_t);
        const double elapsed = clock.ms();
        write_grid(reg_out, out);
        if (!reg_csv.empty()) emit_plot_data(out, reg_csv);
        if (!reg_report.empty()) {
            json r;
            r["operation"] = reg_op == "rt" ? "symmetric_r" : "lasry_lions";
            r["inputs"] = {{"f", grid_digest(in.fn)}};
            r["parameters"] = reg_op == "rt" ? json{{"t", reg_t}} : json{{"t", reg_t}, {"s", reg_s}};
            r["regularity"] = regularity_json(c11_report(out, reg_t));
            r["tolerances"] = {{"fp_eps", in.fn.eps()}};
            r["timings_ms"] = {{"total", elapsed}};
            write_report(reg_report, r);
        }
        return 0;
    }

    if (pinch->parsed()) {
        GridFile uf = read_grid(pinch_u);
        GridFile vf = read_grid(pinch_v);
        std::optional<GridFunction> f;
        if (!pinch_f.empty()) f = read_grid(pinch_f).fn;
        std::optional<double> k;
        if (pinch_k != "auto") {
            try {
                k = std::stod(pinch_k);
            } catch (const std::exception&) {
                throw CLI::ValidationError("--k", "must be 'auto' or a real number");
            }
        }
        Stopwatch clock;
        PinchResult res = ilmanen_sandwich(uf.fn, vf.fn, f, k);
        const double elapsed = clock.ms();
        write_grid(pinch_out, res.w);
        if (!pinch_report.empty()) {
            json r;
            r["operation"] = "ilmanen_sandwich";
            r["inputs"] = {{"u", grid_digest(uf.fn)}, {"v", grid_digest(vf.fn)}};
            if (f) r["inputs"]["f"] = grid_digest(*f);
            r["parameters"] = {{"k", pinch_k},
                               {"t_used", res.t_used},
                               {"k_upper", json_real(res.k_upper)},
                               {"k_lower", json_real(res.k_lower)}};
            r["defects"] = {{"sandwich_defect", res.sandwich_defect}};
            r["regularity"] = regularity_json(res.regularity);
            r["tolerances"] = {{"fp_eps", fp_eps(std::max(uf.fn.max_abs(), vf.fn.max_abs()))},
                               {"c11_slack", res.regularity.slack_used}};
            r["timings_ms"] = {{"total", elapsed}};
            write_report(pinch_report, r);
        }
        return 0;
    }

    if (ana->parsed()) {
        const bool ana_has_t = ana_topt->count() > 0;
        GridFile in = read_grid(ana_in);
        Stopwatch clock;
        json r;
        r["operation"] = "analyze";
        r["inputs"] = {{"u", grid_digest(in.fn)}};
        r["parameters"] = ana_has_t ? json{{"t", ana_t}} : json::object();
        json reg_block;
        if (ana_has_t) {
            reg_block = regularity_json(c11_report(in.fn, ana_t));
        } else {
            reg_block["k_semiconcave"] = json_real(semiconcavity_constant(in.fn));
            reg_block["k_semiconvex"] = json_real(semiconvexity_constant(in.fn));
            reg_block["grad_lipschitz"] = json_real(gradient_lipschitz_estimate(in.fn));
        }
        r["regularity"] = reg_block;
        if (in.fn.spec().dim() == 1) {
            ModulusTable table = modulus_of_continuity(in.fn);
            if (ana_has_t) {
                EpsilonBound eps = epsilon_bound(table, ana_t);
                r["defects"] = {{"epsilon_exact", eps.exact}, {"epsilon_closed_form", eps.closed_form}};
            }
            if (!ana_modulus.empty()) {
                json m;
                m["radii"] = table.radii;
                m["rho"] = table.rho;
                write_report(ana_modulus, m);
            }
        }
        r["tolerances"] = {{"fp_eps", in.fn.eps()}};
        r["timings_ms"] = {{"total", clock.ms()}};
        write_report(ana_report, r);
        return 0;
    }

    if (conj->parsed()) {
        GridFile in = read_grid(conj_in);
        std::vector<double> slopes = parse_slope_range(conj_slopes);
        ConjugateTable table = legendre_conjugate(in.fn, slopes);
        json out;
        out["slopes"] = table.slopes;
        out["values"] = table.values;
        write_text_atomic(conj_out, out.dump(2) + "\n");
        return 0;
    }

    if (circ->parsed()) {
        CircleFunction f = circle_from_file(circ_in);
        CircleFunction u = circ_u.empty() ? f : circle_from_file(circ_u);
        CircleFunction v = circ_v.empty() ? f : circle_from_file(circ_v);
        Stopwatch clock;
        CircleAtlas atlas = build_atlas(circ_charts, circ_nodes);
        atlas = localization_constants(std::move(atlas), u, v);
        CircleFunction out = g_t_apply(atlas, f, circ_t);
        const double elapsed = clock.ms();
        write_circle(circ_out, out);
        if (!circ_report.empty()) {
            json r;
            r["operation"] = "g_t_apply";
            r["parameters"] = {{"t", circ_t},
                               {"charts", circ_charts},
                               {"nodes_per_chart", circ_nodes},
                               {"a", atlas.a}};
            r["timings_ms"] = {{"total", elapsed}};
            write_report(circ_report, r);
        }
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    } catch (const FormatError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
