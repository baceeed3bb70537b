#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "quadenv/envelope.hpp"
#include "quadenv/io.hpp"

using namespace quadenv;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "quadenv_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(QUADENV_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("grid files round trip bit-exactly, including sentinels") {
    GridFunction g = generate(GeneratorKind::RandomBetween, std::vector<double>{-5.0, 5.0},
                              GridSpec::make_1d(-2.0, 0.01, 401), 99);
    auto vals = g.values();
    vals[3] = kInf;
    GridFunction ext(g.spec(), vals, true);

    const fs::path p = tmp_dir() / "roundtrip.json";
    write_grid(p.string(), ext, {{"note", "test"}});
    GridFile back = read_grid(p.string());
    CHECK(back.fn.spec() == ext.spec());
    CHECK(back.fn.values() == ext.values());
    CHECK(back.fn.extended());
    CHECK(back.metadata.at("note") == "test");

    GridSpec s2 = GridSpec::make_2d({-1.0, 0.5}, {0.05, 0.125}, {11, 7});
    GridFunction g2 = generate(GeneratorKind::RandomBetween, std::vector<double>{-3.0, 3.0}, s2, 8);
    write_grid(p.string(), g2);
    GridFile back2 = read_grid(p.string());
    CHECK(back2.fn.spec() == g2.spec());
    CHECK(back2.fn.values() == g2.values());
}

TEST_CASE("malformed grid files carry position information") {
    const fs::path p = tmp_dir() / "broken.json";
    std::ofstream(p) << "{ \"dim\": 1, ";
    CHECK_THROWS_AS(read_grid(p.string()), FormatError);
    try {
        read_grid(p.string());
    } catch (const FormatError& e) {
        // the parser reports where it stopped (line/column)
        CHECK(std::string(e.what()).find("line") != std::string::npos);
    }

    std::ofstream(p) << R"({"dim":1,"origin":[0],"spacing":[0.1],"shape":[4],"values":[1,2,3]})";
    CHECK_THROWS_AS(read_grid(p.string()), FormatError);

    std::ofstream(p) << R"({"dim":1,"origin":[0],"spacing":[0.1],"shape":[3],)"
                        R"("values":[1,"inf",3],"extended":true})";
    GridFile ok = read_grid(p.string());
    CHECK(ok.fn[1] == kInf);
}

TEST_CASE("plot data: header plus one line per node, 17 significant digits") {
    GridSpec s = GridSpec::make_1d(0.0, 0.1, 5);
    GridFunction g(s, {0.1, 0.2, 1.0 / 3.0, 0.4, 0.5});
    const fs::path p = tmp_dir() / "plot.csv";
    emit_plot_data(g, p.string());
    std::string text = slurp(p);
    CHECK(std::count(text.begin(), text.end(), '\n') == 6);
    CHECK(text.rfind("x,value\n", 0) == 0);
    CHECK(text.find("0.33333333333333331") != std::string::npos);

    GridSpec s2 = GridSpec::make_2d({0.0, 0.0}, {1.0, 1.0}, {3, 3});
    GridFunction g2(s2, std::vector<double>(9, 1.0));
    emit_plot_data(g2, p.string());
    const std::string text2 = slurp(p);
    CHECK(std::count(text2.begin(), text2.end(), '\n') == 10);
}

TEST_CASE("digest is deterministic and value-sensitive") {
    GridSpec s = GridSpec::make_1d(0.0, 1.0, 3);
    GridFunction a(s, {1.0, 2.0, 3.0});
    GridFunction b(s, {1.0, 2.0, 3.5});
    CHECK(grid_digest(a) == grid_digest(a));
    CHECK(grid_digest(a) != grid_digest(b));
}

TEST_CASE("cli: gen/envelope round trip and oracle flag") {
    const fs::path dir = tmp_dir();
    const std::string u = (dir / "u.json").string();
    const std::string fast = (dir / "fast.json").string();
    const std::string brute = (dir / "brute.json").string();
    REQUIRE(run_cli("gen --kind random-between --params -1 1 --seed 5 --grid -1:0.01:1 -o " + u) == 0);
    REQUIRE(run_cli("envelope --mode inf --t 0.1 -i " + u + " -o " + fast) == 0);
    REQUIRE(run_cli("envelope --mode inf --t 0.1 --brute-force -i " + u + " -o " + brute) == 0);
    GridFile a = read_grid(fast), b = read_grid(brute);
    for (std::int64_t i = 0; i < a.fn.size(); ++i)
        CHECK(std::abs(a.fn[i] - b.fn[i]) <= 1e-12 * (1.0 + a.fn.max_abs()));
}

TEST_CASE("cli: pinch writes a recomputable report; u < v exits 3") {
    const fs::path dir = tmp_dir();
    const std::string u = (dir / "pu.json").string();
    const std::string v = (dir / "pv.json").string();
    const std::string w = (dir / "pw.json").string();
    const std::string rep = (dir / "prep.json").string();
    REQUIRE(run_cli("gen --kind min-of-parabolas --params 1 -0.4 0.2 0.5 0.1 --grid -1:0.005:1 -o " + u) == 0);
    REQUIRE(run_cli("gen --kind max-of-parabolas --params 1 -0.1 -0.3 0.6 -0.2 --grid -1:0.005:1 -o " + v) == 0);
    REQUIRE(run_cli("pinch -u " + u + " -v " + v + " --k 1 -o " + w + " --report " + rep) == 0);
    nlohmann::json r = nlohmann::json::parse(slurp(rep));
    CHECK(r["operation"] == "ilmanen_sandwich");
    CHECK(r["defects"]["sandwich_defect"].get<double>() <= 1e-9);
    CHECK(r["tolerances"].contains("fp_eps"));
    CHECK(r["timings_ms"].contains("total"));

    // explicit f between the bounds
    CHECK(run_cli("pinch -u " + u + " -v " + v + " -f " + v + " --k 0.5 -o " + w) == 0);

    // swapped bounds: u < v somewhere -> domain violation, exit 3
    CHECK(run_cli("pinch -u " + v + " -v " + u + " -o " + w) == 3);
}

TEST_CASE("cli: --report never changes the numeric output") {
    const fs::path dir = tmp_dir();
    const std::string u = (dir / "ru.json").string();
    const std::string w1 = (dir / "rw1.json").string();
    const std::string w2 = (dir / "rw2.json").string();
    const std::string rep = (dir / "rrep.json").string();
    REQUIRE(run_cli("gen --kind lipschitz-trig --params 2 3 --grid -1:0.01:1 -o " + u) == 0);
    REQUIRE(run_cli("regularize --op rt --t 0.25 -i " + u + " -o " + w1) == 0);
    REQUIRE(run_cli("regularize --op rt --t 0.25 -i " + u + " -o " + w2 + " --report " + rep) == 0);
    GridFile a = read_grid(w1), b = read_grid(w2);
    CHECK(a.fn.values() == b.fn.values());
}

TEST_CASE("cli: exit codes for usage and format errors") {
    const fs::path dir = tmp_dir();
    const std::string broken = (dir / "cli_broken.json").string();
    std::ofstream(broken) << "not json";
    CHECK(run_cli("envelope --mode inf --t 1 -i " + broken + " -o /dev/null") == 2);
    CHECK(run_cli("envelope --misspelled") == 1);
    CHECK(run_cli("gen --kind quadratic --params 1 -o /dev/null") == 1);  // no grid given
}

TEST_CASE("cli: analyze and conjugate emit reports") {
    const fs::path dir = tmp_dir();
    const std::string u = (dir / "au.json").string();
    const std::string rep = (dir / "arep.json").string();
    const std::string mod = (dir / "amod.json").string();
    const std::string conj = (dir / "aconj.json").string();
    REQUIRE(run_cli("gen --kind quadratic --params 0.3 --grid -2:0.01:2 -o " + u) == 0);
    REQUIRE(run_cli("analyze -i " + u + " --t 1 --report " + rep + " --modulus " + mod) == 0);
    nlohmann::json r = nlohmann::json::parse(slurp(rep));
    CHECK(std::abs(r["regularity"]["k_semiconcave"].get<double>() - 10.0 / 3.0) < 1e-6);
    CHECK(r["regularity"]["k_semiconvex"] == "inf");
    CHECK(r["regularity"]["c11_at_t"].get<double>() == 1.0);
    CHECK(nlohmann::json::parse(slurp(mod)).contains("rho"));

    REQUIRE(run_cli("conjugate -i " + u + " --slopes -2:0.5:2 -o " + conj) == 0);
    nlohmann::json c = nlohmann::json::parse(slurp(conj));
    CHECK(c["slopes"].size() == 9);
}

TEST_CASE("cli: circle subcommand applies G_t") {
    const fs::path dir = tmp_dir();
    const std::string f = (dir / "cf.json").string();
    const std::string out = (dir / "cout.json").string();
    REQUIRE(run_cli("gen --kind constant --params 2 --circle-nodes 384 -o " + f) == 0);
    REQUIRE(run_cli("circle --charts 3 --nodes 128 --t 0.5 -i " + f + " -o " + out) == 0);
    GridFile g = read_grid(out);
    CHECK(g.metadata.at("topology") == "circle");
    for (std::int64_t i = 0; i < g.fn.size(); ++i) CHECK(std::abs(g.fn[i] - 2.0) <= 1e-2);
}
