#include "quadenv/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace quadenv {

using nlohmann::json;

namespace {

json grid_to_json(const GridFunction& g, const std::map<std::string, std::string>& metadata) {
    const GridSpec& s = g.spec();
    json j;
    j["dim"] = s.dim();
    json origin = json::array(), spacing = json::array(), shape = json::array();
    for (int a = 0; a < s.dim(); ++a) {
        origin.push_back(s.origin(a));
        spacing.push_back(s.spacing(a));
        shape.push_back(s.extent(a));
    }
    j["origin"] = origin;
    j["spacing"] = spacing;
    j["shape"] = shape;
    json values = json::array();
    for (double v : g.values()) {
        if (v == kInf)
            values.push_back("inf");
        else if (v == -kInf)
            values.push_back("-inf");
        else
            values.push_back(v);
    }
    j["values"] = values;
    j["extended"] = g.extended();
    j["metadata"] = metadata;
    return j;
}

GridFile grid_from_json(const json& j) {
    try {
        const int dim = j.at("dim").get<int>();
        if (dim != 1 && dim != 2) throw FormatError("grid file: dim must be 1 or 2");
        auto origin = j.at("origin").get<std::vector<double>>();
        auto spacing = j.at("spacing").get<std::vector<double>>();
        auto shape = j.at("shape").get<std::vector<std::int64_t>>();
        if (static_cast<int>(origin.size()) != dim || static_cast<int>(spacing.size()) != dim ||
            static_cast<int>(shape.size()) != dim)
            throw FormatError("grid file: origin/spacing/shape must have dim entries");

        GridSpec spec = dim == 1 ? GridSpec::make_1d(origin[0], spacing[0], shape[0])
                                 : GridSpec::make_2d({origin[0], origin[1]},
                                                     {spacing[0], spacing[1]},
                                                     {shape[0], shape[1]});
        const json& jv = j.at("values");
        if (!jv.is_array()) throw FormatError("grid file: values must be an array");
        std::vector<double> values;
        values.reserve(jv.size());
        for (const auto& e : jv) {
            if (e.is_number()) {
                values.push_back(e.get<double>());
            } else if (e.is_string()) {
                const auto s = e.get<std::string>();
                if (s == "inf")
                    values.push_back(kInf);
                else if (s == "-inf")
                    values.push_back(-kInf);
                else
                    throw FormatError("grid file: string value must be \"inf\" or \"-inf\"");
            } else {
                throw FormatError("grid file: values must be numbers or inf strings");
            }
        }
        bool extended = j.value("extended", false);
        GridFile out;
        out.fn = GridFunction(spec, std::move(values), extended);
        if (j.contains("metadata"))
            out.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
        return out;
    } catch (const FormatError&) {
        throw;
    } catch (const std::exception& e) {
        // json access errors and GridFunction invariant violations are both
        // malformed-file conditions at this layer
        throw FormatError(std::string("grid file: ") + e.what());
    }
}

}  // namespace

GridFile read_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError("'" + path + "': " + e.what());
    }
    return grid_from_json(j);
}

void write_text_atomic(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot write '" + tmp + "'");
        out << text;
        if (!out) throw FormatError("write failed for '" + tmp + "'");
    }
    fs::rename(tmp, path);
}

void write_grid(const std::string& path, const GridFunction& g,
                const std::map<std::string, std::string>& metadata) {
    write_text_atomic(path, grid_to_json(g, metadata).dump(2) + "\n");
}

void emit_plot_data(const GridFunction& g, const std::string& path) {
    const GridSpec& s = g.spec();
    std::string text;
    text += s.dim() == 1 ? "x,value\n" : "x,y,value\n";
    char buf[128];
    if (s.dim() == 1) {
        for (std::int64_t i = 0; i < s.extent(0); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", s.coordinate(0, i), g[i]);
            text += buf;
        }
    } else {
        for (std::int64_t i = 0; i < s.extent(0); ++i)
            for (std::int64_t j = 0; j < s.extent(1); ++j) {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.coordinate(0, i),
                              s.coordinate(1, j), g[s.index(i, j)]);
                text += buf;
            }
    }
    write_text_atomic(path, text);
}

std::string grid_digest(const GridFunction& g) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    auto mix = [&hash](const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            hash ^= p[i];
            hash *= 0x100000001b3ULL;
        }
    };
    const GridSpec& s = g.spec();
    std::int64_t dim = s.dim();
    mix(&dim, sizeof dim);
    for (int a = 0; a < s.dim(); ++a) {
        std::int64_t e = s.extent(a);
        mix(&e, sizeof e);
    }
    mix(g.values().data(), g.values().size() * sizeof(double));
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, hash);
    return buf;
}

}  // namespace quadenv
