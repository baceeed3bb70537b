#pragma once

#include <map>
#include <string>

#include "quadenv/grid.hpp"

namespace quadenv {

/// A grid function plus free-form string metadata, as stored on disk.
struct GridFile {
    GridFunction fn;
    std::map<std::string, std::string> metadata;
};

/// Read a UTF-8 JSON grid file (keys dim, origin, spacing, shape, values,
/// extended, metadata; infinities as the strings "inf"/"-inf"). Malformed
/// files raise FormatError carrying the parser position.
GridFile read_grid(const std::string& path);

/// Lossless round trip for finite values (shortest round-trip formatting);
/// written atomically (temp file + rename).
void write_grid(const std::string& path, const GridFunction& g,
                const std::map<std::string, std::string>& metadata = {});

/// Plain CSV: header line, then one node per line as coordinates..., value,
/// 17 significant digits.
void emit_plot_data(const GridFunction& g, const std::string& path);

/// FNV-1a 64 digest of the raw value bytes and shape, as a hex string;
/// used to reference inputs from report files.
std::string grid_digest(const GridFunction& g);

/// Write arbitrary pre-serialized JSON text atomically.
void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace quadenv
