#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace planact {

std::string to_lower(std::string_view s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

/// Joins `parts` with `sep`.
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Shortest round-trip decimal for a double, with "-0" folded to "0".
std::string format_number(double v);

/// Fixed-point rendering with `digits` decimals ("-0.000" folded to "0.000").
std::string format_fixed(double v, int digits);

/// Resolves `path` relative to the directory containing `base_file`, unless
/// `path` is already absolute.
std::string resolve_relative(const std::string& base_file, const std::string& path);

/// Path under the shipped data directory; PLANACT_DATA_DIR in the
/// environment overrides the build-time location.
std::string data_path(const std::string& relative);

}  // namespace planact
