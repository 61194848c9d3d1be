#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tgm {

/// 17 significant digits (round-trip safe), independent of the C locale.
std::string format_double(double x);

/// Locale-independent parse of a whole field. Throws std::invalid_argument.
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

/// Splits on a single-character delimiter, keeping empty fields.
std::vector<std::string_view> split(std::string_view line, char delim);

/// Writes `contents` to `path` via a temporary file and rename, so readers
/// never observe a partially written file.
void write_file_atomic(const std::string& path, std::string_view contents);

std::string read_file(const std::string& path);

} // namespace tgm
