#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace bkgtfk {

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);

/// Strict parse of a whole string as a double; throws ConfigError naming `what`.
double parse_double(std::string_view text, std::string_view what);

/// Writes via a sibling temporary file and rename, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// Joins reals with commas using format_double.
std::string join_doubles(std::span<const double> values);

}  // namespace bkgtfk
