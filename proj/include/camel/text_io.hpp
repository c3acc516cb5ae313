#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "camel/matrix.hpp"

namespace camel {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view token);  // throws InputError on junk

// Splits on commas and whitespace, dropping empty fields.
std::vector<std::string_view> split_fields(std::string_view line);

// One matrix row per line, fields space-separated in full precision.
std::string matrix_to_text(const Matrix& m);
Matrix read_matrix_file(const std::filesystem::path& path);

// Writes content to a temp file in the target directory, then renames it
// over the destination so readers never observe a partial file.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace camel
