#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace scenegen {

std::string read_text_file(const std::filesystem::path& path);

/// Writes through a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Appends to a file, creating it if needed.
void append_text_file(const std::filesystem::path& path, std::string_view contents);

/// Rounds to `digits` significant decimal digits (for canonical number output).
double round_significant(double value, int digits = 9);

std::string base64_encode(std::string_view bytes);
/// Throws std::invalid_argument on characters outside the standard alphabet.
std::string base64_decode(std::string_view text);

}  // namespace scenegen
