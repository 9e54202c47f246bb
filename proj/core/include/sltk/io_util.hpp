#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace sltk {

/// Whole-file read; throws ValidationError if the file cannot be opened.
[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);

/// Writes bytes verbatim (binary mode, so LF stays LF). Throws Error on failure.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace sltk
