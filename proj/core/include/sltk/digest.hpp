#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace sltk {

/// Lowercase hex SHA-256 of the bytes.
[[nodiscard]] std::string sha256_hex(std::string_view bytes);

[[nodiscard]] std::string sha256_file(const std::filesystem::path& path);

}  // namespace sltk
