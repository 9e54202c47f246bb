#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "sltk/construction.hpp"

namespace sltk {

/// Binary "LFG1" container for a large network and, optionally, its masks.
/// Layout is documented in docs/container-format.md.
struct ContainerContents {
  LargeNetwork network;
  std::optional<PruneResult> prune;
};

[[nodiscard]] std::string encode_container(const LargeNetwork& g, const PruneResult* p = nullptr);

/// Throws ValidationError on a bad magic, truncated data or inconsistent shapes.
[[nodiscard]] ContainerContents decode_container(std::string_view bytes);

void write_container(const std::filesystem::path& path, const LargeNetwork& g,
                     const PruneResult* p = nullptr);

[[nodiscard]] ContainerContents read_container(const std::filesystem::path& path);

}  // namespace sltk
