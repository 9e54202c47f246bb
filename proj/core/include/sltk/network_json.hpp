#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sltk/network.hpp"

namespace sltk {

// Network JSON:
//   { "w_max": <number>,
//     "layers": [ { "rows": r, "cols": c, "activation": "relu"|"tanh"|"logistic"|"identity",
//                   "weights": [r*c numbers, row-major] }, ... ] }
// Unknown keys are rejected. Consecutive layers must chain (cols_i == rows_{i-1}).

/// Throws ValidationError on any schema violation.
[[nodiscard]] TargetNetwork parse_network_json(std::string_view text);
[[nodiscard]] TargetNetwork read_network_json(const std::filesystem::path& path);

[[nodiscard]] std::string to_network_json(const TargetNetwork& net);
void write_network_json(const TargetNetwork& net, const std::filesystem::path& path);

}  // namespace sltk
