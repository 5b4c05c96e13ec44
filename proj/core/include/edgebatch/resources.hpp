#pragma once

#include <optional>
#include <string_view>
#include <vector>

// Files compiled into the library: the experiment presets (presets/*.conf)
// and the bundled day trace (data/day_trace.csv), keyed by their path
// relative to the project root.
namespace edgebatch::resources {

std::optional<std::string_view> find(std::string_view name);
std::vector<std::string_view> names();

}  // namespace edgebatch::resources
