#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace speclab {

/// A shipped experiment configuration.
struct Preset {
  std::string_view name;
  std::string_view summary;  ///< one line, includes what the output lets you check
  std::string_view yaml;
};

std::span<const Preset> presets();
std::optional<Preset> find_preset(std::string_view name);

}  // namespace speclab
