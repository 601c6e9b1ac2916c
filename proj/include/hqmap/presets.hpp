#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace hqmap {

struct Preset {
  std::string name;         // e.g. "affine:a=0.5"
  std::string kind;         // "map" or "curve"
  std::string description;
  nlohmann::json spec;
};

/// The built-in specs with their default parameters.
std::vector<Preset> presets();

/// Expands a preset name with optional parameters ("affine:a=0.25",
/// "affine_a0.25", "ellipse:a=2,b=1", ...). Throws InputError for unknown names.
Preset expand_preset(const std::string& text);

/// A map spec from a preset name, an inline JSON object or a JSON file path.
/// Curve presets become arclength-proportional composed maps.
nlohmann::json resolve_map_spec(const std::string& text);

/// A curve spec from a preset name, an inline JSON object or a JSON file path.
/// Trig map presets become Fourier curves.
nlohmann::json resolve_curve_spec(const std::string& text);

}  // namespace hqmap
