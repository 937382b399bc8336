#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "juliart/dynamics.hpp"
#include "juliart/render.hpp"

namespace juliart {

struct Preset {
  std::string name;
  std::string title;
  std::string source;     // scene text, as stored under presets/
  std::string variation;  // default -v tag
  Complexd seed;          // the c of the rendered Julia set
  Viewportd viewport;     // from LIMLEFT, LIMRIGHT, LIMBOT, LIMTOP
  int max_steps = 0;      // MAXSTEPS
  int resolution = 0;     // LIMIT
};

/// All presets in gallery order.
std::span<const Preset> presets();

/// Throws SceneError(Request) for an unknown name.
const Preset& preset(std::string_view name);

struct StructureCheck {
  std::string name;
  bool passed = false;
  std::string detail;  // counts, and the first offending pixels on failure
};

struct StructureReport {
  std::string preset;
  std::vector<StructureCheck> checks;

  bool passed() const;
  std::string summary() const;  // one line per check
};

/// Structural checks of a render of the named preset at its reference
/// geometry (one pixel per grid point: size == LIMIT, border 0).
StructureReport verify_structure(std::string_view name, const PixelBuffer& buffer);

}  // namespace juliart
