#include "juliart/transform.hpp"

namespace juliart {

DrawState compose_adjustments(const DrawState& parent, std::span<const AdjustmentValue> adjs) {
  using scene::AdjustmentKind;
  DrawState out = parent;
  for (const auto& a : adjs) {
    switch (a.kind) {
      case AdjustmentKind::X:
        out.transform.translate(a.first, a.second.value_or(0.0));
        break;
      case AdjustmentKind::Y:
        out.transform.translate(0.0, a.first);
        break;
      case AdjustmentKind::Rotate:
        out.transform.rotate(a.first);
        break;
      case AdjustmentKind::Size:
        out.transform.scale(a.first, a.second.value_or(a.first));
        break;
      case AdjustmentKind::Hue:
        out.color = apply_adjustment(out.color, {a.first, std::nullopt, std::nullopt});
        break;
      case AdjustmentKind::Saturation:
        out.color = apply_adjustment(out.color, {std::nullopt, a.first, std::nullopt});
        break;
      case AdjustmentKind::Brightness:
        out.color = apply_adjustment(out.color, {std::nullopt, std::nullopt, a.first});
        break;
    }
  }
  return out;
}

}  // namespace juliart
