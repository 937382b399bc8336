#pragma once

#include <optional>

namespace juliart {

/// Hue in degrees [0, 360), saturation and brightness in [0, 1].
struct HsvColor {
  double hue = 0.0;
  double saturation = 0.0;
  double brightness = 0.0;

  /// Wraps hue modulo 360 and clamps the other two channels.
  static HsvColor normalized(double hue, double saturation, double brightness);

  friend bool operator==(const HsvColor&, const HsvColor&) = default;
};

struct RgbColor {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  friend bool operator==(const RgbColor&, const RgbColor&) = default;
};

/// Relative color change carried by an adjustment list. Saturation and
/// brightness components are clamped to [-1, 1] on use.
struct ColorAdjustment {
  std::optional<double> hue;
  std::optional<double> saturation;
  std::optional<double> brightness;
};

RgbColor hsv_to_rgb(const HsvColor& c);

/// Hue is additive modulo 360. A positive saturation/brightness adjustment a
/// moves the channel toward 1 (v + a(1 - v)), a negative one toward 0
/// (v(1 + a)).
HsvColor apply_adjustment(const HsvColor& base, const ColorAdjustment& adj);

/// (n - 1) / (N - 1), clamped to [0, 1]. Throws std::invalid_argument for N < 2.
double escape_ramp_up(int num_steps, int max_steps);

/// scale * (1 + (1 - n) / (N - 1)), clamped to [0, 1].
double escape_ramp_down(int num_steps, int max_steps, double scale = 1.0);

}  // namespace juliart
