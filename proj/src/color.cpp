#include "juliart/color.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace juliart {

namespace {

double wrap_hue(double h) {
  double w = std::fmod(h, 360.0);
  if (w < 0.0) w += 360.0;
  // fmod of a tiny negative value can round up to exactly 360.
  if (w >= 360.0) w = 0.0;
  return w;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double toward(double value, double amount) {
  const double a = std::clamp(amount, -1.0, 1.0);
  if (a > 0.0) return clamp01(value + a * (1.0 - value));
  if (a < 0.0) return clamp01(value * (1.0 + a));
  return value;
}

void check_budget(int max_steps) {
  if (max_steps < 2) {
    throw std::invalid_argument("escape ramp requires max_steps >= 2");
  }
}

}  // namespace

HsvColor HsvColor::normalized(double hue, double saturation, double brightness) {
  return {wrap_hue(hue), clamp01(saturation), clamp01(brightness)};
}

RgbColor hsv_to_rgb(const HsvColor& in) {
  const HsvColor c = HsvColor::normalized(in.hue, in.saturation, in.brightness);
  const double chroma = c.brightness * c.saturation;
  const double sector = c.hue / 60.0;
  const double x = chroma * (1.0 - std::fabs(std::fmod(sector, 2.0) - 1.0));
  const double m = c.brightness - chroma;

  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(sector)) {
    case 0: r = chroma; g = x; break;
    case 1: r = x; g = chroma; break;
    case 2: g = chroma; b = x; break;
    case 3: g = x; b = chroma; break;
    case 4: r = x; b = chroma; break;
    default: r = chroma; b = x; break;
  }
  return {clamp01(r + m), clamp01(g + m), clamp01(b + m)};
}

HsvColor apply_adjustment(const HsvColor& base, const ColorAdjustment& adj) {
  HsvColor out = base;
  if (adj.hue) out.hue = wrap_hue(base.hue + *adj.hue);
  if (adj.saturation) out.saturation = toward(base.saturation, *adj.saturation);
  if (adj.brightness) out.brightness = toward(base.brightness, *adj.brightness);
  return out;
}

double escape_ramp_up(int num_steps, int max_steps) {
  check_budget(max_steps);
  return clamp01(static_cast<double>(num_steps - 1) / static_cast<double>(max_steps - 1));
}

double escape_ramp_down(int num_steps, int max_steps, double scale) {
  check_budget(max_steps);
  const double ramp = 1.0 + static_cast<double>(1 - num_steps) / static_cast<double>(max_steps - 1);
  return clamp01(scale * ramp);
}

}  // namespace juliart
