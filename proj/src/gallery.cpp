#include "juliart/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "juliart/scene/evaluator.hpp"
#include "juliart/scene/parser.hpp"

namespace juliart {

namespace detail {
struct EmbeddedPreset {
  const char* name;
  const char* source;
};
extern const EmbeddedPreset kEmbeddedPresets[];
extern const std::size_t kEmbeddedPresetCount;
}  // namespace detail

namespace {

struct PresetInfo {
  const char* name;
  const char* title;
  const char* variation;
  Complexd seed;
};

const PresetInfo kInfo[] = {
    {"basic", "Basic Julia set", "", {-0.381966, 0.618034}},
    {"fjords", "Frozen Fjords", "", {-1.384286, 0.004286}},
    {"forest", "The Wail of the Pripyat Forest", "PAJBHA", {-0.381966, 0.618034}},
    {"ragnarok", "Ragnarök", "", {-1.4, 0.0}},
    {"battle", "The Battle for Smolensk", "", {0.39, -0.252857}},
    {"leaves", "Under the shade of leaves", "", {-1.384286, 0.004286}},
    {"crucified", "The crucified", "", {-1.39, 0.0}},
    {"blood", "Blood sprinkle", "", {0.39, -0.252857}},
};

std::vector<Preset> build_presets() {
  std::vector<Preset> out;
  for (const auto& info : kInfo) {
    const char* source = nullptr;
    for (std::size_t i = 0; i < detail::kEmbeddedPresetCount; ++i) {
      if (std::string_view(detail::kEmbeddedPresets[i].name) == info.name) source = detail::kEmbeddedPresets[i].source;
    }
    Preset p;
    p.name = info.name;
    p.title = info.title;
    p.source = source ? source : "";
    p.variation = info.variation;
    p.seed = info.seed;
    const scene::ExpressionEvaluator constants(scene::load_scene(p.source), VariationSeed(p.variation));
    p.viewport = Viewportd::bounds(constants.constant("LIMLEFT"), constants.constant("LIMRIGHT"),
                                   constants.constant("LIMBOT"), constants.constant("LIMTOP"));
    p.max_steps = static_cast<int>(constants.constant("MAXSTEPS"));
    p.resolution = static_cast<int>(constants.constant("LIMIT"));
    out.push_back(std::move(p));
  }
  return out;
}

// --- pixel helpers ----------------------------------------------------------

using Rgb8 = std::array<std::uint8_t, 3>;

Rgb8 pixel(const PixelBuffer& buf, int x, int y) {
  const auto* p = buf.at(x, y);
  return {p[0], p[1], p[2]};
}

bool is_white(const Rgb8& c) { return c[0] == 255 && c[1] == 255 && c[2] == 255; }
bool is_gray(const Rgb8& c) { return c[0] == c[1] && c[1] == c[2]; }

std::string show(int x, int y, const Rgb8& c) {
  std::ostringstream s;
  s << "(" << x << "," << y << ")=rgb(" << int(c[0]) << "," << int(c[1]) << "," << int(c[2]) << ")";
  return s.str();
}

// Hue in degrees and saturation of an 8-bit color.
std::pair<double, double> hue_saturation(const Rgb8& c) {
  const double r = c[0] / 255.0;
  const double g = c[1] / 255.0;
  const double b = c[2] / 255.0;
  const double hi = std::max({r, g, b});
  const double lo = std::min({r, g, b});
  const double chroma = hi - lo;
  double hue = 0.0;
  if (chroma > 0.0) {
    if (hi == r) {
      hue = 60.0 * std::fmod((g - b) / chroma + 6.0, 6.0);
    } else if (hi == g) {
      hue = 60.0 * ((b - r) / chroma + 2.0);
    } else {
      hue = 60.0 * ((r - g) / chroma + 4.0);
    }
  }
  return {hue, hi > 0.0 ? chroma / hi : 0.0};
}

// Collects the first few failures of a per-pixel predicate.
class PixelCheck {
 public:
  explicit PixelCheck(std::string name) : name_(std::move(name)) {}

  void fail(int x, int y, const Rgb8& c) {
    if (failures_++ < 8) examples_.push_back(show(x, y, c));
  }
  void fail(std::string what) {
    if (failures_++ < 8) examples_.push_back(std::move(what));
  }
  std::size_t failures() const { return failures_; }

  StructureCheck finish(std::string ok_detail) const {
    StructureCheck c{name_, failures_ == 0, std::move(ok_detail)};
    if (failures_ > 0) {
      std::ostringstream s;
      s << failures_ << " offending pixel(s):";
      for (const auto& e : examples_) s << " " << e;
      c.detail = s.str();
    }
    return c;
  }

 private:
  std::string name_;
  std::size_t failures_ = 0;
  std::vector<std::string> examples_;
};

std::string fraction_text(std::size_t n, std::size_t total) {
  std::ostringstream s;
  s << n << "/" << total;
  return s.str();
}

StructureCheck black_fraction(const PixelBuffer& buf) {
  std::size_t black = 0;
  for (int y = 0; y < buf.height; ++y) {
    for (int x = 0; x < buf.width; ++x) {
      const Rgb8 c = pixel(buf, x, y);
      if (c[0] == 0 && c[1] == 0 && c[2] == 0) ++black;
    }
  }
  const std::size_t total = static_cast<std::size_t>(buf.width) * static_cast<std::size_t>(buf.height);
  return {"in-set fraction strictly between 0 and 1", black > 0 && black < total,
          "black pixels " + fraction_text(black, total)};
}

StructureCheck fill_background(const PixelBuffer& buf, const HsvColor& fill, bool (*other_ok)(const Rgb8&),
                               const char* other_name) {
  const Rgb8 expected = to_rgb8(fill);
  PixelCheck check(std::string("pixels are the fill color or ") + other_name);
  std::size_t background = 0;
  for (int y = 0; y < buf.height; ++y) {
    for (int x = 0; x < buf.width; ++x) {
      const Rgb8 c = pixel(buf, x, y);
      if (c == expected) {
        ++background;
      } else if (!other_ok(c)) {
        check.fail(x, y, c);
      }
    }
  }
  auto result = check.finish("background pixels " + fraction_text(background, buf.rgb.size() / 3));
  if (result.passed && background == 0) {
    result.passed = false;
    result.detail = "no pixel shows the fill color " + show(-1, -1, expected).substr(8);
  }
  return result;
}

// Whether the buffer has the one-pixel-per-grid-point geometry that lets a
// pixel be traced back to the plane point that produced it.
StructureCheck reference_geometry(const Preset& p, const PixelBuffer& buf) {
  const bool ok = buf.width == p.resolution && buf.height == p.resolution;
  return {"reference geometry " + std::to_string(p.resolution) + "x" + std::to_string(p.resolution), ok,
          "buffer is " + std::to_string(buf.width) + "x" + std::to_string(buf.height)};
}

// Escape count of the grid point shown at pixel (x, y), computed exactly as
// the scene computes it.
int grid_escape(const Preset& p, int x, int y) {
  const double re = index_to_coord(x, p.viewport.left, p.viewport.right, p.resolution);
  const double im = index_to_coord(p.resolution - 1 - y, p.viewport.bottom, p.viewport.top, p.resolution);
  return escape_steps(Complexd{re, im}, p.seed, EscapeBudget(p.max_steps));
}

// --- per-preset checks ---------------------------------------------------------

void check_basic(const Preset&, const PixelBuffer& buf, StructureReport& r) {
  const Rgb8 gray = to_rgb8({0.0, 0.0, 0.9});
  PixelCheck check("pixels are black or gray");
  for (int y = 0; y < buf.height; ++y) {
    for (int x = 0; x < buf.width; ++x) {
      const Rgb8 c = pixel(buf, x, y);
      if (c != Rgb8{0, 0, 0} && c != gray) check.fail(x, y, c);
    }
  }
  r.checks.push_back(check.finish("two-tone image"));
  r.checks.push_back(black_fraction(buf));
}

void check_fjords(const Preset&, const PixelBuffer& buf, StructureReport& r) {
  r.checks.push_back(fill_background(buf, {214.0, 0.89, 0.95}, is_gray, "gray"));
}

void check_forest(const Preset&, const PixelBuffer& buf, StructureReport& r) {
  // Quantization to 8 bits perturbs the recovered hue and saturation slightly.
  constexpr double kHueSlack = 2.0;
  constexpr double kSaturationSlack = 0.03;
  PixelCheck hue("pixel hue within [60, 74]");
  PixelCheck sat("pixel saturation within [0.41, 0.66]");
  std::size_t uncovered = 0;
  for (int y = 0; y < buf.height; ++y) {
    for (int x = 0; x < buf.width; ++x) {
      const Rgb8 c = pixel(buf, x, y);
      // Blocks are sampled slightly more coarsely than the square size, so a
      // few background columns and rows stay uncovered.
      if (is_white(c)) {
        ++uncovered;
        continue;
      }
      const auto [h, s] = hue_saturation(c);
      if (h < 60.0 - kHueSlack || h > 74.0 + kHueSlack) hue.fail(x, y, c);
      if (s < 0.41 - kSaturationSlack || s > 0.66 + kSaturationSlack) sat.fail(x, y, c);
    }
  }
  const std::string covered = "painted pixels " + fraction_text(buf.rgb.size() / 3 - uncovered, buf.rgb.size() / 3);
  r.checks.push_back(hue.finish(covered));
  r.checks.push_back(sat.finish(covered));
}

void check_ragnarok(const Preset&, const PixelBuffer& buf, StructureReport& r) {
  PixelCheck check("four-fold mirror symmetry");
  for (int y = 0; y < buf.height; ++y) {
    for (int x = 0; x < buf.width; ++x) {
      const Rgb8 c = pixel(buf, x, y);
      if (c != pixel(buf, buf.width - 1 - x, y) || c != pixel(buf, x, buf.height - 1 - y)) check.fail(x, y, c);
    }
  }
  r.checks.push_back(check.finish("mirrored halves identical"));
  r.checks.push_back(black_fraction(buf));
}

void check_battle(const Preset& p, const PixelBuffer& buf, StructureReport& r) {
  PixelCheck red("pixels are red tints (r = 255, g = b)");
  for (int y = 0; y < buf.height; ++y) {
    for (int x = 0; x < buf.width; ++x) {
      const Rgb8 c = pixel(buf, x, y);
      if (c[0] != 255 || c[1] != c[2]) red.fail(x, y, c);
    }
  }
  r.checks.push_back(red.finish("all pixels"));

  auto geometry = reference_geometry(p, buf);
  if (!geometry.passed) {
    r.checks.push_back(geometry);
    return;
  }
  // Saturation (1 - g/255) must be a non-decreasing function of the escape
  // count: gather the green level seen for each count, then walk the counts.
  PixelCheck monotone("saturation monotone in escape count");
  std::map<int, std::pair<int, int>> green_by_count;  // count -> (min g, max g)
  for (int y = 0; y < buf.height; ++y) {
    for (int x = 0; x < buf.width; ++x) {
      const int n = grid_escape(p, x, y);
      const int g = buf.at(x, y)[1];
      auto [it, fresh] = green_by_count.try_emplace(n, g, g);
      if (!fresh) {
        it->second.first = std::min(it->second.first, g);
        it->second.second = std::max(it->second.second, g);
      }
    }
  }
  int previous_min_green = 256;
  int previous_count = -1;
  for (const auto& [n, range] : green_by_count) {
    if (range.second > previous_min_green) {
      monotone.fail("count " + std::to_string(n) + " has g up to " + std::to_string(range.second) +
                    " above g " + std::to_string(previous_min_green) + " at count " + std::to_string(previous_count));
    }
    previous_min_green = range.first;
    previous_count = n;
  }
  r.checks.push_back(monotone.finish(std::to_string(green_by_count.size()) + " distinct escape counts"));
}

void check_leaves(const Preset&, const PixelBuffer& buf, StructureReport& r) {
  r.checks.push_back(fill_background(
      buf, {214.0, 0.7, 0.95}, [](const Rgb8& c) { return c[0] == 0 && c[2] == 0; }, "pure green"));
}

void check_crucified(const Preset&, const PixelBuffer& buf, StructureReport& r) {
  r.checks.push_back(fill_background(
      buf, {0.0, 1.0, 1.0},
      [](const Rgb8& c) {
        // hue 40, saturation 0.5: r >= g >= b with b = r / 2 up to rounding.
        const int twice_b = 2 * c[2];
        return c[0] >= c[1] && c[1] >= c[2] && std::abs(twice_b - c[0]) <= 1;
      },
      "hue 40 at half saturation"));
}

void check_blood(const Preset& p, const PixelBuffer& buf, StructureReport& r) {
  // Smallest escape count that survives the cull numSteps > PROPORTION*MAXSTEPS.
  const double threshold = (7.0 / 10.0) * p.max_steps;
  int first_kept = static_cast<int>(std::floor(threshold));
  while (!(first_kept > threshold)) ++first_kept;
  const double ramp = static_cast<double>(first_kept - 1) / static_cast<double>(p.max_steps - 1);
  const int max_green = to_rgb8({0.0, ramp, 1.0})[1];
  PixelCheck cull("no square with escape count <= 0.7 N");
  for (int y = 0; y < buf.height; ++y) {
    for (int x = 0; x < buf.width; ++x) {
      const Rgb8 c = pixel(buf, x, y);
      if (is_white(c)) continue;
      if (c[0] != 255 || c[1] != c[2] || c[1] > max_green) cull.fail(x, y, c);
    }
  }
  r.checks.push_back(cull.finish("every painted pixel has g <= " + std::to_string(max_green)));
}

using CheckFn = void (*)(const Preset&, const PixelBuffer&, StructureReport&);

CheckFn checks_for(std::string_view name) {
  if (name == "basic") return check_basic;
  if (name == "fjords") return check_fjords;
  if (name == "forest") return check_forest;
  if (name == "ragnarok") return check_ragnarok;
  if (name == "battle") return check_battle;
  if (name == "leaves") return check_leaves;
  if (name == "crucified") return check_crucified;
  if (name == "blood") return check_blood;
  return nullptr;
}

}  // namespace

std::span<const Preset> presets() {
  static const std::vector<Preset> all = build_presets();
  return all;
}

const Preset& preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  throw SceneError(ErrorKind::Request, "unknown preset '" + std::string(name) + "'");
}

bool StructureReport::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

std::string StructureReport::summary() const {
  std::ostringstream s;
  for (const auto& c : checks) s << (c.passed ? "ok   " : "FAIL ") << preset << ": " << c.name << " (" << c.detail << ")\n";
  return s.str();
}

StructureReport verify_structure(std::string_view name, const PixelBuffer& buffer) {
  const Preset& p = preset(name);
  StructureReport report;
  report.preset = p.name;
  if (buffer.width < 1 || buffer.height < 1) {
    report.checks.push_back({"non-empty buffer", false, "buffer has no pixels"});
    return report;
  }
  checks_for(p.name)(p, buffer, report);
  return report;
}

}  // namespace juliart
