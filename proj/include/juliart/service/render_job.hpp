#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "juliart/render.hpp"

namespace juliart::service {

constexpr int kDefaultSize = 1000;
constexpr int kMaxSize = 8192;

struct RenderRequest {
  std::optional<std::string> source;
  std::optional<std::string> preset;
  int size = kDefaultSize;
  int border = 0;
  // Unset means the preset's own tag, or "" for a raw source.
  std::optional<std::string> variation;

  /// Throws SceneError(Request) unless exactly one of source/preset is set,
  /// 2 <= size <= kMaxSize, border >= 0 and size > 2 * border.
  void validate() const;
};

struct RenderTimings {
  double parse = 0.0;
  double evaluate = 0.0;
  double rasterize = 0.0;
  double encode = 0.0;

  double total() const { return parse + evaluate + rasterize + encode; }
};

struct RenderResponse {
  std::vector<std::uint8_t> png;
  int width = 0;
  int height = 0;
  RenderTimings timings;
  std::uint64_t primitives = 0;
  std::uint64_t escape_iterations = 0;
};

struct RenderSettings {
  RenderLimits limits;
  unsigned workers = 1;
};

/// The whole pipeline: parse, evaluate, rasterize, encode. Both the command
/// line and the HTTP endpoint go through here, so equal requests give equal
/// bytes.
RenderResponse render(const RenderRequest& request, const RenderSettings& settings = {});

/// Same, stopping before the PNG encoder.
PixelBuffer render_pixels(const RenderRequest& request, const RenderSettings& settings,
                          RenderResponse* stats = nullptr);

}  // namespace juliart::service
