#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Geometry>

#include "juliart/color.hpp"
#include "juliart/random.hpp"
#include "juliart/scene/ast.hpp"
#include "juliart/scene/machine.hpp"
#include "juliart/transform.hpp"

namespace juliart {

enum class PrimitiveKind { Square, Fill };

/// One emitted shape. A square is the unit square centered at the origin of
/// its transform; a fill carries only a color and covers the whole canvas.
struct Primitive {
  PrimitiveKind kind = PrimitiveKind::Square;
  Transform2Dd transform;
  HsvColor color;
  std::uint64_t index = 0;  // emission (painter) order
};

struct RenderLimits {
  std::uint64_t max_primitives = 100'000'000;
  std::uint64_t max_escape_iterations = 1'000'000'000;
  std::uint64_t max_loop_iterations = 1'000'000'000;
  std::uint32_t max_shape_depth = 4096;
  std::uint32_t max_recursion_depth = scene::Machine::kDefaultMaxDepth;
};

struct EvaluationOptions {
  RenderLimits limits;
  unsigned workers = 1;
  /// Records every rand() draw in evaluation order. Forces one worker.
  std::vector<scene::RandomDraw>* trace = nullptr;
  /// Run recognized escape-time functions natively. Turning this off executes
  /// them instruction by instruction with identical results.
  bool native_idioms = true;
};

struct Evaluation {
  std::vector<Primitive> primitives;
  std::uint64_t escape_iterations = 0;  // user-function invocations
};

/// Runs the start shape and returns the primitives in depth-first source
/// order. Loop iterations may be spread over `workers` threads; the result is
/// identical for every worker count. Errors surface as SceneError with the
/// shape-call trace attached.
Evaluation evaluate_scene(const scene::SceneProgram& program, const VariationSeed& variation,
                          const EvaluationOptions& options = {});

/// Row-major 8-bit RGB image together with the world-to-image mapping that
/// produced it (image y grows downward).
struct PixelBuffer {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;
  Eigen::Transform<double, 2, Eigen::AffineCompact> world_to_image =
      Eigen::Transform<double, 2, Eigen::AffineCompact>::Identity();

  PixelBuffer() = default;
  PixelBuffer(int w, int h);

  std::uint8_t* at(int x, int y) { return rgb.data() + 3 * (static_cast<std::size_t>(y) * width + x); }
  const std::uint8_t* at(int x, int y) const {
    return rgb.data() + 3 * (static_cast<std::size_t>(y) * width + x);
  }
  bool operator==(const PixelBuffer& other) const {
    return width == other.width && height == other.height && rgb == other.rgb;
  }
};

/// 8-bit rendition of a color, rounding each channel to nearest.
std::array<std::uint8_t, 3> to_rgb8(const HsvColor& c);

/// Paints `prims` in emission order onto a size x size canvas framing the
/// bounding box of the squares with a `border` pixel margin. Pixels are
/// point-sampled at their centers. Throws SceneError(Render) if
/// size <= 2 * border or size < 1.
PixelBuffer rasterize(std::span<const Primitive> prims, int size, int border, unsigned workers = 1);

/// Worker count from JULIART_WORKERS, else the hardware concurrency.
unsigned default_workers();

}  // namespace juliart
