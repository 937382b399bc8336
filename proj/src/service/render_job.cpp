#include "juliart/service/render_job.hpp"

#include <chrono>

#include "juliart/gallery.hpp"
#include "juliart/png.hpp"
#include "juliart/scene/parser.hpp"

namespace juliart::service {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

void RenderRequest::validate() const {
  if (source.has_value() == preset.has_value()) {
    throw SceneError(ErrorKind::Request, "exactly one of 'source' and 'preset' must be given");
  }
  if (size < 2 || size > kMaxSize) {
    throw SceneError(ErrorKind::Request, "size must lie in [2, " + std::to_string(kMaxSize) + "], got " +
                                             std::to_string(size));
  }
  if (border < 0) throw SceneError(ErrorKind::Request, "border must be non-negative");
  if (size <= 2 * border) {
    throw SceneError(ErrorKind::Request, "size " + std::to_string(size) + " leaves no room inside a border of " +
                                             std::to_string(border));
  }
}

PixelBuffer render_pixels(const RenderRequest& request, const RenderSettings& settings, RenderResponse* stats) {
  request.validate();
  RenderResponse local;
  RenderResponse& out = stats ? *stats : local;

  std::string_view text;
  std::string tag;
  if (request.preset) {
    const Preset& p = preset(*request.preset);
    text = p.source;
    tag = request.variation.value_or(p.variation);
  } else {
    text = *request.source;
    tag = request.variation.value_or("");
  }

  auto start = Clock::now();
  const scene::SceneProgram program = scene::load_scene(text);
  out.timings.parse = seconds_since(start);

  start = Clock::now();
  EvaluationOptions options;
  options.limits = settings.limits;
  options.workers = settings.workers;
  const Evaluation evaluation = evaluate_scene(program, VariationSeed(tag), options);
  out.timings.evaluate = seconds_since(start);
  out.primitives = evaluation.primitives.size();
  out.escape_iterations = evaluation.escape_iterations;

  start = Clock::now();
  PixelBuffer buffer = rasterize(evaluation.primitives, request.size, request.border, settings.workers);
  out.timings.rasterize = seconds_since(start);
  out.width = buffer.width;
  out.height = buffer.height;
  return buffer;
}

RenderResponse render(const RenderRequest& request, const RenderSettings& settings) {
  RenderResponse out;
  const PixelBuffer buffer = render_pixels(request, settings, &out);
  const auto start = Clock::now();
  out.png = encode_png(buffer);
  out.timings.encode = seconds_since(start);
  return out;
}

}  // namespace juliart::service
