#pragma once

#include <png.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "juliart/gallery.hpp"
#include "juliart/render.hpp"
#include "juliart/scene/parser.hpp"

namespace juliart::testing {

struct DecodedImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;
};

// Independent decoder for checking the encoder's output.
inline DecodedImage decode_png(const std::uint8_t* data, std::size_t size) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, data, size)) {
    throw std::runtime_error(std::string("libpng: ") + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  DecodedImage out;
  out.width = static_cast<int>(image.width);
  out.height = static_cast<int>(image.height);
  out.rgb.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, out.rgb.data(), 0, nullptr)) {
    throw std::runtime_error(std::string("libpng: ") + image.message);
  }
  return out;
}

inline DecodedImage decode_png(const std::vector<std::uint8_t>& bytes) { return decode_png(bytes.data(), bytes.size()); }

inline DecodedImage decode_png(const std::string& bytes) {
  return decode_png(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size());
}

inline scene::SceneProgram preset_program(std::string_view name) { return scene::load_scene(preset(name).source); }

inline Evaluation evaluate_preset(std::string_view name, unsigned workers = 1) {
  EvaluationOptions options;
  options.workers = workers;
  return evaluate_scene(preset_program(name), VariationSeed(preset(name).variation), options);
}

inline PixelBuffer render_preset(std::string_view name, unsigned workers = 1) {
  const Preset& p = preset(name);
  const Evaluation ev = evaluate_preset(name, workers);
  return rasterize(ev.primitives, p.resolution, 0, workers);
}

}  // namespace juliart::testing
