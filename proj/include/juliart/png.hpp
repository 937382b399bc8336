#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "juliart/render.hpp"

namespace juliart {

/// 8-bit RGB PNG with filter type 0 on every row and zlib level 6, so equal
/// buffers always give equal bytes.
std::vector<std::uint8_t> encode_png(const PixelBuffer& buf);

/// Writes bytes to `path`; throws SceneError(Io) on failure.
void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

/// Reads a whole text file; throws SceneError(Io) if it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace juliart
