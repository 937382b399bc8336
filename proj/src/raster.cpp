#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "juliart/render.hpp"

namespace juliart {

namespace {

using Affine = Eigen::Transform<double, 2, Eigen::AffineCompact>;

// A square ready for painting: the image-to-local map and the pixel rectangle
// that can contain its samples.
struct PreparedSquare {
  Eigen::Matrix<double, 2, 3> image_to_local;
  int x0, x1, y0, y1;  // inclusive
  std::array<std::uint8_t, 3> rgb;
  bool fill;
};

template <typename Fn>
void parallel_ranges(std::size_t n, unsigned workers, Fn&& fn) {
  const std::size_t parts = std::max<std::size_t>(1, std::min<std::size_t>(workers, n));
  if (parts == 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(parts);
  for (std::size_t p = 0; p < parts; ++p) {
    threads.emplace_back([&fn, p, parts, n] { fn(n * p / parts, n * (p + 1) / parts); });
  }
  for (auto& t : threads) t.join();
}

}  // namespace

PixelBuffer::PixelBuffer(int w, int h)
    : width(w), height(h), rgb(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3, 255) {}

std::array<std::uint8_t, 3> to_rgb8(const HsvColor& c) {
  const RgbColor rgb = hsv_to_rgb(c);
  auto channel = [](double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
  };
  return {channel(rgb.r), channel(rgb.g), channel(rgb.b)};
}

PixelBuffer rasterize(std::span<const Primitive> prims, int size, int border, unsigned workers) {
  if (size < 1 || border < 0 || size <= 2 * border) {
    throw SceneError(ErrorKind::Render, "image size " + std::to_string(size) + " must exceed twice the border " +
                                            std::to_string(border));
  }
  PixelBuffer buf(size, size);

  // Everything before the last fill is painted over, so start there.
  std::size_t first = 0;
  for (std::size_t i = prims.size(); i-- > 0;) {
    if (prims[i].kind == PrimitiveKind::Fill) {
      first = i;
      break;
    }
  }

  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  for (const auto& p : prims) {
    if (p.kind != PrimitiveKind::Square) continue;
    for (double u : {-0.5, 0.5}) {
      for (double v : {-0.5, 0.5}) {
        const auto q = p.transform.apply(u, v);
        min_x = std::min(min_x, q.x());
        max_x = std::max(max_x, q.x());
        min_y = std::min(min_y, q.y());
        max_y = std::max(max_y, q.y());
      }
    }
  }

  Affine world_to_image = Affine::Identity();
  if (min_x <= max_x) {
    const double extent = std::max(max_x - min_x, max_y - min_y);
    const double scale = extent > 0.0 ? static_cast<double>(size - 2 * border) / extent : 1.0;
    const double cx = (min_x + max_x) / 2.0;
    const double cy = (min_y + max_y) / 2.0;
    const double half = static_cast<double>(size) / 2.0;
    world_to_image.linear() << scale, 0.0, 0.0, -scale;
    world_to_image.translation() << half - scale * cx, half + scale * cy;
  }
  buf.world_to_image = world_to_image;

  const std::size_t count = prims.size() - first;
  std::vector<PreparedSquare> prepared(count);
  parallel_ranges(count, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Primitive& p = prims[first + i];
      PreparedSquare& out = prepared[i];
      out.rgb = to_rgb8(p.color);
      out.fill = p.kind == PrimitiveKind::Fill;
      if (out.fill) continue;
      const Affine to_image(world_to_image * p.transform.affine());
      out.image_to_local = Affine(to_image.inverse(Eigen::Affine)).matrix();
      double lo_x = std::numeric_limits<double>::infinity();
      double lo_y = lo_x;
      double hi_x = -lo_x;
      double hi_y = -lo_x;
      for (double u : {-0.5, 0.5}) {
        for (double v : {-0.5, 0.5}) {
          const Eigen::Vector2d q = to_image * Eigen::Vector2d(u, v);
          lo_x = std::min(lo_x, q.x());
          hi_x = std::max(hi_x, q.x());
          lo_y = std::min(lo_y, q.y());
          hi_y = std::max(hi_y, q.y());
        }
      }
      // Pixel centers sit at k + 0.5. The rectangle is conservative; the
      // inside test below has the final say.
      auto clip = [size](double v) {
        return static_cast<int>(std::clamp(v, -1.0, static_cast<double>(size)));
      };
      out.x0 = std::max(0, clip(std::floor(lo_x - 0.5)));
      out.x1 = std::min(size - 1, clip(std::ceil(hi_x - 0.5)));
      out.y0 = std::max(0, clip(std::floor(lo_y - 0.5)));
      out.y1 = std::min(size - 1, clip(std::ceil(hi_y - 0.5)));
    }
  });

  parallel_ranges(static_cast<std::size_t>(size), workers, [&](std::size_t row_begin, std::size_t row_end) {
    const int r0 = static_cast<int>(row_begin);
    const int r1 = static_cast<int>(row_end) - 1;
    for (const PreparedSquare& sq : prepared) {
      if (sq.fill) {
        for (int y = r0; y <= r1; ++y) {
          for (int x = 0; x < size; ++x) std::copy(sq.rgb.begin(), sq.rgb.end(), buf.at(x, y));
        }
        continue;
      }
      const int y0 = std::max(sq.y0, r0);
      const int y1 = std::min(sq.y1, r1);
      const auto& m = sq.image_to_local;
      for (int y = y0; y <= y1; ++y) {
        const double py = y + 0.5;
        for (int x = sq.x0; x <= sq.x1; ++x) {
          const double px = x + 0.5;
          const double u = m(0, 0) * px + m(0, 1) * py + m(0, 2);
          const double v = m(1, 0) * px + m(1, 1) * py + m(1, 2);
          if (u >= -0.5 && u < 0.5 && v >= -0.5 && v < 0.5) std::copy(sq.rgb.begin(), sq.rgb.end(), buf.at(x, y));
        }
      }
    }
  });
  return buf;
}

}  // namespace juliart
