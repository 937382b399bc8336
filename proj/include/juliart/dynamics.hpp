#pragma once

#include <stdexcept>
#include <utility>

namespace juliart {

/// A point of the complex plane. Used both for the iterated state z and for
/// the seed c of the quadratic family.
template <typename Scalar>
struct Complex {
  Scalar re{};
  Scalar im{};

  friend constexpr bool operator==(const Complex&, const Complex&) = default;
};

using Complexd = Complex<double>;

template <typename Scalar>
constexpr Complex<Scalar> conj(Complex<Scalar> z) {
  return {z.re, -z.im};
}

template <typename Scalar>
constexpr Scalar norm2(Complex<Scalar> z) {
  return z.re * z.re + z.im * z.im;
}

/// Axis-aligned rectangle of the plane that gets discretized into pixels.
template <typename Scalar>
struct Viewport {
  Scalar left{};
  Scalar right{};
  Scalar bottom{};
  Scalar top{};

  static Viewport bounds(Scalar left, Scalar right, Scalar bottom, Scalar top) {
    if (!(left < right) || !(bottom < top)) {
      throw std::invalid_argument("viewport requires left < right and bottom < top");
    }
    return {left, right, bottom, top};
  }

  // Square viewport around a center point, as in "CX - SIDE/2".
  static Viewport centered(Scalar cx, Scalar cy, Scalar side) {
    return bounds(cx - side / 2, cx + side / 2, cy - side / 2, cy + side / 2);
  }

  Scalar width() const { return right - left; }
  Scalar height() const { return top - bottom; }

  friend constexpr bool operator==(const Viewport&, const Viewport&) = default;
};

using Viewportd = Viewport<double>;

/// Iteration bound N: a point whose orbit survives max_steps iterations is
/// classified as belonging to the set.
class EscapeBudget {
 public:
  explicit EscapeBudget(int max_steps) : max_steps_(max_steps) {
    if (max_steps < 1) {
      throw std::invalid_argument("escape budget requires max_steps >= 1");
    }
  }
  int max_steps() const { return max_steps_; }

 private:
  int max_steps_;
};

/// f_c(z) = z^2 + c, with the operation order of the scene-language
/// recursion: re = zr*zr - zi*zi + cr, im = 2*zr*zi + ci.
template <typename Scalar>
constexpr Complex<Scalar> quad_step(Complex<Scalar> z, Complex<Scalar> c) {
  return {z.re * z.re - z.im * z.im + c.re, Scalar(2) * z.re * z.im + c.im};
}

/// Smallest k in [0, max_steps] with k == max_steps or |z_k|^2 >= 4.
/// A non-finite iterate fails the `< 4` test and therefore counts as escaped.
template <typename Scalar>
int escape_steps(Complex<Scalar> z0, Complex<Scalar> c, EscapeBudget budget) {
  const int limit = budget.max_steps();
  Complex<Scalar> z = z0;
  int k = 0;
  while (k < limit && norm2(z) < Scalar(4)) {
    z = quad_step(z, c);
    ++k;
  }
  return k;
}

/// Grid index to plane coordinate: (hi - lo) * i / (resolution - 1) + lo.
template <typename Scalar>
Scalar index_to_coord(int i, Scalar lo, Scalar hi, int resolution) {
  if (resolution < 2) {
    throw std::invalid_argument("index_to_coord requires resolution >= 2");
  }
  return (hi - lo) * Scalar(i) / Scalar(resolution - 1) + lo;
}

/// World size of one grid cell: the SIZEX/SIZEY of the scene files.
template <typename Scalar>
std::pair<Scalar, Scalar> cell_size(const Viewport<Scalar>& v, int resolution) {
  if (resolution < 2) {
    throw std::invalid_argument("cell_size requires resolution >= 2");
  }
  const Scalar steps = Scalar(resolution - 1);
  return {(v.right - v.left) / steps, (v.top - v.bottom) / steps};
}

}  // namespace juliart
