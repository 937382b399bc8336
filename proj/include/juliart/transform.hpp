#pragma once

#include <cmath>
#include <optional>
#include <span>

#include <Eigen/Geometry>

#include "juliart/color.hpp"
#include "juliart/scene/ast.hpp"

namespace juliart {

/// 2x3 affine map. Every modifier acts in the local frame, i.e. it is applied
/// to the right of the current matrix.
template <typename Scalar>
class Transform2D {
 public:
  using Affine = Eigen::Transform<Scalar, 2, Eigen::AffineCompact>;
  using Vector = Eigen::Matrix<Scalar, 2, 1>;
  using Linear = Eigen::Matrix<Scalar, 2, 2>;

  Transform2D() : m_(Affine::Identity()) {}
  explicit Transform2D(const Affine& m) : m_(m) {}

  static Transform2D identity() { return Transform2D(); }

  Transform2D& translate(Scalar dx, Scalar dy) {
    m_.translate(Vector(dx, dy));
    return *this;
  }

  /// Counter-clockwise by `degrees`. Multiples of 90 use exact sines and
  /// cosines so that mirrored layouts stay bit-exact.
  Transform2D& rotate(Scalar degrees) {
    m_.linear() = m_.linear() * rotation(degrees);
    return *this;
  }

  Transform2D& scale(Scalar sx, Scalar sy) {
    m_.scale(Vector(sx, sy));
    return *this;
  }

  Vector operator()(const Vector& p) const { return m_ * p; }
  Vector apply(Scalar x, Scalar y) const { return m_ * Vector(x, y); }

  Transform2D operator*(const Transform2D& rhs) const { return Transform2D(Affine(m_ * rhs.m_)); }
  Transform2D inverse() const { return Transform2D(Affine(m_.inverse(Eigen::Affine))); }

  Scalar determinant() const { return m_.linear().determinant(); }
  Vector translation() const { return m_.translation(); }
  Linear linear() const { return m_.linear(); }
  const Affine& affine() const { return m_; }

  static Linear rotation(Scalar degrees) {
    Scalar turn = std::fmod(degrees, Scalar(360));
    if (turn < 0) turn += Scalar(360);
    Scalar c;
    Scalar s;
    if (turn == 0) {
      c = 1, s = 0;
    } else if (turn == 90) {
      c = 0, s = 1;
    } else if (turn == 180) {
      c = -1, s = 0;
    } else if (turn == 270) {
      c = 0, s = -1;
    } else {
      const Scalar rad = degrees * Scalar(EIGEN_PI) / Scalar(180);
      c = std::cos(rad);
      s = std::sin(rad);
    }
    Linear r;
    r << c, -s, s, c;
    return r;
  }

 private:
  Affine m_;
};

using Transform2Dd = Transform2D<double>;

/// One evaluated adjustment: the kind and its one or two numeric values.
struct AdjustmentValue {
  scene::AdjustmentKind kind = scene::AdjustmentKind::X;
  double first = 0.0;
  std::optional<double> second;
};

/// Geometry and color in effect at a point of shape evaluation.
struct DrawState {
  Transform2Dd transform;
  HsvColor color;
};

/// Applies `adjs` left to right: geometry in the local frame established by
/// the adjustments before it, color through apply_adjustment.
DrawState compose_adjustments(const DrawState& parent, std::span<const AdjustmentValue> adjs);

inline DrawState compose_adjustments(const Transform2Dd& parent, const HsvColor& parent_color,
                                     std::span<const AdjustmentValue> adjs) {
  return compose_adjustments(DrawState{parent, parent_color}, adjs);
}

}  // namespace juliart
