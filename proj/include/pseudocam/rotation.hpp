#pragma once

#include "pseudocam/types.hpp"

namespace pseudocam {

/// Rotation stored as an axis-angle vector (direction = axis, norm = angle in
/// radians). The representation is kept in the first rotation cover:
/// ||axis_angle|| must stay below pi + 1e-6.
struct Rotation {
  Vec3 axis_angle{0.0, 0.0, 0.0};

  Mat3 matrix() const;

  /// Throws std::invalid_argument when the angle leaves the covered range or
  /// any component is non-finite.
  void validate() const;
};

/// Rodrigues rotation matrix for an axis-angle vector, series-stabilised near
/// zero angle.
Mat3 rotation_matrix(const Vec3& axis_angle);

/// d(R(w) p) / dw as a 3x3 matrix whose column j is the derivative with
/// respect to w_j. Exact analytic form (series-stabilised near w = 0, where it
/// reduces to -[p]x).
Mat3 rotate_point_jacobian(const Vec3& axis_angle, const Vec3& p);

}  // namespace pseudocam
