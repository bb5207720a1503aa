#include "pseudocam/rotation.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <stdexcept>

namespace pseudocam {

namespace {

// Scalar coefficients of the Rodrigues form R = I + a [w]x + b [w]x^2 and the
// derivative helpers c1 = a'(t)/t, c2 = b'(t)/t. All four have removable
// singularities at t = 0; below the switch point the Taylor expansions are
// accurate to full double precision.
constexpr double kSeriesThreshold = 1e-4;

double coeff_a(double t) {
  if (t < kSeriesThreshold) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sin(t) / t;
}

double coeff_b(double t) {
  if (t < kSeriesThreshold) {
    const double t2 = t * t;
    return 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
  }
  return (1.0 - std::cos(t)) / (t * t);
}

double coeff_c1(double t) {
  if (t < kSeriesThreshold) {
    const double t2 = t * t;
    return -1.0 / 3.0 + t2 / 30.0 - t2 * t2 / 840.0;
  }
  return (t * std::cos(t) - std::sin(t)) / (t * t * t);
}

double coeff_c2(double t) {
  if (t < kSeriesThreshold) {
    const double t2 = t * t;
    return -1.0 / 12.0 + t2 / 180.0 - t2 * t2 / 6720.0;
  }
  return (t * std::sin(t) - 2.0 * (1.0 - std::cos(t))) / (t * t * t * t);
}

Mat3 cross_matrix(const Vec3& w) {
  Mat3 m;
  m << 0.0, -w.z(), w.y(), w.z(), 0.0, -w.x(), -w.y(), w.x(), 0.0;
  return m;
}

}  // namespace

Mat3 rotation_matrix(const Vec3& axis_angle) {
  const double t = axis_angle.norm();
  const Mat3 k = cross_matrix(axis_angle);
  return Mat3::Identity() + coeff_a(t) * k + coeff_b(t) * (k * k);
}

Mat3 rotate_point_jacobian(const Vec3& w, const Vec3& p) {
  const double t = w.norm();
  const double a = coeff_a(t);
  const double b = coeff_b(t);
  const double c1 = coeff_c1(t);
  const double c2 = coeff_c2(t);

  const Vec3 wxp = w.cross(p);
  const double wdp = w.dot(p);
  const Vec3 wwp = w * wdp - (t * t) * p;  // [w]x^2 p

  Mat3 jac;
  for (int j = 0; j < 3; ++j) {
    Vec3 ej = Vec3::Zero();
    ej[j] = 1.0;
    jac.col(j) = c1 * w[j] * wxp + a * ej.cross(p) + c2 * w[j] * wwp +
                 b * (ej * wdp + w * p[j] - 2.0 * w[j] * p);
  }
  return jac;
}

Mat3 Rotation::matrix() const { return rotation_matrix(axis_angle); }

void Rotation::validate() const {
  if (!axis_angle.allFinite()) {
    throw std::invalid_argument("rotation axis_angle has non-finite components");
  }
  constexpr double kPi = 3.14159265358979323846;
  if (axis_angle.norm() >= kPi + 1e-6) {
    throw std::invalid_argument("rotation angle exceeds pi: axis-angle not in first cover");
  }
}

}  // namespace pseudocam
