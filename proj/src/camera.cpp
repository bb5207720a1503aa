#include "pseudocam/camera.hpp"

#include <cmath>
#include <stdexcept>

namespace pseudocam {

void CaptureGeometry::validate() const {
  const auto positive = [](double x, const char* name) {
    if (!std::isfinite(x) || x <= 0.0) {
      throw std::invalid_argument(std::string(name) + " must be finite and positive");
    }
  };
  positive(sensor_width, "sensor_width");
  positive(face_width, "face_width");
  positive(standoff, "standoff");
  positive(frame_fill, "frame_fill");
  if (frame_fill > 1.0) throw std::invalid_argument("frame_fill must be at most 1");
}

void PerspectiveCamera::validate() const {
  rotation.validate();
  if (!translation.allFinite()) throw std::invalid_argument("translation must be finite");
  if (!std::isfinite(focal) || focal <= 0.0) throw std::invalid_argument("focal must be positive");
}

void OrthographicCamera::validate() const {
  rotation.validate();
  if (!translation.allFinite()) throw std::invalid_argument("translation must be finite");
  if (!std::isfinite(scale) || scale <= 0.0) throw std::invalid_argument("scale must be positive");
}

void PseudoPerspectiveCamera::validate() const {
  rotation.validate();
  if (!translation.allFinite()) throw std::invalid_argument("translation must be finite");
  if (!std::isfinite(scale) || scale <= 0.0) throw std::invalid_argument("scale must be positive");
  if (!std::isfinite(rho) || rho < 0.0) throw std::invalid_argument("rho must be non-negative");
}

std::vector<Vec3> transform(const Rotation& rotation, const Vec3& translation,
                            const std::vector<Vec3>& points) {
  const Mat3 r = rotation.matrix();
  std::vector<Vec3> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = r * points[i] + translation;
  return out;
}

Projected2D project_point_perspective(double focal, const Vec3& v, int index) {
  if (v.z() <= kDepthEpsilon) throw DegenerateDepthError(index, v.z());
  Projected2D p;
  const double inv_z = 1.0 / v.z();
  p.uv = Vec2(focal * v.x() * inv_z, focal * v.y() * inv_z);
  p.d_v << focal * inv_z, 0.0, -focal * v.x() * inv_z * inv_z,  //
      0.0, focal * inv_z, -focal * v.y() * inv_z * inv_z;
  p.d_scale_or_focal = Vec2(v.x() * inv_z, v.y() * inv_z);
  p.d_rho.setZero();
  return p;
}

Projected2D project_point_orthographic(double scale, const Vec3& v, int /*index*/) {
  Projected2D p;
  p.uv = Vec2(scale * v.x(), scale * v.y());
  p.d_v << scale, 0.0, 0.0,  //
      0.0, scale, 0.0;
  p.d_scale_or_focal = Vec2(v.x(), v.y());
  p.d_rho.setZero();
  return p;
}

Projected2D project_point_pseudo(double scale, double rho, const Vec3& v, int index) {
  const double denom = 1.0 + rho * v.z();
  if (denom <= kDenomEpsilon) throw ShrinkageSingularityError(index, v.z());
  Projected2D p;
  // Written so that rho = 0 gives denom = 1 exactly and the division is a
  // bitwise no-op: the orthographic output is reproduced bit for bit.
  p.uv = Vec2((scale * v.x()) / denom, (scale * v.y()) / denom);
  const double inv_d = 1.0 / denom;
  const double inv_d2 = inv_d * inv_d;
  p.d_v << scale * inv_d, 0.0, -scale * v.x() * rho * inv_d2,  //
      0.0, scale * inv_d, -scale * v.y() * rho * inv_d2;
  p.d_scale_or_focal = Vec2(v.x() * inv_d, v.y() * inv_d);
  p.d_rho = Vec2(-scale * v.x() * v.z() * inv_d2, -scale * v.y() * v.z() * inv_d2);
  return p;
}

std::vector<Vec2> project_perspective(const PerspectiveCamera& cam,
                                      const std::vector<Vec3>& points) {
  const std::vector<Vec3> v = transform(cam.rotation, cam.translation, points);
  std::vector<Vec2> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = project_point_perspective(cam.focal, v[i], static_cast<int>(i)).uv;
  }
  return out;
}

std::vector<Vec2> project_orthographic(const OrthographicCamera& cam,
                                       const std::vector<Vec3>& points) {
  const Vec3 t(cam.translation.x(), cam.translation.y(), 0.0);
  const std::vector<Vec3> v = transform(cam.rotation, t, points);
  std::vector<Vec2> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = project_point_orthographic(cam.scale, v[i], static_cast<int>(i)).uv;
  }
  return out;
}

std::vector<Vec2> project_pseudo(const PseudoPerspectiveCamera& cam,
                                 const std::vector<Vec3>& points) {
  const Vec3 t(cam.translation.x(), cam.translation.y(), 0.0);  // t_z forced to 0
  const std::vector<Vec3> v = transform(cam.rotation, t, points);
  std::vector<Vec2> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = project_point_pseudo(cam.scale, cam.rho, v[i], static_cast<int>(i)).uv;
  }
  return out;
}

double rho_from_perspective(double S, double f, double v_z) {
  if (!std::isfinite(S) || !std::isfinite(f) || f <= 0.0) {
    throw std::invalid_argument("rho_from_perspective requires finite S and positive f");
  }
  if (!std::isfinite(v_z) || std::abs(v_z) <= kDepthEpsilon) {
    throw DegenerateDepthError(-1, v_z);
  }
  return S / f - 1.0 / v_z;
}

double focal_from_geometry(const CaptureGeometry& geometry) {
  geometry.validate();
  return geometry.sensor_width * geometry.standoff * geometry.frame_fill / geometry.face_width;
}

double rho_prior_analytic(const CaptureGeometry& geometry) {
  return rho_from_perspective(1.0, focal_from_geometry(geometry), geometry.standoff);
}

namespace {

// Shared assembly: caller supplies the per-point projection primitive, the
// number of camera parameters, and how scalar-parameter columns are laid out.
template <typename ProjectFn>
ProjectionJacobian assemble_jacobian(const Rotation& rotation, const Vec3& translation,
                                     const std::vector<Vec3>& points, int n_params,
                                     bool has_tz_column, ProjectFn project) {
  const int n = static_cast<int>(points.size());
  const Mat3 r = rotation.matrix();
  ProjectionJacobian jac;
  jac.d_params = JacobianBlock::Zero(2 * n, n_params);
  jac.d_points = JacobianBlock::Zero(2 * n, 3 * n);

  for (int i = 0; i < n; ++i) {
    const Vec3 v = r * points[i] + translation;
    const Projected2D p = project(v, i);
    const Mat3 d_rot = rotate_point_jacobian(rotation.axis_angle, points[i]);

    jac.d_params.block<2, 3>(2 * i, 0) = p.d_v * d_rot;     // axis-angle
    jac.d_params.block<2, 2>(2 * i, 3) = p.d_v.leftCols(2);  // t_x, t_y
    int col = 5;
    if (has_tz_column) jac.d_params.block<2, 1>(2 * i, col++) = p.d_v.col(2);
    jac.d_params.block<2, 1>(2 * i, col++) = p.d_scale_or_focal;
    if (col < n_params) jac.d_params.block<2, 1>(2 * i, col) = p.d_rho;

    jac.d_points.block<2, 3>(2 * i, 3 * i) = p.d_v * r;
  }
  return jac;
}

}  // namespace

ProjectionJacobian projection_jacobian(const PerspectiveCamera& cam,
                                       const std::vector<Vec3>& points) {
  return assemble_jacobian(
      cam.rotation, cam.translation, points, 7, /*has_tz_column=*/true,
      [&](const Vec3& v, int i) { return project_point_perspective(cam.focal, v, i); });
}

ProjectionJacobian projection_jacobian(const OrthographicCamera& cam,
                                       const std::vector<Vec3>& points) {
  const Vec3 t(cam.translation.x(), cam.translation.y(), 0.0);
  return assemble_jacobian(
      cam.rotation, t, points, 6, /*has_tz_column=*/false,
      [&](const Vec3& v, int i) { return project_point_orthographic(cam.scale, v, i); });
}

ProjectionJacobian projection_jacobian(const PseudoPerspectiveCamera& cam,
                                       const std::vector<Vec3>& points) {
  const Vec3 t(cam.translation.x(), cam.translation.y(), 0.0);
  return assemble_jacobian(
      cam.rotation, t, points, 7, /*has_tz_column=*/false,
      [&](const Vec3& v, int i) { return project_point_pseudo(cam.scale, cam.rho, v, i); });
}

}  // namespace pseudocam
