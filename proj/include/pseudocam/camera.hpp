#pragma once

#include "pseudocam/rotation.hpp"
#include "pseudocam/types.hpp"

#include <vector>

namespace pseudocam {

/// Physical capture description used to derive focal length and the analytic
/// shrinkage prior. All lengths in centimetres; frame_fill is the fraction of
/// the frame width the face is expected to occupy.
struct CaptureGeometry {
  double sensor_width = 0.455;  // 1/2.3" sensor
  double face_width = 15.0;
  double standoff = 15.0;  // camera-to-face distance v_z
  double frame_fill = 0.5;

  void validate() const;
};

/// Pinhole camera: (u, v) = f * (v_x, v_y) / v_z on v = R q + t.
struct PerspectiveCamera {
  Rotation rotation;
  Vec3 translation{0.0, 0.0, 0.0};
  double focal = 1.0;

  void validate() const;
};

/// Scaled orthographic camera: (u, v) = S * (v_x, v_y). Depth never enters,
/// so only the x/y translation is stored.
struct OrthographicCamera {
  Rotation rotation;
  Vec2 translation{0.0, 0.0};
  double scale = 1.0;

  void validate() const;
};

/// Orthographic projection extended with a depth shrinkage term:
///   (u, v) = S * (v_x, v_y) / (1 + rho * v_z)
/// evaluated on v = R q + (t_x, t_y, 0); the z translation is forced to zero,
/// so v_z carries only the object's own depth relief. rho = 0 degenerates
/// exactly to the orthographic camera.
struct PseudoPerspectiveCamera {
  Rotation rotation;
  Vec2 translation{0.0, 0.0};
  double scale = 1.0;
  double rho = 0.0;  // >= 0; negative values exist only as raw conversion output

  void validate() const;
};

/// v_i = R q_i + t for every point.
std::vector<Vec3> transform(const Rotation& rotation, const Vec3& translation,
                            const std::vector<Vec3>& points);

/// Throws DegenerateDepthError (with the point index) when any transformed
/// depth falls at or below kDepthEpsilon.
std::vector<Vec2> project_perspective(const PerspectiveCamera& cam,
                                      const std::vector<Vec3>& points);

std::vector<Vec2> project_orthographic(const OrthographicCamera& cam,
                                       const std::vector<Vec3>& points);

/// Throws ShrinkageSingularityError (with point index and v_z) when
/// 1 + rho * v_z falls at or below kDenomEpsilon.
std::vector<Vec2> project_pseudo(const PseudoPerspectiveCamera& cam,
                                 const std::vector<Vec3>& points);

/// Shrinkage value that reproduces a pinhole with focal f at depth v_z for an
/// image scale S: rho = S / f - 1 / v_z. May return negative values; the
/// camera type itself only accepts rho >= 0.
double rho_from_perspective(double S, double f, double v_z);

/// Focal length implied by the capture geometry:
///   f = sensor_width * standoff * frame_fill / face_width.
double focal_from_geometry(const CaptureGeometry& geometry);

/// Analytic shrinkage prior at unit scale: rho_from_perspective(1, f, standoff)
/// with f = focal_from_geometry(geometry).
double rho_prior_analytic(const CaptureGeometry& geometry);

/// Projection value together with every partial derivative the fitter needs,
/// for one point. d_v is the derivative in the transformed (camera-space)
/// point; d_scale_or_focal is d(u,v)/dS or d(u,v)/df; d_rho is zero except for
/// the pseudo-perspective model.
struct Projected2D {
  Vec2 uv;
  Eigen::Matrix<double, 2, 3> d_v;
  Vec2 d_scale_or_focal;
  Vec2 d_rho;
};

Projected2D project_point_perspective(double focal, const Vec3& v, int index);
Projected2D project_point_orthographic(double scale, const Vec3& v, int index);
Projected2D project_point_pseudo(double scale, double rho, const Vec3& v, int index);

/// Derivatives of the full projection pipeline (transform + project) of model
/// points q. Rows: 2 per point (u then v). d_params columns follow the model's
/// parameter order:
///   perspective:  [w_x, w_y, w_z, t_x, t_y, t_z, f]
///   orthographic: [w_x, w_y, w_z, t_x, t_y, S]
///   pseudo:       [w_x, w_y, w_z, t_x, t_y, S, rho]
/// d_points columns are the 3N model-point coordinates in point order.
struct ProjectionJacobian {
  JacobianBlock d_params;
  JacobianBlock d_points;
};

ProjectionJacobian projection_jacobian(const PerspectiveCamera& cam,
                                       const std::vector<Vec3>& points);
ProjectionJacobian projection_jacobian(const OrthographicCamera& cam,
                                       const std::vector<Vec3>& points);
ProjectionJacobian projection_jacobian(const PseudoPerspectiveCamera& cam,
                                       const std::vector<Vec3>& points);

}  // namespace pseudocam
