#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace pseudocam {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Dense derivative block; rows come in pairs (u then v) per projected point,
/// or triples (x, y, z) per vertex for model-space maps.
using JacobianBlock = Eigen::MatrixXd;

/// Depth guard for perspective division: v_z <= kDepthEpsilon is a hard error.
inline constexpr double kDepthEpsilon = 1e-6;

/// Guard for the shrinkage denominator 1 + rho * v_z.
inline constexpr double kDenomEpsilon = 1e-6;

/// Perspective projection was asked to divide by a non-positive depth.
struct DegenerateDepthError : std::domain_error {
  DegenerateDepthError(int point_index_, double v_z_)
      : std::domain_error("degenerate depth at point " + std::to_string(point_index_) +
                          ": v_z = " + std::to_string(v_z_)),
        point_index(point_index_),
        v_z(v_z_) {}
  int point_index;
  double v_z;
};

/// The shrinkage denominator 1 + rho * v_z dropped below its guard.
struct ShrinkageSingularityError : std::domain_error {
  ShrinkageSingularityError(int point_index_, double v_z_)
      : std::domain_error("shrinkage singularity at point " + std::to_string(point_index_) +
                          ": 1 + rho * v_z <= eps, v_z = " + std::to_string(v_z_)),
        point_index(point_index_),
        v_z(v_z_) {}
  int point_index;
  double v_z;
};

}  // namespace pseudocam
