#pragma once

#include "pseudocam/types.hpp"

#include <cstdint>
#include <vector>

namespace pseudocam {

/// Coefficients of the linear face model: identity (beta), expression (psi)
/// and pose-corrective (theta_c) blocks.
struct ModelCoefficients {
  Eigen::VectorXd beta;
  Eigen::VectorXd psi;
  Eigen::VectorXd theta_c;

  static ModelCoefficients zero(int n_beta, int n_psi, int n_theta);
};

/// Vertex-index groups of the designated landmarks.
struct LandmarkRegions {
  std::vector<int> jawline;
  std::vector<int> nose;
  std::vector<int> other;
};

/// Linear morphable face model in centimetres:
///   T(beta, psi, theta_c) = mean_shape + B_s beta + B_e psi + B_p theta_c.
/// All bases are dense (3 * n_vertices) x n_coeff matrices; vertex k occupies
/// rows 3k..3k+2 (x, y, z).
struct MorphableModel {
  std::vector<Vec3> mean_shape;
  Eigen::MatrixXd shape_basis;
  Eigen::MatrixXd expression_basis;
  Eigen::MatrixXd pose_corrective_basis;
  std::vector<int> landmark_indices;
  LandmarkRegions regions;

  int n_vertices() const { return static_cast<int>(mean_shape.size()); }
  int n_beta() const { return static_cast<int>(shape_basis.cols()); }
  int n_psi() const { return static_cast<int>(expression_basis.cols()); }
  int n_theta() const { return static_cast<int>(pose_corrective_basis.cols()); }

  /// Structural checks: basis row counts, landmark uniqueness/range, and that
  /// the three regions exactly partition the landmark set. Throws
  /// std::invalid_argument on the first violation.
  void validate() const;
};

/// Evaluates the model at the given coefficients for every vertex.
/// Throws std::invalid_argument (naming the offending basis) on dimension
/// mismatch.
std::vector<Vec3> evaluate(const MorphableModel& model, const ModelCoefficients& coeffs);

/// Single-vertex evaluation; used on landmark vertices in fitting hot paths.
Vec3 evaluate_vertex(const MorphableModel& model, const ModelCoefficients& coeffs, int vertex);

/// d(evaluate)/d(coefficients): constant [shape | expression | pose] block of
/// size 3V x (n_beta + n_psi + n_theta).
JacobianBlock evaluate_jacobian(const MorphableModel& model);

/// Deterministic synthetic face: an ellipsoid patch (15 cm wide, 20 cm tall,
/// shallow camera-facing bulge) with a protruding nose cluster that has
/// strictly the smallest depth coordinate of all vertices at zero
/// coefficients. Landmarks cover {jawline, nose, other}; basis columns are
/// seeded Gaussian noise rescaled so a unit coefficient displaces the
/// geometry by at most 10% of the bounding-box diagonal.
/// Requires n_vertices >= 8.
MorphableModel make_toy_model(int n_vertices, int n_beta, int n_psi, int n_theta,
                              std::uint64_t seed);

}  // namespace pseudocam
