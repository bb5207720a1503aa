#include "pseudocam/morphable.hpp"

#include "pseudocam/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace pseudocam {

ModelCoefficients ModelCoefficients::zero(int n_beta, int n_psi, int n_theta) {
  ModelCoefficients c;
  c.beta = Eigen::VectorXd::Zero(n_beta);
  c.psi = Eigen::VectorXd::Zero(n_psi);
  c.theta_c = Eigen::VectorXd::Zero(n_theta);
  return c;
}

void MorphableModel::validate() const {
  const int v = n_vertices();
  if (v < 1) throw std::invalid_argument("model has no vertices");
  for (const Vec3& p : mean_shape) {
    if (!p.allFinite()) throw std::invalid_argument("mean_shape has non-finite entries");
  }
  const auto check_rows = [v](const Eigen::MatrixXd& basis, const char* name) {
    if (basis.rows() != 3 * v) {
      throw std::invalid_argument(std::string(name) + " row count does not match 3 * n_vertices");
    }
  };
  check_rows(shape_basis, "shape_basis");
  check_rows(expression_basis, "expression_basis");
  check_rows(pose_corrective_basis, "pose_corrective_basis");

  std::unordered_set<int> seen;
  for (int idx : landmark_indices) {
    if (idx < 0 || idx >= v) throw std::invalid_argument("landmark index out of range");
    if (!seen.insert(idx).second) throw std::invalid_argument("duplicate landmark index");
  }
  std::unordered_set<int> covered;
  std::size_t region_total = 0;
  for (const std::vector<int>* region : {&regions.jawline, &regions.nose, &regions.other}) {
    region_total += region->size();
    for (int idx : *region) {
      if (!seen.count(idx)) throw std::invalid_argument("region landmark not in landmark_indices");
      if (!covered.insert(idx).second) throw std::invalid_argument("landmark assigned to two regions");
    }
  }
  if (region_total != landmark_indices.size()) {
    throw std::invalid_argument("regions do not cover all landmarks");
  }
}

namespace {

void check_coeff_dims(const MorphableModel& model, const ModelCoefficients& coeffs) {
  if (coeffs.beta.size() != model.shape_basis.cols()) {
    throw std::invalid_argument("coefficient size mismatch for shape_basis");
  }
  if (coeffs.psi.size() != model.expression_basis.cols()) {
    throw std::invalid_argument("coefficient size mismatch for expression_basis");
  }
  if (coeffs.theta_c.size() != model.pose_corrective_basis.cols()) {
    throw std::invalid_argument("coefficient size mismatch for pose_corrective_basis");
  }
}

}  // namespace

std::vector<Vec3> evaluate(const MorphableModel& model, const ModelCoefficients& coeffs) {
  check_coeff_dims(model, coeffs);
  const int v = model.n_vertices();
  Eigen::VectorXd flat(3 * v);
  for (int k = 0; k < v; ++k) flat.segment<3>(3 * k) = model.mean_shape[k];
  if (coeffs.beta.size() > 0) flat += model.shape_basis * coeffs.beta;
  if (coeffs.psi.size() > 0) flat += model.expression_basis * coeffs.psi;
  if (coeffs.theta_c.size() > 0) flat += model.pose_corrective_basis * coeffs.theta_c;

  std::vector<Vec3> out(v);
  for (int k = 0; k < v; ++k) out[k] = flat.segment<3>(3 * k);
  return out;
}

Vec3 evaluate_vertex(const MorphableModel& model, const ModelCoefficients& coeffs, int vertex) {
  check_coeff_dims(model, coeffs);
  if (vertex < 0 || vertex >= model.n_vertices()) {
    throw std::invalid_argument("vertex index out of range");
  }
  Vec3 p = model.mean_shape[vertex];
  if (coeffs.beta.size() > 0) p += model.shape_basis.middleRows(3 * vertex, 3) * coeffs.beta;
  if (coeffs.psi.size() > 0) p += model.expression_basis.middleRows(3 * vertex, 3) * coeffs.psi;
  if (coeffs.theta_c.size() > 0) {
    p += model.pose_corrective_basis.middleRows(3 * vertex, 3) * coeffs.theta_c;
  }
  return p;
}

JacobianBlock evaluate_jacobian(const MorphableModel& model) {
  const int rows = 3 * model.n_vertices();
  JacobianBlock jac(rows, model.n_beta() + model.n_psi() + model.n_theta());
  jac.leftCols(model.n_beta()) = model.shape_basis;
  jac.middleCols(model.n_beta(), model.n_psi()) = model.expression_basis;
  jac.rightCols(model.n_theta()) = model.pose_corrective_basis;
  return jac;
}

namespace {

// Face patch layout constants (centimetres). The patch is 15 wide and 20
// tall; the surface bulges gently toward the camera (smaller z is closer) and
// the nose cluster sits strictly in front of everything else. The finished
// shape is rebased so its nearest point lies exactly at z = 0: depth is pure
// relief measured from the nose tip, every z is non-negative (so the
// shrinkage denominator 1 + rho * v_z stays valid over the whole rho range
// for near-frontal poses), and a capture standoff equals the pinhole t_z.
constexpr double kHalfWidth = 7.5;
constexpr double kHalfHeight = 10.0;
constexpr double kBulgeDepth = 2.5;
constexpr double kSurfaceFront = 1.6;

double surface_z(double x, double y) {
  const double r2 = (x / kHalfWidth) * (x / kHalfWidth) + (y / kHalfHeight) * (y / kHalfHeight);
  return kSurfaceFront + kBulgeDepth * (1.0 - std::sqrt(std::max(0.0, 1.0 - r2)));
}

}  // namespace

MorphableModel make_toy_model(int n_vertices, int n_beta, int n_psi, int n_theta,
                              std::uint64_t seed) {
  if (n_vertices < 8) throw std::invalid_argument("toy model needs at least 8 vertices");
  if (n_beta < 0 || n_psi < 0 || n_theta < 0) {
    throw std::invalid_argument("basis dimensions must be non-negative");
  }

  const int n_land = std::min({21, std::max(8, n_vertices / 3), n_vertices});
  const int jaw_count = std::max(3, n_land * 9 / 21);
  const int nose_count = std::max(2, n_land * 4 / 21);
  const int other_count = n_land - jaw_count - nose_count;

  MorphableModel model;
  model.mean_shape.reserve(n_vertices);

  // Jawline: lower rim arc, ear to ear through the chin.
  for (int k = 0; k < jaw_count; ++k) {
    const double phi = (190.0 + 160.0 * k / (jaw_count - 1)) * M_PI / 180.0;
    const double x = 0.95 * kHalfWidth * std::cos(phi);
    const double y = 0.95 * kHalfHeight * std::sin(phi);
    model.mean_shape.emplace_back(x, y, surface_z(x, y));
    model.regions.jawline.push_back(static_cast<int>(model.mean_shape.size()) - 1);
  }

  // Nose cluster: protrudes 0.45-0.6 in front of the closest surface point.
  const Vec3 nose_pts[4] = {{0.0, -1.2, 1.00}, {-0.7, -0.8, 1.08}, {0.7, -0.8, 1.08},
                            {0.0, -0.45, 1.15}};
  for (int k = 0; k < nose_count; ++k) {
    model.mean_shape.push_back(nose_pts[std::min(k, 3)]);
    model.regions.nose.push_back(static_cast<int>(model.mean_shape.size()) - 1);
  }

  // Remaining feature landmarks: eye corners, mouth corners, brows.
  const double other_xy[8][2] = {{-3.5, 3.0}, {3.5, 3.0},  {-1.5, 2.8}, {1.5, 2.8},
                                 {-2.2, -4.5}, {2.2, -4.5}, {-2.5, 5.0}, {2.5, 5.0}};
  for (int k = 0; k < other_count; ++k) {
    const double x = other_xy[std::min(k, 7)][0];
    const double y = other_xy[std::min(k, 7)][1];
    model.mean_shape.emplace_back(x, y, surface_z(x, y));
    model.regions.other.push_back(static_cast<int>(model.mean_shape.size()) - 1);
  }

  model.landmark_indices.resize(n_land);
  for (int k = 0; k < n_land; ++k) model.landmark_indices[k] = k;

  // Fill vertices on a golden-angle spiral over the elliptical disc, pushed
  // slightly backwards so the nose stays strictly closest.
  SeededRng rng(seed);
  const int fill_count = n_vertices - n_land;
  for (int k = 0; k < fill_count; ++k) {
    const double r = 0.97 * std::sqrt((k + 0.5) / std::max(1, fill_count));
    const double phi = k * 2.39996322972865332;
    const double x = 0.98 * kHalfWidth * r * std::cos(phi);
    const double y = 0.98 * kHalfHeight * r * std::sin(phi);
    model.mean_shape.emplace_back(x, y, surface_z(x, y) + rng.uniform(0.0, 0.3));
  }

  // Rebase so the nearest point sits exactly at z = 0 (relief from the nose).
  double z_min = model.mean_shape[0].z();
  for (const Vec3& p : model.mean_shape) z_min = std::min(z_min, p.z());
  for (Vec3& p : model.mean_shape) p.z() -= z_min;

  // Basis columns: seeded Gaussian directions, each rescaled so a unit
  // coefficient moves the whole shape by 8% of the bounding-box diagonal
  // (inside the required 10% bound).
  Vec3 lo = model.mean_shape[0], hi = model.mean_shape[0];
  for (const Vec3& p : model.mean_shape) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double column_norm = 0.08 * (hi - lo).norm();

  const auto fill_basis = [&](int cols) {
    Eigen::MatrixXd basis(3 * n_vertices, cols);
    for (int c = 0; c < cols; ++c) {
      for (int r = 0; r < basis.rows(); ++r) basis(r, c) = rng.normal();
      const double norm = basis.col(c).norm();
      if (norm > 0.0) basis.col(c) *= column_norm / norm;
    }
    return basis;
  };
  model.shape_basis = fill_basis(n_beta);
  model.expression_basis = fill_basis(n_psi);
  model.pose_corrective_basis = fill_basis(n_theta);

  model.validate();
  return model;
}

}  // namespace pseudocam
