#include "pseudocam/fitting.hpp"

#include "pseudocam/rotation.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace pseudocam {

namespace {

constexpr double kDampingFloor = 1e-12;
constexpr double kDampingCeiling = 1e16;

double stable_sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

void check_state_sizes(const FitProblem& problem, const FitState& state) {
  require(state.coeffs.beta.size() == problem.model.n_beta(),
          "fit state beta size does not match the model");
  require(state.coeffs.psi.size() == problem.model.n_psi(),
          "fit state psi size does not match the model");
  require(state.coeffs.theta_c.size() == problem.model.n_theta(),
          "fit state theta_c size does not match the model");
  require(state.axis_angle.allFinite() && state.t_xy.allFinite(), "fit state pose is non-finite");
  require(std::isfinite(state.scale_or_focal) && std::isfinite(state.t_z) &&
              std::isfinite(state.rho),
          "fit state camera parameters are non-finite");
  if (problem.camera_kind == CameraKind::PseudoPerspective) {
    require(state.rho >= 0.0, "pseudo-perspective state requires rho >= 0");
  }
}

/// Multiplier applied to a squared landmark residual, by region of the vertex.
std::unordered_map<int, double> region_multipliers(const MorphableModel& model,
                                                   const RegionWeights& weights) {
  std::unordered_map<int, double> mult;
  mult.reserve(model.landmark_indices.size());
  for (int v : model.regions.jawline) mult[v] = weights.jawline;
  for (int v : model.regions.nose) mult[v] = weights.nose;
  for (int v : model.regions.other) mult[v] = weights.other;
  return mult;
}

bool rho_is_active(const FitProblem& problem) {
  return problem.camera_kind == CameraKind::PseudoPerspective && problem.active.rho_or_tz;
}

int count_reg_rows(const FitProblem& problem, const ParameterLayout& layout) {
  if (problem.coeff_l2 <= 0.0) return 0;
  int n = 0;
  if (layout.beta >= 0) n += layout.n_beta;
  if (layout.psi >= 0) n += layout.n_psi;
  if (layout.theta_c >= 0) n += layout.n_theta;
  return n;
}

}  // namespace

const char* camera_kind_name(CameraKind kind) {
  switch (kind) {
    case CameraKind::Perspective: return "perspective";
    case CameraKind::Orthographic: return "orthographic";
    case CameraKind::PseudoPerspective: return "pseudo";
  }
  return "unknown";
}

const char* termination_name(Termination reason) {
  switch (reason) {
    case Termination::GradientTol: return "gradient_tol";
    case Termination::StepTol: return "step_tol";
    case Termination::MaxIterations: return "max_iter";
    case Termination::SingularNormalEquations: return "singular_normal_equations";
  }
  return "unknown";
}

void FitProblem::validate() const {
  model.validate();
  require(std::isfinite(lambda_p) && lambda_p >= 0.0, "lambda_p must be finite and >= 0");
  require(std::isfinite(rho_max) && rho_max > 0.0, "rho_max must be finite and > 0");
  require(std::isfinite(coeff_l2) && coeff_l2 >= 0.0, "coeff_l2 must be finite and >= 0");
  require(std::isfinite(rho_prior) && rho_prior >= 0.0, "rho_prior must be finite and >= 0");
  require(std::isfinite(region_weights.jawline) && region_weights.jawline >= 0.0 &&
              std::isfinite(region_weights.nose) && region_weights.nose >= 0.0 &&
              std::isfinite(region_weights.other) && region_weights.other >= 0.0,
          "region weights must be finite and >= 0");
  if (camera_kind == CameraKind::Orthographic) {
    require(!active.rho_or_tz, "orthographic camera has no rho or t_z parameter");
  }
  const int n_landmarks = static_cast<int>(model.landmark_indices.size());
  for (const Observation& obs : observations) {
    require(obs.landmark >= 0 && obs.landmark < n_landmarks,
            "observation references a landmark outside the model's landmark list");
    require(obs.uv.allFinite(), "observation position is non-finite");
    require(std::isfinite(obs.weight) && obs.weight >= 0.0,
            "observation weight must be finite and >= 0");
  }
}

double RhoReparam::value() const { return rho_max * stable_sigmoid(raw); }

double RhoReparam::dvalue_draw() const {
  const double s = stable_sigmoid(raw);
  return rho_max * s * (1.0 - s);
}

double RhoReparam::raw_from_value(double rho, double rho_max) {
  require(std::isfinite(rho) && std::isfinite(rho_max) && rho_max > 0.0,
          "rho reparameterization needs finite rho and rho_max > 0");
  constexpr double kEdge = 1e-12;
  const double q = std::clamp(rho / rho_max, kEdge, 1.0 - kEdge);
  return std::log(q / (1.0 - q));
}

CameraParams camera_from_state(CameraKind kind, const FitState& state) {
  switch (kind) {
    case CameraKind::Perspective:
      return PerspectiveCamera{Rotation{state.axis_angle},
                               Vec3(state.t_xy.x(), state.t_xy.y(), state.t_z),
                               state.scale_or_focal};
    case CameraKind::Orthographic:
      return OrthographicCamera{Rotation{state.axis_angle}, state.t_xy, state.scale_or_focal};
    case CameraKind::PseudoPerspective:
      return PseudoPerspectiveCamera{Rotation{state.axis_angle}, state.t_xy,
                                     state.scale_or_focal, state.rho};
  }
  throw std::invalid_argument("unknown camera kind");
}

ParameterLayout ParameterLayout::build(const FitProblem& problem) {
  ParameterLayout layout;
  layout.n_beta = problem.model.n_beta();
  layout.n_psi = problem.model.n_psi();
  layout.n_theta = problem.model.n_theta();
  int at = 0;
  if (problem.active.beta) {
    layout.beta = at;
    at += layout.n_beta;
  }
  if (problem.active.psi) {
    layout.psi = at;
    at += layout.n_psi;
  }
  if (problem.active.theta_c) {
    layout.theta_c = at;
    at += layout.n_theta;
  }
  if (problem.active.rotation) {
    layout.rotation = at;
    at += 3;
  }
  if (problem.active.translation) {
    layout.t_xy = at;
    at += 2;
  }
  if (problem.active.scale_or_focal) {
    layout.scale_or_focal = at;
    at += 1;
  }
  if (problem.active.rho_or_tz && problem.camera_kind != CameraKind::Orthographic) {
    layout.rho_or_tz = at;
    at += 1;
  }
  layout.size = at;
  return layout;
}

Eigen::VectorXd pack_state(const FitProblem& problem, const FitState& state) {
  check_state_sizes(problem, state);
  const ParameterLayout layout = ParameterLayout::build(problem);
  Eigen::VectorXd x(layout.size);
  if (layout.beta >= 0) x.segment(layout.beta, layout.n_beta) = state.coeffs.beta;
  if (layout.psi >= 0) x.segment(layout.psi, layout.n_psi) = state.coeffs.psi;
  if (layout.theta_c >= 0) x.segment(layout.theta_c, layout.n_theta) = state.coeffs.theta_c;
  if (layout.rotation >= 0) x.segment<3>(layout.rotation) = state.axis_angle;
  if (layout.t_xy >= 0) x.segment<2>(layout.t_xy) = state.t_xy;
  if (layout.scale_or_focal >= 0) x(layout.scale_or_focal) = state.scale_or_focal;
  if (layout.rho_or_tz >= 0) {
    x(layout.rho_or_tz) = problem.camera_kind == CameraKind::Perspective
                              ? state.t_z
                              : RhoReparam::raw_from_value(state.rho, problem.rho_max);
  }
  return x;
}

FitState unpack_state(const FitProblem& problem, const FitState& base, const Eigen::VectorXd& x) {
  const ParameterLayout layout = ParameterLayout::build(problem);
  require(x.size() == layout.size, "parameter vector size does not match the active layout");
  FitState state = base;
  if (layout.beta >= 0) state.coeffs.beta = x.segment(layout.beta, layout.n_beta);
  if (layout.psi >= 0) state.coeffs.psi = x.segment(layout.psi, layout.n_psi);
  if (layout.theta_c >= 0) state.coeffs.theta_c = x.segment(layout.theta_c, layout.n_theta);
  if (layout.rotation >= 0) state.axis_angle = x.segment<3>(layout.rotation);
  if (layout.t_xy >= 0) state.t_xy = x.segment<2>(layout.t_xy);
  if (layout.scale_or_focal >= 0) state.scale_or_focal = x(layout.scale_or_focal);
  if (layout.rho_or_tz >= 0) {
    if (problem.camera_kind == CameraKind::Perspective) {
      state.t_z = x(layout.rho_or_tz);
    } else {
      state.rho = RhoReparam{x(layout.rho_or_tz), problem.rho_max}.value();
    }
  }
  return state;
}

TermCosts AssembledSystem::term_costs() const {
  TermCosts costs;
  costs.landmark = residual.head(n_landmark_rows).squaredNorm();
  if (prior_row >= 0) {
    costs.rho_prior = residual(prior_row) * residual(prior_row);
  }
  if (reg_start >= 0) {
    costs.coeff_reg = residual.tail(residual.size() - reg_start).squaredNorm();
  }
  return costs;
}

AssembledSystem assemble_system(const FitProblem& problem, const FitState& state,
                                bool with_jacobian, bool with_reg) {
  const ParameterLayout layout = ParameterLayout::build(problem);
  const MorphableModel& model = problem.model;
  const bool is_perspective = problem.camera_kind == CameraKind::Perspective;
  const bool is_pseudo = problem.camera_kind == CameraKind::PseudoPerspective;
  const bool prior_active = rho_is_active(problem);

  const int n_obs = static_cast<int>(problem.observations.size());
  const int n_landmark_rows = 2 * n_obs;
  const int n_reg = with_reg ? count_reg_rows(problem, layout) : 0;
  const int n_rows = n_landmark_rows + (prior_active ? 1 : 0) + n_reg;

  AssembledSystem sys;
  sys.residual.setZero(n_rows);
  if (with_jacobian) sys.jacobian.setZero(n_rows, layout.size);
  sys.n_landmark_rows = n_landmark_rows;

  const Mat3 rot = rotation_matrix(state.axis_angle);
  const Vec3 t = is_perspective ? Vec3(state.t_xy.x(), state.t_xy.y(), state.t_z)
                                : Vec3(state.t_xy.x(), state.t_xy.y(), 0.0);
  const double raw_rho =
      prior_active ? RhoReparam::raw_from_value(state.rho, problem.rho_max) : 0.0;
  const double drho_draw =
      prior_active ? RhoReparam{raw_rho, problem.rho_max}.dvalue_draw() : 0.0;
  const auto multipliers = region_multipliers(model, problem.region_weights);

  for (int i = 0; i < n_obs; ++i) {
    const Observation& obs = problem.observations[i];
    const int vertex = model.landmark_indices[obs.landmark];
    const Vec3 q = evaluate_vertex(model, state.coeffs, vertex);
    const Vec3 v = rot * q + t;

    Projected2D p;
    if (is_perspective) {
      p = project_point_perspective(state.scale_or_focal, v, i);
    } else if (is_pseudo) {
      p = project_point_pseudo(state.scale_or_focal, state.rho, v, i);
    } else {
      p = project_point_orthographic(state.scale_or_focal, v, i);
    }

    const auto region_it = multipliers.find(vertex);
    const double region_mult = region_it == multipliers.end() ? 1.0 : region_it->second;
    const double sw = std::sqrt(obs.weight * region_mult);

    sys.residual.segment<2>(2 * i) = sw * (p.uv - obs.uv);
    if (!with_jacobian) continue;

    const Eigen::Matrix<double, 2, 3> d_q = p.d_v * rot;
    auto rows = sys.jacobian.middleRows<2>(2 * i);
    if (layout.beta >= 0) {
      rows.middleCols(layout.beta, layout.n_beta) =
          sw * d_q * model.shape_basis.middleRows(3 * vertex, 3);
    }
    if (layout.psi >= 0) {
      rows.middleCols(layout.psi, layout.n_psi) =
          sw * d_q * model.expression_basis.middleRows(3 * vertex, 3);
    }
    if (layout.theta_c >= 0) {
      rows.middleCols(layout.theta_c, layout.n_theta) =
          sw * d_q * model.pose_corrective_basis.middleRows(3 * vertex, 3);
    }
    if (layout.rotation >= 0) {
      rows.middleCols<3>(layout.rotation) = sw * p.d_v * rotate_point_jacobian(state.axis_angle, q);
    }
    if (layout.t_xy >= 0) {
      rows.middleCols<2>(layout.t_xy) = sw * p.d_v.leftCols<2>();
    }
    if (layout.scale_or_focal >= 0) {
      rows.col(layout.scale_or_focal) = sw * p.d_scale_or_focal;
    }
    if (layout.rho_or_tz >= 0) {
      rows.col(layout.rho_or_tz) =
          is_perspective ? Vec2(sw * p.d_v.col(2)) : Vec2(sw * drho_draw * p.d_rho);
    }
  }

  int row = n_landmark_rows;
  if (prior_active) {
    sys.prior_row = row;
    const double sl = std::sqrt(problem.lambda_p);
    sys.residual(row) = sl * (state.rho - problem.rho_prior);
    if (with_jacobian) sys.jacobian(row, layout.rho_or_tz) = sl * drho_draw;
    ++row;
  }
  if (n_reg > 0) {
    sys.reg_start = row;
    const double sr = std::sqrt(problem.coeff_l2);
    auto emit = [&](int offset, int count, const Eigen::VectorXd& values) {
      if (offset < 0) return;
      for (int j = 0; j < count; ++j) {
        sys.residual(row) = sr * values(j);
        if (with_jacobian) sys.jacobian(row, offset + j) = sr;
        ++row;
      }
    };
    emit(layout.beta, layout.n_beta, state.coeffs.beta);
    emit(layout.psi, layout.n_psi, state.coeffs.psi);
    emit(layout.theta_c, layout.n_theta, state.coeffs.theta_c);
  }
  return sys;
}

Eigen::VectorXd residuals(const FitProblem& problem, const FitState& state) {
  check_state_sizes(problem, state);
  return assemble_system(problem, state, /*with_jacobian=*/false, /*with_reg=*/false).residual;
}

namespace {

/// Worst relative disagreement between the analytic Jacobian and a central
/// finite difference across all entries; probe columns that step into a
/// projection domain error are skipped.
double jacobian_fd_worst(const FitProblem& problem, const FitState& base,
                         const Eigen::VectorXd& x, const AssembledSystem& sys) {
  constexpr double h = 1e-6;
  double worst = 0.0;
  for (int j = 0; j < x.size(); ++j) {
    Eigen::VectorXd xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    Eigen::VectorXd rp, rm;
    try {
      rp = assemble_system(problem, unpack_state(problem, base, xp), false, true).residual;
      rm = assemble_system(problem, unpack_state(problem, base, xm), false, true).residual;
    } catch (const std::domain_error&) {
      continue;
    }
    const Eigen::VectorXd fd = (rp - rm) / (2.0 * h);
    for (int r = 0; r < fd.size(); ++r) {
      const double a = sys.jacobian(r, j);
      const double rel = std::abs(a - fd(r)) / std::max({1.0, std::abs(a), std::abs(fd(r))});
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

/// Conditioning of the landmark-term Jacobian restricted to the
/// scale-or-focal and rho-or-t_z columns, as sigma_min / sigma_max of the
/// column-equilibrated pair (each column scaled to unit norm). Equilibration
/// removes the arbitrary parameter units — raw columns differ in norm by
/// whatever units S, f, rho, and t_z happen to carry — leaving the angle
/// between the two sensitivity directions, which is what distinguishes an
/// identifiable pair from a compensating one. The rho column is mapped back
/// to value space first so the sigmoid reparameterization does not enter.
void record_sigma_ratio(const FitProblem& problem, const ParameterLayout& layout,
                        const AssembledSystem& sys, const Eigen::VectorXd& x,
                        std::map<std::string, double>& diagnostics) {
  if (layout.scale_or_focal < 0 || layout.rho_or_tz < 0) return;
  if (sys.n_landmark_rows < 2 || sys.jacobian.size() == 0) return;
  Eigen::MatrixXd m(sys.n_landmark_rows, 2);
  m.col(0) = sys.jacobian.col(layout.scale_or_focal).head(sys.n_landmark_rows);
  m.col(1) = sys.jacobian.col(layout.rho_or_tz).head(sys.n_landmark_rows);
  if (problem.camera_kind == CameraKind::PseudoPerspective) {
    const double d = RhoReparam{x(layout.rho_or_tz), problem.rho_max}.dvalue_draw();
    if (d <= 0.0) return;
    m.col(1) /= d;
  }
  const double norm0 = m.col(0).norm();
  const double norm1 = m.col(1).norm();
  if (norm0 <= 0.0 || norm1 <= 0.0) return;
  m.col(0) /= norm0;
  m.col(1) /= norm1;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const double s_max = svd.singularValues()(0);
  if (s_max <= 0.0) return;
  diagnostics["sf_rt_sigma_ratio"] = svd.singularValues()(1) / s_max;
}

}  // namespace

FitResult solve(const FitProblem& problem, const FitState& initial, const FitOptions& options) {
  problem.validate();
  check_state_sizes(problem, initial);
  require(options.max_iterations >= 0 && options.damping_init > 0.0 &&
              options.gradient_tol >= 0.0 && options.step_tol >= 0.0,
          "fit options out of range");

  const ParameterLayout layout = ParameterLayout::build(problem);
  Eigen::VectorXd x = pack_state(problem, initial);
  FitState state = unpack_state(problem, initial, x);

  // Precondition: the initial state must evaluate cleanly. Domain errors here
  // propagate to the caller.
  AssembledSystem sys = assemble_system(problem, state, /*with_jacobian=*/true, /*with_reg=*/true);
  double cost = sys.total_cost();

  FitResult result;
  result.camera_kind = problem.camera_kind;
  result.cost_trajectory.push_back(cost);

  double lambda = options.damping_init;
  Termination reason = Termination::MaxIterations;
  bool converged = false;
  int accepted = 0;
  double fd_worst = 0.0;
  bool done = false;

  if (layout.size == 0) {
    reason = Termination::GradientTol;
    converged = true;
    done = true;
  }

  for (int iter = 0; !done && iter < options.max_iterations; ++iter) {
    const Eigen::VectorXd g = sys.jacobian.transpose() * sys.residual;
    if (g.lpNorm<Eigen::Infinity>() <= options.gradient_tol) {
      reason = Termination::GradientTol;
      converged = true;
      break;
    }
    const Eigen::MatrixXd jtj = sys.jacobian.transpose() * sys.jacobian;
    const Eigen::VectorXd diag = jtj.diagonal();
    if (diag.maxCoeff() <= 0.0) {
      reason = Termination::SingularNormalEquations;
      break;
    }

    bool stepped = false;
    while (!stepped) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += lambda * diag;
      Eigen::VectorXd rhs = -g;
      // Parameters with no residual influence at this iterate are frozen so
      // they cannot poison the factorization.
      for (int j = 0; j < layout.size; ++j) {
        if (diag(j) > 0.0) continue;
        a.row(j).setZero();
        a.col(j).setZero();
        a(j, j) = 1.0;
        rhs(j) = 0.0;
      }
      const Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
      const Eigen::VectorXd delta = ldlt.solve(rhs);

      bool usable = ldlt.info() == Eigen::Success && delta.allFinite();
      double trial_cost = std::numeric_limits<double>::infinity();
      AssembledSystem trial_sys;
      Eigen::VectorXd x_new;
      FitState state_new;
      if (usable) {
        x_new = x + delta;
        state_new = unpack_state(problem, initial, x_new);
        try {
          trial_sys = assemble_system(problem, state_new, true, true);
          trial_cost = trial_sys.total_cost();
        } catch (const std::domain_error&) {
          trial_cost = std::numeric_limits<double>::infinity();
        }
        if (!std::isfinite(trial_cost)) usable = false;
      }

      if (usable && trial_cost <= cost) {
        x = std::move(x_new);
        state = state_new;
        sys = std::move(trial_sys);
        cost = trial_cost;
        result.cost_trajectory.push_back(cost);
        ++accepted;
        lambda = std::max(lambda * 0.1, kDampingFloor);
        if (options.check_jacobians) {
          fd_worst = std::max(fd_worst, jacobian_fd_worst(problem, initial, x, sys));
        }
        if (delta.norm() <= options.step_tol * (1.0 + x.norm())) {
          reason = Termination::StepTol;
          converged = true;
          done = true;
        }
        stepped = true;
      } else {
        lambda *= 10.0;
        if (usable && delta.norm() <= options.step_tol * (1.0 + x.norm())) {
          // Even the heavily damped step is below resolution: no improving
          // direction remains.
          reason = Termination::StepTol;
          converged = true;
          done = true;
          stepped = true;
        } else if (lambda > kDampingCeiling) {
          reason = usable ? Termination::StepTol : Termination::SingularNormalEquations;
          converged = usable;
          done = true;
          stepped = true;
        }
      }
    }
  }

  result.state = state;
  result.coefficients = state.coeffs;
  result.camera = camera_from_state(problem.camera_kind, state);
  result.final_cost = cost;
  result.term_costs = sys.term_costs();
  result.iterations = accepted;
  result.converged = converged;
  result.termination_reason = reason;
  if (options.check_jacobians) {
    result.diagnostics["max_jacobian_fd_rel_err"] = fd_worst;
  }
  record_sigma_ratio(problem, layout, sys, x, result.diagnostics);
  return result;
}

FitState initial_state_from_observations(const FitProblem& problem) {
  const MorphableModel& model = problem.model;
  FitState state;
  state.coeffs = ModelCoefficients::zero(model.n_beta(), model.n_psi(), model.n_theta());
  if (problem.observations.empty()) return state;

  Vec2 obs_min = problem.observations.front().uv, obs_max = obs_min;
  Vec2 obs_sum(0.0, 0.0);
  Vec2 mdl_min(0.0, 0.0), mdl_max(0.0, 0.0);
  Vec2 mdl_sum(0.0, 0.0);
  bool first = true;
  for (const Observation& obs : problem.observations) {
    obs_min = obs_min.cwiseMin(obs.uv);
    obs_max = obs_max.cwiseMax(obs.uv);
    obs_sum += obs.uv;
    const Vec3& q = model.mean_shape[model.landmark_indices[obs.landmark]];
    const Vec2 xy = q.head<2>();
    if (first) {
      mdl_min = mdl_max = xy;
      first = false;
    } else {
      mdl_min = mdl_min.cwiseMin(xy);
      mdl_max = mdl_max.cwiseMax(xy);
    }
    mdl_sum += xy;
  }
  const double n = static_cast<double>(problem.observations.size());
  const double obs_span = (obs_max - obs_min).maxCoeff();
  const double mdl_span = (mdl_max - mdl_min).maxCoeff();
  const double scale = (obs_span > 0.0 && mdl_span > 0.0) ? obs_span / mdl_span : 1.0;
  state.scale_or_focal = scale;
  state.t_xy = obs_sum / (n * scale) - mdl_sum / n;
  return state;
}

namespace {

/// Initial shrinkage for the second stage: prior-led, kept strictly inside
/// (0, rho_max), and clamped so every observed landmark keeps its denominator
/// 1 + rho * v_z >= 0.1 under the stage-1 pose.
double stage2_initial_rho(const FitProblem& problem, const FitState& stage1) {
  double rho = std::max(problem.rho_prior, 0.01 * problem.rho_max);
  rho = std::min(rho, 0.99 * problem.rho_max);
  const Mat3 rot = rotation_matrix(stage1.axis_angle);
  double z_min = std::numeric_limits<double>::infinity();
  for (const Observation& obs : problem.observations) {
    const int vertex = problem.model.landmark_indices[obs.landmark];
    const Vec3 q = evaluate_vertex(problem.model, stage1.coeffs, vertex);
    z_min = std::min(z_min, (rot * q).z());
  }
  if (std::isfinite(z_min) && z_min < 0.0) {
    rho = std::min(rho, 0.9 / -z_min);
  }
  return std::max(rho, 1e-6);
}

}  // namespace

FitResult staged_fit(const FitProblem& problem, const FitOptions& options) {
  problem.validate();
  require(problem.camera_kind == CameraKind::PseudoPerspective,
          "staged_fit requires a pseudo-perspective problem");

  FitProblem stage1 = problem;
  stage1.active.rho_or_tz = false;
  FitState init = initial_state_from_observations(problem);
  init.rho = 0.0;
  const FitResult r1 = solve(stage1, init, options);

  FitProblem stage2 = problem;
  stage2.active.rho_or_tz = true;
  FitState start2 = r1.state;
  start2.rho = stage2_initial_rho(problem, r1.state);
  FitResult result = solve(stage2, start2, options);

  // Candidate that keeps the stage-1 optimum with rho pinned at zero. Taking
  // the cheaper of the two guarantees the returned landmark+regularization
  // cost never exceeds stage 1's: if the candidate loses, the stage-2 total is
  // below stage-1's shared cost plus the prior at zero, and the prior term at
  // the stage-2 rho only shrinks that bound further whenever rho stays below
  // twice the prior.
  const double prior_at_zero =
      problem.lambda_p * problem.rho_prior * problem.rho_prior;
  const double fallback_total = r1.term_costs.landmark + r1.term_costs.coeff_reg + prior_at_zero;
  const bool use_fallback = rho_is_active(stage2) && fallback_total < result.final_cost;
  if (use_fallback) {
    FitResult cand = r1;
    cand.camera_kind = CameraKind::PseudoPerspective;
    cand.state.rho = 0.0;
    cand.coefficients = cand.state.coeffs;
    cand.camera = camera_from_state(CameraKind::PseudoPerspective, cand.state);
    cand.term_costs.rho_prior = prior_at_zero;
    cand.final_cost = fallback_total;
    cand.cost_trajectory = {fallback_total};
    cand.diagnostics = result.diagnostics;
    result = std::move(cand);
  }

  result.diagnostics["stage1_final_cost"] = r1.final_cost;
  result.diagnostics["stage1_landmark_cost"] = r1.term_costs.landmark;
  result.diagnostics["stage1_iterations"] = static_cast<double>(r1.iterations);
  result.diagnostics["stage2_initial_rho"] = start2.rho;
  result.diagnostics["stage2_fallback"] = use_fallback ? 1.0 : 0.0;
  return result;
}

FitResult fit_perspective_joint(const FitProblem& problem, const FitState& initial,
                                const FitOptions& options) {
  require(problem.camera_kind == CameraKind::Perspective,
          "fit_perspective_joint requires a perspective problem");
  FitProblem joint = problem;
  joint.active.scale_or_focal = true;
  joint.active.rho_or_tz = true;
  return solve(joint, initial, options);
}

}  // namespace pseudocam
