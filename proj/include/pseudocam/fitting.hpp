#pragma once

#include "pseudocam/camera.hpp"
#include "pseudocam/morphable.hpp"
#include "pseudocam/types.hpp"

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace pseudocam {

enum class CameraKind { Perspective, Orthographic, PseudoPerspective };

const char* camera_kind_name(CameraKind kind);

/// One observed 2D landmark: the model vertex it corresponds to, its image
/// position, and a non-negative confidence weight.
struct Observation {
  int landmark = 0;
  Vec2 uv{0.0, 0.0};
  double weight = 1.0;
};

/// Per-region residual multipliers (applied on squared error).
struct RegionWeights {
  double jawline = 1.0;
  double nose = 1.0;
  double other = 1.0;
};

/// Which parameter groups the solver may move.
struct ActiveSet {
  bool beta = true;
  bool psi = true;
  bool theta_c = true;
  bool rotation = true;
  bool translation = true;     // t_x, t_y
  bool scale_or_focal = true;  // S (orthographic/pseudo) or f (perspective)
  bool rho_or_tz = false;      // rho (pseudo) or t_z (perspective)
};

struct FitProblem {
  MorphableModel model;
  std::vector<Observation> observations;
  CameraKind camera_kind = CameraKind::PseudoPerspective;
  ActiveSet active;
  RegionWeights region_weights;
  double rho_prior = 0.0;
  double lambda_p = 0.1;  // prior weight on (rho - rho_prior)^2
  double rho_max = 6.0;   // sigmoid bound for the rho reparameterization
  double coeff_l2 = 1e-3; // optional L2 on active coefficients; 0 disables

  void validate() const;
};

/// Full parameter state. rho and t_z are stored in value space; the solver
/// maps rho through RhoReparam internally while it is active.
struct FitState {
  ModelCoefficients coeffs;
  Vec3 axis_angle{0.0, 0.0, 0.0};
  Vec2 t_xy{0.0, 0.0};
  double t_z = 0.0;            // perspective cameras only
  double scale_or_focal = 1.0; // S or f
  double rho = 0.0;            // pseudo-perspective cameras only
};

/// Bounded shrinkage parameterization rho = rho_max * sigmoid(raw); keeps rho
/// in (0, rho_max) for every finite raw value.
struct RhoReparam {
  double raw = 0.0;
  double rho_max = 6.0;

  double value() const;
  double dvalue_draw() const;

  /// Inverse map, with the ratio clamped into (0, 1) so any target value has
  /// a finite raw preimage.
  static double raw_from_value(double rho, double rho_max);
};

struct FitOptions {
  double damping_init = 1e-3;  // multiplicative LM damping; x10 reject, /10 accept
  double gradient_tol = 1e-10;
  double step_tol = 1e-12;
  int max_iterations = 200;
  bool check_jacobians = false;  // finite-difference audit at every accepted iterate
};

enum class Termination { GradientTol, StepTol, MaxIterations, SingularNormalEquations };

const char* termination_name(Termination reason);

struct TermCosts {
  double landmark = 0.0;
  double rho_prior = 0.0;
  double coeff_reg = 0.0;
};

using CameraParams = std::variant<PerspectiveCamera, OrthographicCamera, PseudoPerspectiveCamera>;

/// Materializes the camera described by a state under the given model kind.
CameraParams camera_from_state(CameraKind kind, const FitState& state);

struct FitResult {
  FitState state;
  ModelCoefficients coefficients;
  CameraKind camera_kind = CameraKind::PseudoPerspective;
  CameraParams camera;
  double final_cost = 0.0;
  TermCosts term_costs;
  int iterations = 0;
  bool converged = false;
  Termination termination_reason = Termination::MaxIterations;
  std::vector<double> cost_trajectory;  // initial cost followed by accepted costs
  std::map<std::string, double> diagnostics;
};

/// Flat ordering of the active parameter groups:
///   [beta | psi | theta_c | rotation(3) | t_xy(2) | S-or-f | rho-or-t_z].
/// Offsets are -1 for inactive groups.
struct ParameterLayout {
  int beta = -1, psi = -1, theta_c = -1;
  int rotation = -1, t_xy = -1, scale_or_focal = -1, rho_or_tz = -1;
  int n_beta = 0, n_psi = 0, n_theta = 0;
  int size = 0;

  static ParameterLayout build(const FitProblem& problem);
};

Eigen::VectorXd pack_state(const FitProblem& problem, const FitState& state);
FitState unpack_state(const FitProblem& problem, const FitState& base, const Eigen::VectorXd& x);

/// Residual vector and (optionally) its Jacobian in the active-parameter
/// layout. Rows: two per observation (u then v, scaled by the square root of
/// the combined observation/region weight), then one prior row when rho is
/// active, then one L2 row per active coefficient when with_reg is set.
struct AssembledSystem {
  Eigen::VectorXd residual;
  Eigen::MatrixXd jacobian;  // empty when not requested
  int n_landmark_rows = 0;
  int prior_row = -1;
  int reg_start = -1;

  TermCosts term_costs() const;
  double total_cost() const { return residual.squaredNorm(); }
};

AssembledSystem assemble_system(const FitProblem& problem, const FitState& state,
                                bool with_jacobian, bool with_reg);

/// Weighted landmark residuals plus the prior row when rho is active (no
/// coefficient regularization rows; those belong to the solver objective).
Eigen::VectorXd residuals(const FitProblem& problem, const FitState& state);

/// Similarity-style initial guess from the observed landmark spread: the mean
/// shape's landmark extent fixes the scale, centroids fix t_xy. Coefficients
/// start at zero.
FitState initial_state_from_observations(const FitProblem& problem);

/// Levenberg-Marquardt with multiplicative damping. The initial state must
/// project without domain errors; mid-iteration domain errors reject the
/// offending step and raise damping.
FitResult solve(const FitProblem& problem, const FitState& initial,
                const FitOptions& options = {});

/// Orthographic-first schedule for pseudo-perspective problems: stage 1 fits
/// with rho frozen at zero, stage 2 re-fits with rho active, initialized from
/// the prior (feasibility-clamped). Stage-1 cost and iterations are recorded
/// in the result diagnostics. The landmark-plus-regularization cost of the
/// returned result never exceeds stage 1's.
FitResult staged_fit(const FitProblem& problem, const FitOptions& options = {});

/// Joint pinhole fit with focal length and z-translation both active; reports
/// the conditioning of the (f, t_z) Jacobian columns in the diagnostics
/// ("sf_rt_sigma_ratio"), which is the ambiguity the shrinkage model avoids.
FitResult fit_perspective_joint(const FitProblem& problem, const FitState& initial,
                                const FitOptions& options = {});

}  // namespace pseudocam
