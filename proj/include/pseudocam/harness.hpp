#pragma once

#include "pseudocam/fitting.hpp"
#include "pseudocam/serialization.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pseudocam {

/// Dimensions and seed of a procedurally built face model.
struct ToyModelSpec {
  int n_vertices = 64;
  int n_beta = 8;
  int n_psi = 6;
  int n_theta = 4;
  std::uint64_t seed = 1;
};

/// Everything needed to synthesize a capture deterministically.
struct CaptureScenario {
  std::string name = "capture";
  CaptureGeometry geometry;
  ToyModelSpec model;
  double rotation_jitter = 0.05;     // std-dev of each axis-angle component (rad)
  double translation_jitter = 0.3;   // std-dev of t_x, t_y (cm); t_z stays nominal
  double landmark_noise_px = 0.5;    // std-dev of per-coordinate observation noise
  double coeff_sigma = 1.0;          // scale of per-frame coefficient draws
  int n_frames = 1;
  std::uint64_t seed = 0;
  int image_width = 512;             // square image; pixels per cm follows from the sensor

  void validate() const;
};

Json scenario_to_json(const CaptureScenario& scenario);
CaptureScenario scenario_from_json(const Json& j);

/// Raised when synthesis itself is impossible (e.g. a standoff that puts the
/// face behind the pinhole). Wraps the projection domain error.
struct CaptureGenerationError : std::runtime_error {
  CaptureGenerationError(int frame_, const std::string& what_)
      : std::runtime_error("capture generation failed at frame " + std::to_string(frame_) +
                           ": " + what_),
        frame(frame_) {}
  int frame;
};

/// Ground truth for one frame. Lives only in the sealed record.
struct FrameTruth {
  ModelCoefficients coeffs;
  Vec3 axis_angle{0.0, 0.0, 0.0};
  Vec3 translation{0.0, 0.0, 0.0};
};

/// Capture-level ground truth: the generating pinhole camera, its analytic
/// shrinkage conversion, and the shrinkage of the exactly equivalent
/// relief-only model (1 / t_z).
struct SealedTruth {
  double focal_cm = 0.0;
  double focal_px = 0.0;
  double standoff = 0.0;
  double t_z = 0.0;
  double rho_analytic = 0.0;
  double rho_pseudo_equiv = 0.0;
  std::vector<FrameTruth> frames;
};

struct GeneratedFrame {
  int index = 0;
  std::vector<Observation> observations;  // noisy, pixel units, image-centered
  std::vector<Vec2> clean_uv;             // the same projections before noise
};

struct GeneratedCapture {
  CaptureScenario scenario;
  MorphableModel model;
  std::vector<GeneratedFrame> frames;
  SealedTruth sealed;
  double px_per_cm = 0.0;
  double rho_prior = 0.0;  // analytic close-range prior, 0 beyond 50 cm standoff
};

/// Synthesizes the capture through a pinhole camera at the scenario geometry.
/// Frame k derives its RNG stream from (scenario.seed, k), so frames are
/// reproducible individually and independent of generation order.
GeneratedCapture generate_capture(const CaptureScenario& scenario, const MorphableModel& model);
GeneratedCapture generate_capture(const CaptureScenario& scenario);

/// Builds the per-frame fit problem (observations + shared model and priors).
FitProblem problem_for_frame(const GeneratedCapture& capture, int frame, CameraKind kind);

/// Depth that puts the model's nearest mean-shape point exactly at the
/// scenario standoff; the t_z of the generating pinhole camera.
double nominal_standoff_tz(const CaptureScenario& scenario, const MorphableModel& model);

/// Converts an orthographic solution into a perspective starting point at
/// depth tz: t_z = tz and f = S * tz, the pinhole consistency S = f / t_z.
FitState perspective_seed_from_ortho(FitState state, double tz);

/// Public half of a capture: scenario, model, and per-frame observations.
Json capture_public_json(const GeneratedCapture& capture);

/// Sealed half: ground truth plus the FNV-1a checksum (hex) of the public
/// file's bytes, so a truth record can be matched to exactly one capture file.
Json sealed_truth_json(const GeneratedCapture& capture, std::uint64_t public_checksum);

struct CaptureFiles {
  std::string public_path;
  std::string sealed_path;
};

/// Writes <dir>/<name>.capture.json and <dir>/<name>.sealed.json.
CaptureFiles write_capture(const std::string& dir, const GeneratedCapture& capture);

GeneratedCapture capture_from_json(const Json& j);
SealedTruth sealed_truth_from_json(const Json& j);

// --- benchmark -------------------------------------------------------------

struct BenchOptions {
  int threads = 0;  // 0 = automatic; the PSEUDOCAM_THREADS env var caps it
  FitOptions fit_options;
};

struct FrameMetrics {
  int frame = 0;
  bool fit_ok = false;
  bool converged = false;
  int iterations = 0;
  double rmse_all = 0.0;
  double rmse_jawline = 0.0;
  double rmse_facial = 0.0;  // nose + other regions
  double scale_or_focal = 0.0;
  double rho = 0.0;
  double t_z = 0.0;
  double sigma_ratio = 0.0;  // NaN when the fit does not report one
};

struct MethodSummary {
  CameraKind kind = CameraKind::PseudoPerspective;
  std::vector<FrameMetrics> frames;
  double mean_rmse_all = 0.0;
  double mean_rmse_jawline = 0.0;
  double mean_rmse_facial = 0.0;
  double mean_rho = 0.0;
  double mean_scale_or_focal = 0.0;
  double mean_tz = 0.0;
  double mean_iterations = 0.0;
  double mean_sigma_ratio = 0.0;
  double convergence_rate = 0.0;
};

struct BenchReport {
  std::string scenario_name;
  std::vector<MethodSummary> methods;  // orthographic, pseudo-perspective, perspective

  const MethodSummary& method(CameraKind kind) const;
};

/// Fits every frame with all three camera models. Orthographic and
/// pseudo-perspective start from the data-driven similarity guess (the pseudo
/// fit staged through its orthographic stage); the joint perspective fit warm
/// starts from the frame's orthographic solution (f = S * t_z at the nominal
/// standoff). Frames are distributed over a thread pool; per-frame work is
/// deterministic, so the report does not depend on scheduling.
BenchReport run_bench(const GeneratedCapture& capture, const BenchOptions& options = {});

std::string bench_report_markdown(const BenchReport& report);
std::string bench_frames_csv(const BenchReport& report);
std::string bench_gnuplot_script(const std::string& csv_name, const std::string& title);

// --- focal/depth ambiguity scan ---------------------------------------------

/// Cost landscape of a perspective problem over a multiplicative grid around
/// (f0, t_z0). cost(i, j) is evaluated at f = factor_i * f0, t_z = factor_j *
/// t_z0 with all other parameters frozen. flatness_ratio compares the cost
/// range along the diagonal f and t_z scaled together against the range along
/// the f axis; a small value means the two parameters trade off almost freely.
struct AmbiguityScan {
  std::vector<double> factors;
  Eigen::MatrixXd cost;
  double diagonal_range = 0.0;
  double axis_range = 0.0;
  double flatness_ratio = 0.0;
};

AmbiguityScan ambiguity_scan(const FitProblem& problem, const FitState& center, int n_steps = 9,
                             double span = 2.0);

std::string ambiguity_scan_csv(const AmbiguityScan& scan, double f0, double tz0);
Json ambiguity_scan_json(const AmbiguityScan& scan);

}  // namespace pseudocam
