// Command-line front end: projection, shrinkage conversion, landmark fitting,
// guidance masks, capture benchmarks, and focal/depth ambiguity scans.
//
// Exit codes: 0 success, 1 input error, 2 numeric-domain error,
// 3 fit did not converge.

#include "pseudocam/harness.hpp"
#include "pseudocam/masking.hpp"
#include "pseudocam/serialization.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

namespace {

using namespace pseudocam;

std::vector<Vec2> project_any(const CameraParams& camera, const std::vector<Vec3>& points) {
  if (const auto* p = std::get_if<PerspectiveCamera>(&camera)) {
    return project_perspective(*p, points);
  }
  if (const auto* o = std::get_if<OrthographicCamera>(&camera)) {
    return project_orthographic(*o, points);
  }
  return project_pseudo(std::get<PseudoPerspectiveCamera>(camera), points);
}

std::vector<Vec3> read_points3d(const std::string& path) {
  const std::string text = read_file(path);
  if (std::filesystem::path(path).extension() == ".obj") return vertices_from_obj(text);
  return points3d_from_csv(text);
}

double landmark_rmse(double landmark_cost, std::size_t n_observations) {
  if (n_observations == 0) return 0.0;
  return std::sqrt(std::max(landmark_cost, 0.0) / static_cast<double>(n_observations));
}

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::fputs(content.c_str(), stdout);
  } else {
    atomic_write_file(path, content);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudo-perspective face-camera toolkit"};
  app.require_subcommand(1);
  int exit_code = 0;

  // --- project ---------------------------------------------------------------
  std::string project_camera_path, project_points_path, project_out;
  auto* project = app.add_subcommand("project", "Project 3D points through a camera");
  project->add_option("--camera", project_camera_path, "camera JSON file")
      ->required();
  project->add_option("--points", project_points_path,
                      "3D points: .obj (vertex lines) or CSV with header index,x,y,z")
      ->required();
  project->add_option("--out", project_out, "output CSV path (default: stdout)");
  project->callback([&] {
    const CameraParams camera = camera_from_json(load_json(project_camera_path));
    const std::vector<Vec3> points = read_points3d(project_points_path);
    write_or_print(project_out, landmarks_to_csv(project_any(camera, points)));
  });

  // --- convert-rho -----------------------------------------------------------
  double conv_scale = 1.0, conv_focal = 0.0, conv_depth = 0.0;
  std::string conv_geometry_path;
  auto* conv = app.add_subcommand(
      "convert-rho", "Convert focal length and depth to the shrinkage parameter rho");
  conv->add_option("--S", conv_scale, "scale factor (default 1)");
  auto* conv_f = conv->add_option("--f", conv_focal, "focal length (cm)");
  auto* conv_z = conv->add_option("--vz", conv_depth, "camera-space depth (cm)");
  auto* conv_g = conv->add_option("--geometry", conv_geometry_path,
                                  "capture geometry JSON (analytic prior, S = 1)");
  conv_g->excludes(conv_f)->excludes(conv_z);
  conv->callback([&] {
    double rho = 0.0;
    if (!conv_geometry_path.empty()) {
      rho = rho_prior_analytic(geometry_from_json(load_json(conv_geometry_path)));
    } else {
      if (conv_f->count() == 0 || conv_z->count() == 0) {
        throw std::invalid_argument("convert-rho needs either --geometry or --f and --vz");
      }
      if (!(conv_scale > 0.0) || !(conv_focal > 0.0) || !(conv_depth > 0.0)) {
        throw std::invalid_argument("convert-rho inputs must be positive");
      }
      rho = rho_from_perspective(conv_scale, conv_focal, conv_depth);
    }
    std::printf("%.6f\n", rho);
  });

  // --- fit -------------------------------------------------------------------
  std::string fit_problem_path, fit_out, fit_trajectory;
  bool fit_staged = false, fit_check_jacobians = false;
  double fit_init_tz = 0.0, fit_init_focal = 0.0;
  int fit_max_iterations = 200;
  auto* fit = app.add_subcommand("fit", "Fit model coefficients and camera to landmarks");
  fit->add_option("--problem", fit_problem_path, "fit problem JSON")->required();
  fit->add_option("--out", fit_out, "result JSON path");
  fit->add_option("--trajectory", fit_trajectory, "per-iteration cost CSV path");
  fit->add_flag("--staged", fit_staged,
                "orthographic warm start, then unlock rho (pseudo-perspective only)");
  auto* fit_tz_opt = fit->add_option("--init-tz", fit_init_tz,
                                     "initial depth for perspective fits (required there)");
  auto* fit_f_opt = fit->add_option("--init-focal", fit_init_focal,
                                    "initial focal for perspective fits (default S * t_z)");
  fit->add_option("--max-iterations", fit_max_iterations, "solver iteration cap");
  fit->add_flag("--check-jacobians", fit_check_jacobians,
                "verify analytic Jacobians against finite differences while solving");
  fit->callback([&] {
    const FitProblem problem = problem_from_json(load_json(fit_problem_path));
    FitOptions options;
    options.max_iterations = fit_max_iterations;
    options.check_jacobians = fit_check_jacobians;

    FitResult result;
    bool staged_path = false;
    if (fit_staged) {
      if (problem.camera_kind != CameraKind::PseudoPerspective) {
        throw std::invalid_argument("--staged requires a pseudo-perspective problem");
      }
      result = staged_fit(problem, options);
      staged_path = true;
    } else if (problem.camera_kind == CameraKind::Perspective) {
      if (fit_tz_opt->count() == 0) {
        throw std::invalid_argument("perspective fits need --init-tz");
      }
      if (!(fit_init_tz > 0.0)) throw std::invalid_argument("--init-tz must be positive");
      FitState init =
          perspective_seed_from_ortho(initial_state_from_observations(problem), fit_init_tz);
      if (fit_f_opt->count() > 0) init.scale_or_focal = fit_init_focal;
      result = problem.active.rho_or_tz ? fit_perspective_joint(problem, init, options)
                                        : solve(problem, init, options);
    } else {
      FitState init = initial_state_from_observations(problem);
      if (problem.camera_kind == CameraKind::PseudoPerspective && problem.active.rho_or_tz) {
        init.rho = std::clamp(problem.rho_prior, 0.01 * problem.rho_max, 0.99 * problem.rho_max);
      }
      result = solve(problem, init, options);
    }

    if (!fit_out.empty()) write_json(fit_out, result_to_json(result));
    if (!fit_trajectory.empty()) {
      atomic_write_file(fit_trajectory, cost_trajectory_to_csv(result.cost_trajectory));
    }

    const std::size_t n_obs = problem.observations.size();
    std::printf("converged=%s termination=%s iterations=%d final_cost=%.6g\n",
                result.converged ? "true" : "false", termination_name(result.termination_reason),
                result.iterations, result.final_cost);
    if (staged_path) {
      const double stage1 = landmark_rmse(result.diagnostics.at("stage1_landmark_cost"), n_obs);
      const double stage2 = landmark_rmse(result.term_costs.landmark, n_obs);
      std::printf("stage1_rmse=%.6f stage2_rmse=%.6f ratio=%.6f\n", stage1, stage2,
                  stage1 > 0.0 ? stage2 / stage1 : 0.0);
    }
    if (!result.converged) exit_code = 3;
  });

  // --- bench -----------------------------------------------------------------
  std::string bench_scenario_path, bench_out_dir = ".";
  int bench_threads = 0;
  std::uint64_t bench_seed = 0;
  auto* bench = app.add_subcommand("bench", "Generate a capture and fit all camera models");
  bench->add_option("--scenario", bench_scenario_path, "capture scenario JSON")->required();
  bench->add_option("--out-dir", bench_out_dir, "output directory (default: .)");
  bench->add_option("--threads", bench_threads,
                    "worker threads (0 = automatic; PSEUDOCAM_THREADS caps it)");
  auto* bench_seed_opt =
      bench->add_option("--seed", bench_seed, "override the scenario's RNG seed");
  bench->callback([&] {
    CaptureScenario scenario = scenario_from_json(load_json(bench_scenario_path));
    if (bench_seed_opt->count() > 0) scenario.seed = bench_seed;
    const GeneratedCapture capture = generate_capture(scenario);

    BenchOptions options;
    options.threads = bench_threads;
    const BenchReport report = run_bench(capture, options);

    std::filesystem::create_directories(bench_out_dir);
    write_capture(bench_out_dir, capture);
    const std::string base = bench_out_dir + "/" + scenario.name;
    const std::string markdown = bench_report_markdown(report);
    atomic_write_file(base + "_report.md", markdown);
    atomic_write_file(base + "_frames.csv", bench_frames_csv(report));
    atomic_write_file(base + "_rmse.gnuplot",
                      bench_gnuplot_script(scenario.name + "_frames.csv", scenario.name));
    std::fputs(markdown.c_str(), stdout);

    bool any_ok = false;
    for (const MethodSummary& method : report.methods) {
      for (const FrameMetrics& frame : method.frames) any_ok = any_ok || frame.fit_ok;
    }
    if (!any_ok) {
      std::fprintf(stderr, "error: every frame failed to fit\n");
      exit_code = 1;
    }
  });

  // --- mask ------------------------------------------------------------------
  std::string mask_landmarks_path, mask_nose_path, mask_out_pgm, mask_out_rle;
  int mask_width = 0, mask_height = 0;
  std::uint64_t mask_seed = 0;
  GuidanceMaskOptions mask_options;
  auto* mask = app.add_subcommand("mask", "Build the sparse guidance mask from landmarks");
  mask->add_option("--landmarks", mask_landmarks_path, "projected landmarks CSV (index,u,v)")
      ->required();
  mask->add_option("--nose", mask_nose_path, "nose landmarks CSV for the exclusion discs");
  mask->add_option("--width", mask_width, "raster width (px)")->required();
  mask->add_option("--height", mask_height, "raster height (px)")->required();
  mask->add_option("--seed", mask_seed, "RNG seed for the keep-fraction sampling");
  mask->add_option("--erode-fraction", mask_options.erode_fraction,
                   "contour erosion radius as a fraction of the landmark bbox diagonal");
  mask->add_option("--exclude-fraction", mask_options.exclude_fraction,
                   "nose disc radius as a fraction of the landmark bbox diagonal");
  mask->add_option("--keep-fraction", mask_options.keep_fraction,
                   "fraction of eligible pixels kept as guidance");
  mask->add_option("--out-pgm", mask_out_pgm, "binary PGM output path");
  mask->add_option("--out-rle", mask_out_rle, "run-length JSON output path");
  mask->callback([&] {
    const std::vector<Vec2> landmarks = landmarks_from_csv(read_file(mask_landmarks_path));
    std::vector<Vec2> nose;
    if (!mask_nose_path.empty()) nose = landmarks_from_csv(read_file(mask_nose_path));
    const RasterMask result =
        smirk_guidance_mask(landmarks, nose, mask_width, mask_height, mask_seed, mask_options);
    if (!mask_out_pgm.empty()) atomic_write_file(mask_out_pgm, mask_to_pgm(result));
    if (!mask_out_rle.empty()) write_json(mask_out_rle, mask_to_rle_json(result));
    std::printf("guidance_pixels=%d\n", result.count());
  });

  // --- ambiguity-scan ----------------------------------------------------------
  std::string scan_scenario_path, scan_out_csv, scan_out_json;
  int scan_frame = 0, scan_steps = 9;
  double scan_span = 2.0;
  std::uint64_t scan_seed = 0;
  auto* scan = app.add_subcommand(
      "ambiguity-scan", "Map the perspective cost surface over the focal/depth plane");
  scan->add_option("--scenario", scan_scenario_path, "capture scenario JSON")->required();
  scan->add_option("--frame", scan_frame, "frame index to scan (default 0)");
  scan->add_option("--steps", scan_steps, "grid steps per axis (default 9)");
  scan->add_option("--span", scan_span, "multiplicative half-range per axis (default 2)");
  auto* scan_seed_opt =
      scan->add_option("--seed", scan_seed, "override the scenario's RNG seed");
  scan->add_option("--out-csv", scan_out_csv, "grid CSV output path (f,t_z,cost)");
  scan->add_option("--out-json", scan_out_json, "scan JSON output path");
  scan->callback([&] {
    CaptureScenario scenario = scenario_from_json(load_json(scan_scenario_path));
    if (scan_seed_opt->count() > 0) scenario.seed = scan_seed;
    const GeneratedCapture capture = generate_capture(scenario);
    if (scan_frame < 0 || scan_frame >= static_cast<int>(capture.frames.size())) {
      throw std::invalid_argument("--frame is outside the generated capture");
    }

    const FitOptions options;
    const FitProblem ortho_problem =
        problem_for_frame(capture, scan_frame, CameraKind::Orthographic);
    const FitResult ortho_fit =
        solve(ortho_problem, initial_state_from_observations(ortho_problem), options);

    const FitProblem problem = problem_for_frame(capture, scan_frame, CameraKind::Perspective);
    const double tz0 = nominal_standoff_tz(capture.scenario, capture.model);
    const FitResult perspective_fit =
        fit_perspective_joint(problem, perspective_seed_from_ortho(ortho_fit.state, tz0), options);

    const AmbiguityScan result = ambiguity_scan(problem, perspective_fit.state, scan_steps,
                                                scan_span);
    if (!scan_out_csv.empty()) {
      atomic_write_file(scan_out_csv,
                        ambiguity_scan_csv(result, perspective_fit.state.scale_or_focal,
                                           perspective_fit.state.t_z));
    }
    if (!scan_out_json.empty()) write_json(scan_out_json, ambiguity_scan_json(result));
    std::printf("flatness_ratio=%.6f\n", result.flatness_ratio);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const CaptureGenerationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return exit_code;
}
