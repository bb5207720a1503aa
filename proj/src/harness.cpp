#include "pseudocam/harness.hpp"

#include "pseudocam/rng.hpp"
#include "pseudocam/rotation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <thread>

namespace pseudocam {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

/// Model-space depth of the closest point of the mean face; the capture
/// places that point exactly at the standoff distance.
double front_depth(const MorphableModel& model) {
  double z = std::numeric_limits<double>::infinity();
  for (const Vec3& p : model.mean_shape) z = std::min(z, p.z());
  return z;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_f6(double v) {
  if (!std::isfinite(v)) return "-";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

Json coeffs_to_json(const ModelCoefficients& coeffs) {
  auto arr = [](const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
  };
  Json j;
  j["beta"] = arr(coeffs.beta);
  j["psi"] = arr(coeffs.psi);
  j["theta_c"] = arr(coeffs.theta_c);
  return j;
}

ModelCoefficients coeffs_from_json(const Json& j) {
  auto vec = [](const Json& a) {
    Eigen::VectorXd v(a.size());
    Eigen::Index i = 0;
    for (const Json& e : a) v(i++) = e.get<double>();
    return v;
  };
  ModelCoefficients coeffs;
  coeffs.beta = vec(j.at("beta"));
  coeffs.psi = vec(j.at("psi"));
  coeffs.theta_c = vec(j.at("theta_c"));
  return coeffs;
}

/// Mean over finite entries; NaN when none are finite.
double finite_mean(const std::vector<double>& values) {
  double sum = 0.0;
  int n = 0;
  for (double v : values) {
    if (std::isfinite(v)) {
      sum += v;
      ++n;
    }
  }
  return n > 0 ? sum / n : kNaN;
}

}  // namespace

void CaptureScenario::validate() const {
  geometry.validate();
  require(!name.empty(), "scenario name must not be empty");
  require(model.n_vertices >= 8, "scenario model needs at least 8 vertices");
  require(model.n_beta >= 0 && model.n_psi >= 0 && model.n_theta >= 0,
          "scenario model coefficient counts must be >= 0");
  require(std::isfinite(rotation_jitter) && rotation_jitter >= 0.0,
          "rotation_jitter must be finite and >= 0");
  require(std::isfinite(translation_jitter) && translation_jitter >= 0.0,
          "translation_jitter must be finite and >= 0");
  require(std::isfinite(landmark_noise_px) && landmark_noise_px >= 0.0,
          "landmark_noise_px must be finite and >= 0");
  require(std::isfinite(coeff_sigma) && coeff_sigma >= 0.0, "coeff_sigma must be finite and >= 0");
  require(n_frames >= 1, "scenario needs at least one frame");
  require(image_width >= 2, "image_width must be at least 2");
}

Json scenario_to_json(const CaptureScenario& s) {
  Json model;
  model["n_vertices"] = s.model.n_vertices;
  model["n_beta"] = s.model.n_beta;
  model["n_psi"] = s.model.n_psi;
  model["n_theta"] = s.model.n_theta;
  model["seed"] = s.model.seed;
  Json j;
  j["name"] = s.name;
  j["geometry"] = geometry_to_json(s.geometry);
  j["model"] = std::move(model);
  j["rotation_jitter"] = s.rotation_jitter;
  j["translation_jitter"] = s.translation_jitter;
  j["landmark_noise_px"] = s.landmark_noise_px;
  j["coeff_sigma"] = s.coeff_sigma;
  j["n_frames"] = s.n_frames;
  j["seed"] = s.seed;
  j["image_width"] = s.image_width;
  return j;
}

CaptureScenario scenario_from_json(const Json& j) {
  CaptureScenario s;
  s.name = j.at("name").get<std::string>();
  s.geometry = geometry_from_json(j.at("geometry"));
  const Json& model = j.at("model");
  s.model.n_vertices = model.at("n_vertices").get<int>();
  s.model.n_beta = model.at("n_beta").get<int>();
  s.model.n_psi = model.at("n_psi").get<int>();
  s.model.n_theta = model.at("n_theta").get<int>();
  s.model.seed = model.at("seed").get<std::uint64_t>();
  s.rotation_jitter = j.at("rotation_jitter").get<double>();
  s.translation_jitter = j.at("translation_jitter").get<double>();
  s.landmark_noise_px = j.at("landmark_noise_px").get<double>();
  s.coeff_sigma = j.at("coeff_sigma").get<double>();
  s.n_frames = j.at("n_frames").get<int>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.image_width = j.at("image_width").get<int>();
  s.validate();
  return s;
}

double nominal_standoff_tz(const CaptureScenario& scenario, const MorphableModel& model) {
  return scenario.geometry.standoff - front_depth(model);
}

FitState perspective_seed_from_ortho(FitState state, double tz) {
  state.t_z = tz;
  state.scale_or_focal = std::max(state.scale_or_focal, 1e-6) * tz;
  return state;
}

GeneratedCapture generate_capture(const CaptureScenario& scenario) {
  return generate_capture(scenario,
                          make_toy_model(scenario.model.n_vertices, scenario.model.n_beta,
                                         scenario.model.n_psi, scenario.model.n_theta,
                                         scenario.model.seed));
}

GeneratedCapture generate_capture(const CaptureScenario& scenario, const MorphableModel& model) {
  scenario.validate();
  model.validate();

  GeneratedCapture cap;
  cap.scenario = scenario;
  cap.model = model;
  cap.px_per_cm = scenario.image_width / scenario.geometry.sensor_width;

  const double t_z = nominal_standoff_tz(scenario, model);
  cap.sealed.focal_cm = focal_from_geometry(scenario.geometry);
  cap.sealed.focal_px = cap.sealed.focal_cm * cap.px_per_cm;
  cap.sealed.standoff = scenario.geometry.standoff;
  cap.sealed.t_z = t_z;
  cap.sealed.rho_analytic = rho_prior_analytic(scenario.geometry);
  cap.sealed.rho_pseudo_equiv = t_z > 0.0 ? 1.0 / t_z : 0.0;
  cap.rho_prior = scenario.geometry.standoff <= 50.0 ? cap.sealed.rho_analytic : 0.0;

  const int n_landmarks = static_cast<int>(model.landmark_indices.size());
  for (int k = 0; k < scenario.n_frames; ++k) {
    SeededRng rng(SeededRng::derive(scenario.seed, static_cast<std::uint64_t>(k)));

    FrameTruth truth;
    truth.coeffs = ModelCoefficients::zero(model.n_beta(), model.n_psi(), model.n_theta());
    for (Eigen::Index i = 0; i < truth.coeffs.beta.size(); ++i) {
      truth.coeffs.beta(i) = scenario.coeff_sigma * rng.truncated_normal(2.0);
    }
    for (Eigen::Index i = 0; i < truth.coeffs.psi.size(); ++i) {
      truth.coeffs.psi(i) = scenario.coeff_sigma * rng.truncated_normal(2.0);
    }
    for (Eigen::Index i = 0; i < truth.coeffs.theta_c.size(); ++i) {
      truth.coeffs.theta_c(i) = scenario.coeff_sigma * rng.truncated_normal(2.0);
    }
    truth.axis_angle = Vec3(rng.normal(0.0, scenario.rotation_jitter),
                            rng.normal(0.0, scenario.rotation_jitter),
                            rng.normal(0.0, scenario.rotation_jitter));
    truth.translation = Vec3(rng.normal(0.0, scenario.translation_jitter),
                             rng.normal(0.0, scenario.translation_jitter), t_z);

    const Mat3 rot = rotation_matrix(truth.axis_angle);
    GeneratedFrame frame;
    frame.index = k;
    frame.observations.reserve(n_landmarks);
    frame.clean_uv.reserve(n_landmarks);
    for (int i = 0; i < n_landmarks; ++i) {
      const Vec3 q = evaluate_vertex(model, truth.coeffs, model.landmark_indices[i]);
      const Vec3 v = rot * q + truth.translation;
      Projected2D p;
      try {
        p = project_point_perspective(cap.sealed.focal_px, v, i);
      } catch (const std::domain_error& e) {
        throw CaptureGenerationError(k, e.what());
      }
      frame.clean_uv.push_back(p.uv);
      Observation obs;
      obs.landmark = i;
      obs.uv = p.uv + scenario.landmark_noise_px * Vec2(rng.normal(), rng.normal());
      obs.weight = 1.0;
      frame.observations.push_back(obs);
    }
    cap.frames.push_back(std::move(frame));
    cap.sealed.frames.push_back(std::move(truth));
  }
  return cap;
}

FitProblem problem_for_frame(const GeneratedCapture& capture, int frame, CameraKind kind) {
  require(frame >= 0 && frame < static_cast<int>(capture.frames.size()),
          "frame index outside the capture");
  FitProblem problem;
  problem.model = capture.model;
  problem.observations = capture.frames[frame].observations;
  problem.camera_kind = kind;
  problem.active.rho_or_tz = kind == CameraKind::Perspective;
  problem.rho_prior = capture.rho_prior;
  return problem;
}

Json capture_public_json(const GeneratedCapture& capture) {
  Json frames = Json::array();
  for (const GeneratedFrame& frame : capture.frames) {
    Json obs_arr = Json::array();
    for (const Observation& obs : frame.observations) {
      Json o;
      o["landmark"] = obs.landmark;
      o["uv"] = {obs.uv.x(), obs.uv.y()};
      o["weight"] = obs.weight;
      obs_arr.push_back(std::move(o));
    }
    Json f;
    f["index"] = frame.index;
    f["observations"] = std::move(obs_arr);
    frames.push_back(std::move(f));
  }
  Json j;
  j["scenario"] = scenario_to_json(capture.scenario);
  j["px_per_cm"] = capture.px_per_cm;
  j["rho_prior"] = capture.rho_prior;
  j["model"] = model_to_json(capture.model);
  j["frames"] = std::move(frames);
  return j;
}

GeneratedCapture capture_from_json(const Json& j) {
  GeneratedCapture cap;
  cap.scenario = scenario_from_json(j.at("scenario"));
  cap.px_per_cm = j.at("px_per_cm").get<double>();
  cap.rho_prior = j.at("rho_prior").get<double>();
  cap.model = model_from_json(j.at("model"));
  for (const Json& f : j.at("frames")) {
    GeneratedFrame frame;
    frame.index = f.at("index").get<int>();
    for (const Json& o : f.at("observations")) {
      Observation obs;
      obs.landmark = o.at("landmark").get<int>();
      obs.uv = Vec2(o.at("uv").at(0).get<double>(), o.at("uv").at(1).get<double>());
      obs.weight = o.at("weight").get<double>();
      frame.observations.push_back(obs);
    }
    cap.frames.push_back(std::move(frame));
  }
  // The sealed truth lives in its own file; a capture loaded from the public
  // record carries only what a real pipeline would see.
  return cap;
}

Json sealed_truth_json(const GeneratedCapture& capture, std::uint64_t public_checksum) {
  Json frames = Json::array();
  for (const FrameTruth& truth : capture.sealed.frames) {
    Json f = coeffs_to_json(truth.coeffs);
    f["axis_angle"] = {truth.axis_angle.x(), truth.axis_angle.y(), truth.axis_angle.z()};
    f["translation"] = {truth.translation.x(), truth.translation.y(), truth.translation.z()};
    frames.push_back(std::move(f));
  }
  Json j;
  j["capture_checksum"] = hex64(public_checksum);
  j["focal_cm"] = capture.sealed.focal_cm;
  j["focal_px"] = capture.sealed.focal_px;
  j["standoff"] = capture.sealed.standoff;
  j["t_z"] = capture.sealed.t_z;
  j["rho_analytic"] = capture.sealed.rho_analytic;
  j["rho_pseudo_equiv"] = capture.sealed.rho_pseudo_equiv;
  j["frames"] = std::move(frames);
  return j;
}

SealedTruth sealed_truth_from_json(const Json& j) {
  SealedTruth sealed;
  sealed.focal_cm = j.at("focal_cm").get<double>();
  sealed.focal_px = j.at("focal_px").get<double>();
  sealed.standoff = j.at("standoff").get<double>();
  sealed.t_z = j.at("t_z").get<double>();
  sealed.rho_analytic = j.at("rho_analytic").get<double>();
  sealed.rho_pseudo_equiv = j.at("rho_pseudo_equiv").get<double>();
  for (const Json& f : j.at("frames")) {
    FrameTruth truth;
    truth.coeffs = coeffs_from_json(f);
    truth.axis_angle = Vec3(f.at("axis_angle").at(0).get<double>(),
                            f.at("axis_angle").at(1).get<double>(),
                            f.at("axis_angle").at(2).get<double>());
    truth.translation = Vec3(f.at("translation").at(0).get<double>(),
                             f.at("translation").at(1).get<double>(),
                             f.at("translation").at(2).get<double>());
    sealed.frames.push_back(std::move(truth));
  }
  return sealed;
}

CaptureFiles write_capture(const std::string& dir, const GeneratedCapture& capture) {
  std::filesystem::create_directories(dir);
  CaptureFiles files;
  files.public_path = dir + "/" + capture.scenario.name + ".capture.json";
  files.sealed_path = dir + "/" + capture.scenario.name + ".sealed.json";
  const std::string text = json_to_string(capture_public_json(capture));
  atomic_write_file(files.public_path, text);
  write_json(files.sealed_path, sealed_truth_json(capture, fnv1a64(text)));
  return files;
}

// --- benchmark ---------------------------------------------------------------

namespace {

int resolve_threads(int requested, int n_tasks) {
  int threads = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 0) threads = 1;
  if (const char* env = std::getenv("PSEUDOCAM_THREADS")) {
    const int limit = std::atoi(env);
    if (limit > 0) threads = std::min(threads, limit);
  }
  return std::max(1, std::min(threads, std::max(1, n_tasks)));
}

template <typename Fn>
void parallel_frames(int n, int threads, Fn&& fn) {
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i; (i = next.fetch_add(1)) < n;) fn(i);
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
}

FrameMetrics frame_metrics(const GeneratedCapture& capture, int frame, CameraKind kind,
                           const FitResult& result, bool fit_ok) {
  FrameMetrics m;
  m.frame = frame;
  m.fit_ok = fit_ok;
  m.rmse_all = m.rmse_jawline = m.rmse_facial = kNaN;
  m.sigma_ratio = kNaN;
  if (!fit_ok) return m;

  m.converged = result.converged;
  m.iterations = result.iterations;
  m.scale_or_focal = result.state.scale_or_focal;
  m.rho = result.state.rho;
  m.t_z = result.state.t_z;
  if (const auto it = result.diagnostics.find("sf_rt_sigma_ratio");
      it != result.diagnostics.end()) {
    m.sigma_ratio = it->second;
  }

  const MorphableModel& model = capture.model;
  const Mat3 rot = rotation_matrix(result.state.axis_angle);
  const Vec3 t = kind == CameraKind::Perspective
                     ? Vec3(result.state.t_xy.x(), result.state.t_xy.y(), result.state.t_z)
                     : Vec3(result.state.t_xy.x(), result.state.t_xy.y(), 0.0);
  double sum_all = 0.0, sum_jaw = 0.0, sum_facial = 0.0;
  int n_all = 0, n_jaw = 0, n_facial = 0;
  for (const Observation& obs : capture.frames[frame].observations) {
    const int vertex = model.landmark_indices[obs.landmark];
    const Vec3 q = evaluate_vertex(model, result.state.coeffs, vertex);
    const Vec3 v = rot * q + t;
    Vec2 uv;
    try {
      switch (kind) {
        case CameraKind::Perspective:
          uv = project_point_perspective(result.state.scale_or_focal, v, obs.landmark).uv;
          break;
        case CameraKind::Orthographic:
          uv = project_point_orthographic(result.state.scale_or_focal, v, obs.landmark).uv;
          break;
        case CameraKind::PseudoPerspective:
          uv = project_point_pseudo(result.state.scale_or_focal, result.state.rho, v,
                                    obs.landmark)
                   .uv;
          break;
      }
    } catch (const std::domain_error&) {
      return m;  // reprojection impossible; RMSE stays NaN
    }
    const double e2 = (uv - obs.uv).squaredNorm();
    sum_all += e2;
    ++n_all;
    const bool is_jaw = std::find(model.regions.jawline.begin(), model.regions.jawline.end(),
                                  vertex) != model.regions.jawline.end();
    if (is_jaw) {
      sum_jaw += e2;
      ++n_jaw;
    } else {
      sum_facial += e2;
      ++n_facial;
    }
  }
  if (n_all > 0) m.rmse_all = std::sqrt(sum_all / n_all);
  if (n_jaw > 0) m.rmse_jawline = std::sqrt(sum_jaw / n_jaw);
  if (n_facial > 0) m.rmse_facial = std::sqrt(sum_facial / n_facial);
  return m;
}

MethodSummary summarize(CameraKind kind, std::vector<FrameMetrics> frames) {
  MethodSummary s;
  s.kind = kind;
  std::vector<double> all, jaw, facial, rho, sf, tz, iters, sigma;
  int converged = 0;
  for (const FrameMetrics& m : frames) {
    all.push_back(m.rmse_all);
    jaw.push_back(m.rmse_jawline);
    facial.push_back(m.rmse_facial);
    if (m.fit_ok) {
      rho.push_back(m.rho);
      sf.push_back(m.scale_or_focal);
      tz.push_back(m.t_z);
      iters.push_back(m.iterations);
    }
    sigma.push_back(m.sigma_ratio);
    if (m.converged) ++converged;
  }
  s.mean_rmse_all = finite_mean(all);
  s.mean_rmse_jawline = finite_mean(jaw);
  s.mean_rmse_facial = finite_mean(facial);
  s.mean_rho = finite_mean(rho);
  s.mean_scale_or_focal = finite_mean(sf);
  s.mean_tz = finite_mean(tz);
  s.mean_iterations = finite_mean(iters);
  s.mean_sigma_ratio = finite_mean(sigma);
  s.convergence_rate = frames.empty() ? 0.0 : double(converged) / double(frames.size());
  s.frames = std::move(frames);
  return s;
}

}  // namespace

const MethodSummary& BenchReport::method(CameraKind kind) const {
  for (const MethodSummary& m : methods) {
    if (m.kind == kind) return m;
  }
  throw std::invalid_argument("bench report has no entry for that camera kind");
}

BenchReport run_bench(const GeneratedCapture& capture, const BenchOptions& options) {
  const int n = static_cast<int>(capture.frames.size());
  const int threads = resolve_threads(options.threads, n);

  std::vector<FitResult> ortho(n), pseudo(n), persp(n);
  std::vector<char> ortho_ok(n, 0), pseudo_ok(n, 0), persp_ok(n, 0);

  parallel_frames(n, threads, [&](int i) {
    const FitProblem problem = problem_for_frame(capture, i, CameraKind::Orthographic);
    try {
      ortho[i] = solve(problem, initial_state_from_observations(problem), options.fit_options);
      ortho_ok[i] = 1;
    } catch (const std::exception&) {
      ortho_ok[i] = 0;
    }
  });

  parallel_frames(n, threads, [&](int i) {
    const FitProblem problem = problem_for_frame(capture, i, CameraKind::PseudoPerspective);
    try {
      pseudo[i] = staged_fit(problem, options.fit_options);
      pseudo_ok[i] = 1;
    } catch (const std::exception&) {
      pseudo_ok[i] = 0;
    }
  });

  const double tz0 = nominal_standoff_tz(capture.scenario, capture.model);
  parallel_frames(n, threads, [&](int i) {
    const FitProblem problem = problem_for_frame(capture, i, CameraKind::Perspective);
    try {
      const FitState seed =
          ortho_ok[i] ? ortho[i].state : initial_state_from_observations(problem);
      persp[i] = fit_perspective_joint(problem, perspective_seed_from_ortho(seed, tz0),
                                       options.fit_options);
      persp_ok[i] = 1;
    } catch (const std::exception&) {
      persp_ok[i] = 0;
    }
  });

  auto collect = [&](CameraKind kind, const std::vector<FitResult>& results,
                     const std::vector<char>& ok) {
    std::vector<FrameMetrics> metrics;
    metrics.reserve(n);
    for (int i = 0; i < n; ++i) {
      metrics.push_back(frame_metrics(capture, i, kind, results[i], ok[i] != 0));
    }
    return summarize(kind, std::move(metrics));
  };

  BenchReport report;
  report.scenario_name = capture.scenario.name;
  report.methods.push_back(collect(CameraKind::Orthographic, ortho, ortho_ok));
  report.methods.push_back(collect(CameraKind::PseudoPerspective, pseudo, pseudo_ok));
  report.methods.push_back(collect(CameraKind::Perspective, persp, persp_ok));
  return report;
}

std::string bench_report_markdown(const BenchReport& report) {
  std::string out = "# Benchmark: " + report.scenario_name + "\n\n";
  out +=
      "| method | RMSE all (px) | RMSE jawline | RMSE nose+other | conv. rate | mean iters | "
      "mean rho | mean S or f | mean t_z | sigma ratio |\n";
  out += "|---|---|---|---|---|---|---|---|---|---|\n";
  for (const MethodSummary& m : report.methods) {
    out += "| ";
    out += camera_kind_name(m.kind);
    out += " | " + format_f6(m.mean_rmse_all);
    out += " | " + format_f6(m.mean_rmse_jawline);
    out += " | " + format_f6(m.mean_rmse_facial);
    out += " | " + format_f6(m.convergence_rate);
    out += " | " + format_f6(m.mean_iterations);
    out += " | " + (m.kind == CameraKind::PseudoPerspective ? format_f6(m.mean_rho) : "-");
    out += " | " + format_f6(m.mean_scale_or_focal);
    out += " | " + (m.kind == CameraKind::Perspective ? format_f6(m.mean_tz) : "-");
    out += " | " + format_f6(m.mean_sigma_ratio);
    out += " |\n";
  }
  return out;
}

std::string bench_frames_csv(const BenchReport& report) {
  const MethodSummary& ortho = report.method(CameraKind::Orthographic);
  const MethodSummary& pseudo = report.method(CameraKind::PseudoPerspective);
  const MethodSummary& persp = report.method(CameraKind::Perspective);
  std::string out =
      "frame,orthographic_rmse,pseudo_rmse,perspective_rmse,orthographic_rmse_jawline,"
      "pseudo_rmse_jawline,perspective_rmse_jawline,orthographic_rmse_facial,"
      "pseudo_rmse_facial,perspective_rmse_facial,pseudo_rho,perspective_focal,perspective_tz\n";
  const std::size_t n = ortho.frames.size();
  for (std::size_t i = 0; i < n; ++i) {
    out += std::to_string(i);
    for (double v :
         {ortho.frames[i].rmse_all, pseudo.frames[i].rmse_all, persp.frames[i].rmse_all,
          ortho.frames[i].rmse_jawline, pseudo.frames[i].rmse_jawline,
          persp.frames[i].rmse_jawline, ortho.frames[i].rmse_facial,
          pseudo.frames[i].rmse_facial, persp.frames[i].rmse_facial, pseudo.frames[i].rho,
          persp.frames[i].scale_or_focal, persp.frames[i].t_z}) {
      out += ',';
      out += format_g17(v);
    }
    out += '\n';
  }
  return out;
}

std::string bench_gnuplot_script(const std::string& csv_name, const std::string& title) {
  std::string out;
  out += "set datafile separator ','\n";
  out += "set key outside\n";
  out += "set xlabel 'frame'\n";
  out += "set ylabel 'reprojection RMSE (px)'\n";
  out += "set title '" + title + "'\n";
  out += "plot '" + csv_name + "' using 1:2 with linespoints title 'orthographic', \\\n";
  out += "     '" + csv_name + "' using 1:3 with linespoints title 'pseudo-perspective', \\\n";
  out += "     '" + csv_name + "' using 1:4 with linespoints title 'perspective'\n";
  return out;
}

// --- focal/depth ambiguity scan ----------------------------------------------

AmbiguityScan ambiguity_scan(const FitProblem& problem, const FitState& center, int n_steps,
                             double span) {
  require(problem.camera_kind == CameraKind::Perspective,
          "ambiguity scan needs a perspective problem");
  require(n_steps >= 3, "ambiguity scan needs at least 3 grid steps");
  require(std::isfinite(span) && span > 1.0, "ambiguity scan span must exceed 1");

  AmbiguityScan scan;
  scan.factors.resize(n_steps);
  const double lo = std::log(1.0 / span), hi = std::log(span);
  for (int i = 0; i < n_steps; ++i) {
    const double t = n_steps == 1 ? 0.5 : double(i) / double(n_steps - 1);
    scan.factors[i] = std::exp(lo + t * (hi - lo));
  }
  const int mid = (n_steps - 1) / 2;
  if (n_steps % 2 == 1) scan.factors[mid] = 1.0;

  scan.cost.setConstant(n_steps, n_steps, kNaN);
  for (int i = 0; i < n_steps; ++i) {
    for (int j = 0; j < n_steps; ++j) {
      FitState state = center;
      state.scale_or_focal = center.scale_or_focal * scan.factors[i];
      state.t_z = center.t_z * scan.factors[j];
      try {
        scan.cost(i, j) =
            assemble_system(problem, state, /*with_jacobian=*/false, /*with_reg=*/true)
                .total_cost();
      } catch (const std::domain_error&) {
        // leave NaN: this grid point is geometrically infeasible
      }
    }
  }

  auto range_of = [&](auto&& value_at) {
    double lo_v = std::numeric_limits<double>::infinity();
    double hi_v = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_steps; ++i) {
      const double v = value_at(i);
      if (!std::isfinite(v)) continue;
      lo_v = std::min(lo_v, v);
      hi_v = std::max(hi_v, v);
    }
    return hi_v >= lo_v ? hi_v - lo_v : kNaN;
  };
  scan.diagonal_range = range_of([&](int i) { return scan.cost(i, i); });
  scan.axis_range = range_of([&](int i) { return scan.cost(i, mid); });
  if (std::isnan(scan.diagonal_range) || std::isnan(scan.axis_range)) {
    scan.flatness_ratio = kNaN;
  } else if (scan.axis_range > 0.0) {
    scan.flatness_ratio = scan.diagonal_range / scan.axis_range;
  } else {
    scan.flatness_ratio = scan.diagonal_range == 0.0
                              ? 0.0
                              : std::numeric_limits<double>::infinity();
  }
  return scan;
}

std::string ambiguity_scan_csv(const AmbiguityScan& scan, double f0, double tz0) {
  std::string out = "f,t_z,cost\n";
  const int n = static_cast<int>(scan.factors.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out += format_g17(f0 * scan.factors[i]);
      out += ',';
      out += format_g17(tz0 * scan.factors[j]);
      out += ',';
      out += format_g17(scan.cost(i, j));
      out += '\n';
    }
  }
  return out;
}

Json ambiguity_scan_json(const AmbiguityScan& scan) {
  Json rows = Json::array();
  const int n = static_cast<int>(scan.factors.size());
  for (int i = 0; i < n; ++i) {
    Json row = Json::array();
    for (int j = 0; j < n; ++j) row.push_back(scan.cost(i, j));
    rows.push_back(std::move(row));
  }
  Json j;
  j["factors"] = scan.factors;
  j["cost"] = std::move(rows);
  j["diagonal_range"] = scan.diagonal_range;
  j["axis_range"] = scan.axis_range;
  j["flatness_ratio"] = scan.flatness_ratio;
  return j;
}

}  // namespace pseudocam
