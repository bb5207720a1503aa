#include "pseudocam/serialization.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pseudocam {

namespace {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json array_from_vector(const Eigen::VectorXd& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd vector_from_array(const Json& arr, const char* what) {
  if (!arr.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
  Eigen::VectorXd v(arr.size());
  Eigen::Index i = 0;
  for (const Json& e : arr) v(i++) = e.get<double>();
  return v;
}

Json array_from_matrix(const Eigen::MatrixXd& m) {
  Json arr = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) arr.push_back(m(r, c));
  }
  return arr;
}

Eigen::MatrixXd matrix_from_array(const Json& arr, Eigen::Index rows, Eigen::Index cols,
                                  const char* what) {
  if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != rows * cols) {
    throw std::invalid_argument(std::string(what) + " has the wrong number of entries");
  }
  Eigen::MatrixXd m(rows, cols);
  Eigen::Index i = 0;
  for (const Json& e : arr) {
    m(i / cols, i % cols) = e.get<double>();
    ++i;
  }
  return m;
}

template <int N>
Eigen::Matrix<double, N, 1> fixed_from_array(const Json& arr, const char* what) {
  if (!arr.is_array() || arr.size() != N) {
    throw std::invalid_argument(std::string(what) + " must have " + std::to_string(N) +
                                " entries");
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v(i) = arr.at(i).get<double>();
  return v;
}

std::vector<int> ints_from_array(const Json& arr, const char* what) {
  if (!arr.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
  std::vector<int> out;
  out.reserve(arr.size());
  for (const Json& e : arr) out.push_back(e.get<int>());
  return out;
}

CameraKind camera_kind_from_name(const std::string& name) {
  if (name == "perspective") return CameraKind::Perspective;
  if (name == "orthographic") return CameraKind::Orthographic;
  if (name == "pseudo") return CameraKind::PseudoPerspective;
  throw std::invalid_argument("unknown camera kind: " + name);
}

Termination termination_from_name(const std::string& name) {
  if (name == "gradient_tol") return Termination::GradientTol;
  if (name == "step_tol") return Termination::StepTol;
  if (name == "max_iter") return Termination::MaxIterations;
  if (name == "singular_normal_equations") return Termination::SingularNormalEquations;
  throw std::invalid_argument("unknown termination reason: " + name);
}

}  // namespace

Json model_to_json(const MorphableModel& model) {
  Json regions;
  regions["jawline"] = model.regions.jawline;
  regions["nose"] = model.regions.nose;
  regions["other"] = model.regions.other;

  Json mean = Json::array();
  for (const Vec3& p : model.mean_shape) {
    mean.push_back(p.x());
    mean.push_back(p.y());
    mean.push_back(p.z());
  }

  Json j;
  j["n_vertices"] = model.n_vertices();
  j["n_beta"] = model.n_beta();
  j["n_psi"] = model.n_psi();
  j["n_theta"] = model.n_theta();
  j["mean_shape"] = std::move(mean);
  j["shape_basis"] = array_from_matrix(model.shape_basis);
  j["expression_basis"] = array_from_matrix(model.expression_basis);
  j["pose_corrective_basis"] = array_from_matrix(model.pose_corrective_basis);
  j["landmark_indices"] = model.landmark_indices;
  j["regions"] = std::move(regions);
  return j;
}

MorphableModel model_from_json(const Json& j) {
  const int n_vertices = j.at("n_vertices").get<int>();
  const int n_beta = j.at("n_beta").get<int>();
  const int n_psi = j.at("n_psi").get<int>();
  const int n_theta = j.at("n_theta").get<int>();
  if (n_vertices <= 0) throw std::invalid_argument("model n_vertices must be positive");

  MorphableModel model;
  const Json& mean = j.at("mean_shape");
  if (!mean.is_array() || static_cast<int>(mean.size()) != 3 * n_vertices) {
    throw std::invalid_argument("mean_shape has the wrong number of entries");
  }
  model.mean_shape.resize(n_vertices);
  for (int k = 0; k < n_vertices; ++k) {
    model.mean_shape[k] = Vec3(mean.at(3 * k).get<double>(), mean.at(3 * k + 1).get<double>(),
                               mean.at(3 * k + 2).get<double>());
  }
  model.shape_basis = matrix_from_array(j.at("shape_basis"), 3 * n_vertices, n_beta, "shape_basis");
  model.expression_basis =
      matrix_from_array(j.at("expression_basis"), 3 * n_vertices, n_psi, "expression_basis");
  model.pose_corrective_basis = matrix_from_array(j.at("pose_corrective_basis"), 3 * n_vertices,
                                                  n_theta, "pose_corrective_basis");
  model.landmark_indices = ints_from_array(j.at("landmark_indices"), "landmark_indices");
  const Json& regions = j.at("regions");
  model.regions.jawline = ints_from_array(regions.at("jawline"), "regions.jawline");
  model.regions.nose = ints_from_array(regions.at("nose"), "regions.nose");
  model.regions.other = ints_from_array(regions.at("other"), "regions.other");
  model.validate();
  return model;
}

Json camera_to_json(const CameraParams& camera) {
  Json j;
  if (const auto* p = std::get_if<PerspectiveCamera>(&camera)) {
    j["model"] = "perspective";
    j["rotation_axis_angle"] = {p->rotation.axis_angle.x(), p->rotation.axis_angle.y(),
                                p->rotation.axis_angle.z()};
    j["translation"] = {p->translation.x(), p->translation.y(), p->translation.z()};
    j["f"] = p->focal;
  } else if (const auto* o = std::get_if<OrthographicCamera>(&camera)) {
    j["model"] = "orthographic";
    j["rotation_axis_angle"] = {o->rotation.axis_angle.x(), o->rotation.axis_angle.y(),
                                o->rotation.axis_angle.z()};
    j["translation"] = {o->translation.x(), o->translation.y()};
    j["S"] = o->scale;
  } else {
    const auto& s = std::get<PseudoPerspectiveCamera>(camera);
    j["model"] = "pseudo";
    j["rotation_axis_angle"] = {s.rotation.axis_angle.x(), s.rotation.axis_angle.y(),
                                s.rotation.axis_angle.z()};
    j["translation"] = {s.translation.x(), s.translation.y()};
    j["S"] = s.scale;
    j["rho"] = s.rho;
  }
  return j;
}

CameraParams camera_from_json(const Json& j) {
  const CameraKind kind = camera_kind_from_name(j.at("model").get<std::string>());
  const Vec3 axis_angle = fixed_from_array<3>(j.at("rotation_axis_angle"), "rotation_axis_angle");
  switch (kind) {
    case CameraKind::Perspective: {
      PerspectiveCamera cam;
      cam.rotation.axis_angle = axis_angle;
      cam.translation = fixed_from_array<3>(j.at("translation"), "translation");
      cam.focal = j.at("f").get<double>();
      return cam;
    }
    case CameraKind::Orthographic: {
      OrthographicCamera cam;
      cam.rotation.axis_angle = axis_angle;
      cam.translation = fixed_from_array<2>(j.at("translation"), "translation");
      cam.scale = j.at("S").get<double>();
      return cam;
    }
    case CameraKind::PseudoPerspective: {
      PseudoPerspectiveCamera cam;
      cam.rotation.axis_angle = axis_angle;
      cam.translation = fixed_from_array<2>(j.at("translation"), "translation");
      cam.scale = j.at("S").get<double>();
      cam.rho = j.at("rho").get<double>();
      return cam;
    }
  }
  throw std::invalid_argument("unknown camera model");
}

Json geometry_to_json(const CaptureGeometry& geometry) {
  Json j;
  j["sensor_width"] = geometry.sensor_width;
  j["face_width"] = geometry.face_width;
  j["standoff"] = geometry.standoff;
  j["frame_fill"] = geometry.frame_fill;
  return j;
}

CaptureGeometry geometry_from_json(const Json& j) {
  CaptureGeometry geometry;
  geometry.sensor_width = j.at("sensor_width").get<double>();
  geometry.face_width = j.at("face_width").get<double>();
  geometry.standoff = j.at("standoff").get<double>();
  geometry.frame_fill = j.at("frame_fill").get<double>();
  geometry.validate();
  return geometry;
}

Json problem_to_json(const FitProblem& problem) {
  Json obs_arr = Json::array();
  for (const Observation& obs : problem.observations) {
    Json o;
    o["landmark"] = obs.landmark;
    o["uv"] = {obs.uv.x(), obs.uv.y()};
    o["weight"] = obs.weight;
    obs_arr.push_back(std::move(o));
  }
  Json active;
  active["beta"] = problem.active.beta;
  active["psi"] = problem.active.psi;
  active["theta_c"] = problem.active.theta_c;
  active["rotation"] = problem.active.rotation;
  active["translation"] = problem.active.translation;
  active["scale_or_focal"] = problem.active.scale_or_focal;
  active["rho_or_tz"] = problem.active.rho_or_tz;
  Json region_weights;
  region_weights["jawline"] = problem.region_weights.jawline;
  region_weights["nose"] = problem.region_weights.nose;
  region_weights["other"] = problem.region_weights.other;

  Json j;
  j["camera_kind"] = camera_kind_name(problem.camera_kind);
  j["active"] = std::move(active);
  j["region_weights"] = std::move(region_weights);
  j["rho_prior"] = problem.rho_prior;
  j["lambda_p"] = problem.lambda_p;
  j["rho_max"] = problem.rho_max;
  j["coeff_l2"] = problem.coeff_l2;
  j["observations"] = std::move(obs_arr);
  j["model"] = model_to_json(problem.model);
  return j;
}

FitProblem problem_from_json(const Json& j) {
  FitProblem problem;
  problem.camera_kind = camera_kind_from_name(j.at("camera_kind").get<std::string>());
  const Json& active = j.at("active");
  problem.active.beta = active.at("beta").get<bool>();
  problem.active.psi = active.at("psi").get<bool>();
  problem.active.theta_c = active.at("theta_c").get<bool>();
  problem.active.rotation = active.at("rotation").get<bool>();
  problem.active.translation = active.at("translation").get<bool>();
  problem.active.scale_or_focal = active.at("scale_or_focal").get<bool>();
  problem.active.rho_or_tz = active.at("rho_or_tz").get<bool>();
  const Json& rw = j.at("region_weights");
  problem.region_weights.jawline = rw.at("jawline").get<double>();
  problem.region_weights.nose = rw.at("nose").get<double>();
  problem.region_weights.other = rw.at("other").get<double>();
  problem.rho_prior = j.at("rho_prior").get<double>();
  problem.lambda_p = j.at("lambda_p").get<double>();
  problem.rho_max = j.at("rho_max").get<double>();
  problem.coeff_l2 = j.at("coeff_l2").get<double>();
  for (const Json& o : j.at("observations")) {
    Observation obs;
    obs.landmark = o.at("landmark").get<int>();
    obs.uv = fixed_from_array<2>(o.at("uv"), "observation uv");
    obs.weight = o.at("weight").get<double>();
    problem.observations.push_back(obs);
  }
  problem.model = model_from_json(j.at("model"));
  problem.validate();
  return problem;
}

Json result_to_json(const FitResult& result) {
  Json state;
  state["axis_angle"] = {result.state.axis_angle.x(), result.state.axis_angle.y(),
                         result.state.axis_angle.z()};
  state["t_xy"] = {result.state.t_xy.x(), result.state.t_xy.y()};
  state["t_z"] = result.state.t_z;
  state["scale_or_focal"] = result.state.scale_or_focal;
  state["rho"] = result.state.rho;

  Json coeffs;
  coeffs["beta"] = array_from_vector(result.coefficients.beta);
  coeffs["psi"] = array_from_vector(result.coefficients.psi);
  coeffs["theta_c"] = array_from_vector(result.coefficients.theta_c);

  Json term;
  term["landmark"] = result.term_costs.landmark;
  term["rho_prior"] = result.term_costs.rho_prior;
  term["coeff_reg"] = result.term_costs.coeff_reg;

  Json j;
  j["camera_kind"] = camera_kind_name(result.camera_kind);
  j["camera"] = camera_to_json(result.camera);
  j["state"] = std::move(state);
  j["coefficients"] = std::move(coeffs);
  j["final_cost"] = result.final_cost;
  j["term_costs"] = std::move(term);
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["termination"] = termination_name(result.termination_reason);
  j["cost_trajectory"] = result.cost_trajectory;
  j["diagnostics"] = result.diagnostics;
  return j;
}

FitResult result_from_json(const Json& j) {
  FitResult result;
  result.camera_kind = camera_kind_from_name(j.at("camera_kind").get<std::string>());
  result.camera = camera_from_json(j.at("camera"));
  const Json& state = j.at("state");
  result.state.axis_angle = fixed_from_array<3>(state.at("axis_angle"), "axis_angle");
  result.state.t_xy = fixed_from_array<2>(state.at("t_xy"), "t_xy");
  result.state.t_z = state.at("t_z").get<double>();
  result.state.scale_or_focal = state.at("scale_or_focal").get<double>();
  result.state.rho = state.at("rho").get<double>();
  const Json& coeffs = j.at("coefficients");
  result.coefficients.beta = vector_from_array(coeffs.at("beta"), "beta");
  result.coefficients.psi = vector_from_array(coeffs.at("psi"), "psi");
  result.coefficients.theta_c = vector_from_array(coeffs.at("theta_c"), "theta_c");
  result.state.coeffs = result.coefficients;
  result.final_cost = j.at("final_cost").get<double>();
  const Json& term = j.at("term_costs");
  result.term_costs.landmark = term.at("landmark").get<double>();
  result.term_costs.rho_prior = term.at("rho_prior").get<double>();
  result.term_costs.coeff_reg = term.at("coeff_reg").get<double>();
  result.iterations = j.at("iterations").get<int>();
  result.converged = j.at("converged").get<bool>();
  result.termination_reason = termination_from_name(j.at("termination").get<std::string>());
  result.cost_trajectory = j.at("cost_trajectory").get<std::vector<double>>();
  result.diagnostics = j.at("diagnostics").get<std::map<std::string, double>>();
  return result;
}

Json mask_to_rle_json(const RasterMask& mask) {
  Json runs = Json::array();
  const int first = mask.data.empty() ? 0 : mask.data.front();
  std::uint8_t current = static_cast<std::uint8_t>(first);
  std::uint64_t length = 0;
  for (std::uint8_t px : mask.data) {
    if (px == current) {
      ++length;
    } else {
      runs.push_back(length);
      current = px;
      length = 1;
    }
  }
  if (length > 0) runs.push_back(length);

  Json j;
  j["width"] = mask.width;
  j["height"] = mask.height;
  j["order"] = "row-major";
  j["first"] = first;
  j["runs"] = std::move(runs);
  return j;
}

RasterMask mask_from_rle_json(const Json& j) {
  const int width = j.at("width").get<int>();
  const int height = j.at("height").get<int>();
  RasterMask mask = RasterMask::zeros(width, height);
  std::uint8_t value = j.at("first").get<int>() ? 1 : 0;
  std::size_t at = 0;
  for (const Json& run : j.at("runs")) {
    const std::uint64_t length = run.get<std::uint64_t>();
    if (at + length > mask.data.size()) {
      throw std::invalid_argument("mask run lengths exceed the raster size");
    }
    std::fill_n(mask.data.begin() + at, length, value);
    at += length;
    value = 1 - value;
  }
  if (at != mask.data.size()) {
    throw std::invalid_argument("mask run lengths do not cover the raster");
  }
  return mask;
}

std::string mask_to_pgm(const RasterMask& mask) {
  std::string out = "P5\n" + std::to_string(mask.width) + " " + std::to_string(mask.height) +
                    "\n255\n";
  out.reserve(out.size() + mask.data.size());
  for (std::uint8_t px : mask.data) out.push_back(px ? char(255) : char(0));
  return out;
}

RasterMask mask_from_pgm(const std::string& bytes) {
  std::istringstream in(bytes);
  std::string magic;
  int width = 0, height = 0, maxval = 0;
  in >> magic >> width >> height >> maxval;
  if (magic != "P5" || maxval <= 0 || maxval > 255) {
    throw std::invalid_argument("not a supported binary PGM");
  }
  in.get();  // single whitespace byte after the header
  RasterMask mask = RasterMask::zeros(width, height);
  for (std::size_t i = 0; i < mask.data.size(); ++i) {
    const int c = in.get();
    if (c == EOF) throw std::invalid_argument("PGM data is truncated");
    mask.data[i] = c > maxval / 2 ? 1 : 0;
  }
  return mask;
}

std::string landmarks_to_csv(const std::vector<Vec2>& points) {
  std::string out = "index,u,v\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_g17(points[i].x());
    out += ',';
    out += format_g17(points[i].y());
    out += '\n';
  }
  return out;
}

std::vector<Vec2> landmarks_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "index,u,v") {
    throw std::invalid_argument("landmark CSV must start with the header index,u,v");
  }
  std::vector<Vec2> points;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    if (!std::getline(row, cell, ',')) throw std::invalid_argument("bad landmark CSV row");
    Vec2 p;
    for (int c = 0; c < 2; ++c) {
      if (!std::getline(row, cell, ',')) throw std::invalid_argument("bad landmark CSV row");
      p(c) = std::stod(cell);
    }
    points.push_back(p);
  }
  return points;
}

std::string cost_trajectory_to_csv(const std::vector<double>& costs) {
  std::string out = "iteration,cost\n";
  for (std::size_t i = 0; i < costs.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_g17(costs[i]);
    out += '\n';
  }
  return out;
}

std::string obj_from_vertices(const std::vector<Vec3>& vertices) {
  std::string out;
  for (const Vec3& v : vertices) {
    out += "v ";
    out += format_g17(v.x());
    out += ' ';
    out += format_g17(v.y());
    out += ' ';
    out += format_g17(v.z());
    out += '\n';
  }
  return out;
}

std::vector<Vec3> vertices_from_obj(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Vec3> vertices;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string tag;
    if (!(row >> tag) || tag != "v") continue;
    Vec3 p;
    if (!(row >> p.x() >> p.y() >> p.z())) {
      throw std::invalid_argument("malformed OBJ vertex line: " + line);
    }
    vertices.push_back(p);
  }
  return vertices;
}

std::vector<Vec3> points3d_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "index,x,y,z") {
    throw std::invalid_argument("3D point CSV must start with the header index,x,y,z");
  }
  std::vector<Vec3> points;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    if (!std::getline(row, cell, ',')) throw std::invalid_argument("bad 3D point CSV row");
    Vec3 p;
    for (int c = 0; c < 3; ++c) {
      if (!std::getline(row, cell, ',')) throw std::invalid_argument("bad 3D point CSV row");
      p(c) = std::stod(cell);
    }
    points.push_back(p);
  }
  return points;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (!in.good() && !in.eof()) throw std::runtime_error("failed while reading file: " + path);
  return buffer.str();
}

void atomic_write_file(const std::string& path, const std::string& content) {
  static std::atomic<std::uint64_t> counter{0};
  const std::string temp = path + ".tmp" + std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot create file: " + temp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out.good()) {
      out.close();
      std::filesystem::remove(temp);
      throw std::runtime_error("failed while writing file: " + temp);
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp);
    throw std::runtime_error("cannot move " + temp + " into place: " + ec.message());
  }
}

Json load_json(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw std::runtime_error("failed to parse " + path + ": " + e.what());
  }
}

std::string json_to_string(const Json& j) { return j.dump(2) + "\n"; }

void write_json(const std::string& path, const Json& j) {
  atomic_write_file(path, json_to_string(j));
}

}  // namespace pseudocam
