#pragma once

#include "pseudocam/fitting.hpp"
#include "pseudocam/masking.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pseudocam {

using Json = nlohmann::ordered_json;

Json model_to_json(const MorphableModel& model);
MorphableModel model_from_json(const Json& j);

/// Cameras serialize with a "model" tag ("perspective" | "orthographic" |
/// "pseudo"); the parameter set follows the tag: f | S | (S, rho).
Json camera_to_json(const CameraParams& camera);
CameraParams camera_from_json(const Json& j);

Json geometry_to_json(const CaptureGeometry& geometry);
CaptureGeometry geometry_from_json(const Json& j);

/// Problems embed their model, so a problem file is self-contained.
Json problem_to_json(const FitProblem& problem);
FitProblem problem_from_json(const Json& j);

Json result_to_json(const FitResult& result);
FitResult result_from_json(const Json& j);

/// Run-length encoding of the row-major flattened mask: "first" is the value
/// of pixel (0, 0) and "runs" are the alternating run lengths.
Json mask_to_rle_json(const RasterMask& mask);
RasterMask mask_from_rle_json(const Json& j);

/// Binary PGM (P5, maxval 255); set pixels are 255.
std::string mask_to_pgm(const RasterMask& mask);
RasterMask mask_from_pgm(const std::string& bytes);

/// CSV with header "index,u,v"; coordinates printed with %.17g so a
/// read-back reproduces the doubles exactly.
std::string landmarks_to_csv(const std::vector<Vec2>& points);
std::vector<Vec2> landmarks_from_csv(const std::string& text);

/// CSV with header "iteration,cost".
std::string cost_trajectory_to_csv(const std::vector<double>& costs);

/// Vertex-only Wavefront OBJ ("v x y z" lines, %.17g).
std::string obj_from_vertices(const std::vector<Vec3>& vertices);

/// Reads the "v x y z" lines of an OBJ; every other line type is ignored.
std::vector<Vec3> vertices_from_obj(const std::string& text);

/// CSV 3D points with header "index,x,y,z".
std::vector<Vec3> points3d_from_csv(const std::string& text);

/// FNV-1a, 64-bit.
std::uint64_t fnv1a64(std::string_view bytes);

std::string read_file(const std::string& path);

/// Writes through a temporary in the same directory and renames it over the
/// target, so readers never observe a half-written file.
void atomic_write_file(const std::string& path, const std::string& content);

Json load_json(const std::string& path);

/// Canonical on-disk form: two-space indent plus trailing newline. The CLI
/// and library share this function, so their outputs are byte-identical.
void write_json(const std::string& path, const Json& j);
std::string json_to_string(const Json& j);

}  // namespace pseudocam
