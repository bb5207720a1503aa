#pragma once

#include "pseudocam/rng.hpp"
#include "pseudocam/types.hpp"

#include <cstdint>
#include <vector>

namespace pseudocam {

/// Binary raster, row-major, data[y * width + x] in {0, 1}.
struct RasterMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  static RasterMask zeros(int width, int height);
  static RasterMask ones(int width, int height);

  std::uint8_t at(int x, int y) const;
  void set(int x, int y, std::uint8_t value);
  int count() const;
  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

/// Fills the convex hull of the given image-space points: a pixel is set when
/// its integer-coordinate center lies inside or on the hull. Four image
/// corners therefore produce an all-ones mask. Fewer than three distinct
/// non-collinear points give a degenerate hull and throw invalid_argument.
RasterMask face_mask_from_landmarks(const std::vector<Vec2>& points, int width, int height);

/// Morphological erosion by the closed disc dx^2 + dy^2 <= radius^2. Pixels
/// outside the image count as zero, so set regions retreat from the borders.
RasterMask erode(const RasterMask& mask, double radius);

/// Keeps a uniformly random subset of round(fraction * count) set pixels (all
/// subsets of that size equally likely) and clears the rest.
RasterMask keep_fraction(const RasterMask& mask, double fraction, SeededRng& rng);
RasterMask keep_fraction(const RasterMask& mask, double fraction, std::uint64_t seed);

/// Clears every pixel with (x - cx)^2 + (y - cy)^2 <= radius^2. A zero radius
/// clears at most the single pixel whose center coincides with (cx, cy).
RasterMask exclude_region(const RasterMask& mask, double cx, double cy, double radius);

/// Clears the union of discs of the given radius around every center point.
RasterMask exclude_region(const RasterMask& mask, const std::vector<Vec2>& centers,
                          double radius);

/// Pipeline defaults for guidance-mask construction; the two radii are
/// fractions of the landmark bounding-box diagonal.
struct GuidanceMaskOptions {
  double erode_fraction = 0.03;
  double exclude_fraction = 0.08;
  double keep_fraction = 0.01;
};

/// Sparse supervision mask for expression-encoder guidance: convex-hull face
/// mask, eroded away from the silhouette, with discs around the nose landmarks
/// removed, then randomly thinned to a small pixel fraction.
RasterMask smirk_guidance_mask(const std::vector<Vec2>& landmarks,
                               const std::vector<Vec2>& nose_landmarks, int width, int height,
                               SeededRng& rng, const GuidanceMaskOptions& options = {});
RasterMask smirk_guidance_mask(const std::vector<Vec2>& landmarks,
                               const std::vector<Vec2>& nose_landmarks, int width, int height,
                               std::uint64_t seed, const GuidanceMaskOptions& options = {});

}  // namespace pseudocam
