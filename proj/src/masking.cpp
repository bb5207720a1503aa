#include "pseudocam/masking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pseudocam {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

void check_dims(int width, int height) {
  require(width > 0 && height > 0, "mask dimensions must be positive");
}

// Monotone-chain convex hull, counter-clockwise, no duplicate endpoint.
// Collinear input degenerates to 1 or 2 points.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) { return a == b; }),
            pts.end());
  const int n = static_cast<int>(pts.size());
  if (n <= 2) return pts;

  const auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Vec2> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (int i = n - 2, lower = k + 1; i >= 0; --i) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

constexpr double kRasterEps = 1e-9;

}  // namespace

RasterMask RasterMask::zeros(int width, int height) {
  check_dims(width, height);
  RasterMask mask;
  mask.width = width;
  mask.height = height;
  mask.data.assign(static_cast<std::size_t>(width) * height, 0);
  return mask;
}

RasterMask RasterMask::ones(int width, int height) {
  RasterMask mask = zeros(width, height);
  std::fill(mask.data.begin(), mask.data.end(), std::uint8_t{1});
  return mask;
}

std::uint8_t RasterMask::at(int x, int y) const {
  if (!in_bounds(x, y)) throw std::out_of_range("mask access outside raster");
  return data[static_cast<std::size_t>(y) * width + x];
}

void RasterMask::set(int x, int y, std::uint8_t value) {
  if (!in_bounds(x, y)) throw std::out_of_range("mask access outside raster");
  data[static_cast<std::size_t>(y) * width + x] = value ? 1 : 0;
}

int RasterMask::count() const {
  return static_cast<int>(std::count(data.begin(), data.end(), std::uint8_t{1}));
}

RasterMask face_mask_from_landmarks(const std::vector<Vec2>& points, int width, int height) {
  check_dims(width, height);
  require(points.size() >= 3, "face mask needs at least three landmarks");
  for (const Vec2& p : points) {
    require(p.allFinite(), "face mask landmarks must be finite");
  }

  const std::vector<Vec2> hull = convex_hull(points);
  require(hull.size() >= 3, "face landmarks are collinear; the hull is degenerate");

  RasterMask mask = RasterMask::zeros(width, height);
  double y_lo = hull[0].y(), y_hi = hull[0].y();
  for (const Vec2& p : hull) {
    y_lo = std::min(y_lo, p.y());
    y_hi = std::max(y_hi, p.y());
  }
  const int y_start = std::max(0, static_cast<int>(std::ceil(y_lo - kRasterEps)));
  const int y_end = std::min(height - 1, static_cast<int>(std::floor(y_hi + kRasterEps)));

  const int n = static_cast<int>(hull.size());
  for (int y = y_start; y <= y_end; ++y) {
    double x_lo = std::numeric_limits<double>::infinity();
    double x_hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const Vec2& p = hull[i];
      const Vec2& q = hull[(i + 1) % n];
      const double dy = q.y() - p.y();
      if (std::abs(dy) <= kRasterEps) {
        if (std::abs(p.y() - y) <= kRasterEps) {
          x_lo = std::min({x_lo, p.x(), q.x()});
          x_hi = std::max({x_hi, p.x(), q.x()});
        }
        continue;
      }
      const double t = (y - p.y()) / dy;
      if (t < -kRasterEps || t > 1.0 + kRasterEps) continue;
      const double x = p.x() + t * (q.x() - p.x());
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
    }
    if (!(x_lo <= x_hi)) continue;
    const int x_start = std::max(0, static_cast<int>(std::ceil(x_lo - kRasterEps)));
    const int x_end = std::min(width - 1, static_cast<int>(std::floor(x_hi + kRasterEps)));
    for (int x = x_start; x <= x_end; ++x) {
      mask.data[static_cast<std::size_t>(y) * width + x] = 1;
    }
  }
  return mask;
}

RasterMask erode(const RasterMask& mask, double radius) {
  check_dims(mask.width, mask.height);
  require(std::isfinite(radius) && radius >= 0.0, "erosion radius must be finite and >= 0");

  const int w = mask.width, h = mask.height;
  const int r = static_cast<int>(std::floor(radius));
  // Half-width of the disc row at vertical offset dy.
  std::vector<int> half(2 * r + 1);
  for (int dy = -r; dy <= r; ++dy) {
    half[dy + r] = static_cast<int>(std::floor(std::sqrt(radius * radius - double(dy) * dy)));
  }

  // Row-wise prefix sums make each "span is all ones" test O(1).
  std::vector<int> prefix(static_cast<std::size_t>(h) * (w + 1), 0);
  for (int y = 0; y < h; ++y) {
    int* row = prefix.data() + static_cast<std::size_t>(y) * (w + 1);
    const std::uint8_t* src = mask.data.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) row[x + 1] = row[x] + src[x];
  }

  RasterMask out = RasterMask::zeros(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool keep = true;
      for (int dy = -r; keep && dy <= r; ++dy) {
        const int yy = y + dy;
        const int hw = half[dy + r];
        const int x0 = x - hw, x1 = x + hw;
        if (yy < 0 || yy >= h || x0 < 0 || x1 >= w) {
          keep = false;
          break;
        }
        const int* row = prefix.data() + static_cast<std::size_t>(yy) * (w + 1);
        keep = (row[x1 + 1] - row[x0]) == (x1 - x0 + 1);
      }
      if (keep) out.data[static_cast<std::size_t>(y) * w + x] = 1;
    }
  }
  return out;
}

RasterMask keep_fraction(const RasterMask& mask, double fraction, SeededRng& rng) {
  check_dims(mask.width, mask.height);
  require(std::isfinite(fraction) && fraction >= 0.0 && fraction <= 1.0,
          "keep fraction must lie in [0, 1]");

  std::vector<std::size_t> set_bits;
  for (std::size_t i = 0; i < mask.data.size(); ++i) {
    if (mask.data[i]) set_bits.push_back(i);
  }
  const std::size_t n = set_bits.size();
  const std::size_t k =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::llround(fraction * double(n))));

  // Partial Fisher-Yates: the first k entries end up a uniform k-subset.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_below(std::uint64_t(n - i)));
    std::swap(set_bits[i], set_bits[j]);
  }

  RasterMask out = RasterMask::zeros(mask.width, mask.height);
  for (std::size_t i = 0; i < k; ++i) out.data[set_bits[i]] = 1;
  return out;
}

RasterMask keep_fraction(const RasterMask& mask, double fraction, std::uint64_t seed) {
  SeededRng rng(seed);
  return keep_fraction(mask, fraction, rng);
}

RasterMask exclude_region(const RasterMask& mask, double cx, double cy, double radius) {
  check_dims(mask.width, mask.height);
  require(std::isfinite(cx) && std::isfinite(cy), "exclusion center must be finite");
  require(std::isfinite(radius) && radius >= 0.0, "exclusion radius must be finite and >= 0");

  RasterMask out = mask;
  const int x_start = std::max(0, static_cast<int>(std::ceil(cx - radius)));
  const int x_end = std::min(mask.width - 1, static_cast<int>(std::floor(cx + radius)));
  const int y_start = std::max(0, static_cast<int>(std::ceil(cy - radius)));
  const int y_end = std::min(mask.height - 1, static_cast<int>(std::floor(cy + radius)));
  const double r2 = radius * radius;
  for (int y = y_start; y <= y_end; ++y) {
    for (int x = x_start; x <= x_end; ++x) {
      const double dx = x - cx, dy = y - cy;
      if (dx * dx + dy * dy <= r2) {
        out.data[static_cast<std::size_t>(y) * mask.width + x] = 0;
      }
    }
  }
  return out;
}

RasterMask exclude_region(const RasterMask& mask, const std::vector<Vec2>& centers,
                          double radius) {
  RasterMask out = mask;
  for (const Vec2& c : centers) out = exclude_region(out, c.x(), c.y(), radius);
  return out;
}

RasterMask smirk_guidance_mask(const std::vector<Vec2>& landmarks,
                               const std::vector<Vec2>& nose_landmarks, int width, int height,
                               SeededRng& rng, const GuidanceMaskOptions& options) {
  require(options.erode_fraction >= 0.0 && options.exclude_fraction >= 0.0,
          "guidance mask radius fractions must be >= 0");

  RasterMask mask = face_mask_from_landmarks(landmarks, width, height);

  Vec2 lo = landmarks.front(), hi = lo;
  for (const Vec2& p : landmarks) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double diag = (hi - lo).norm();

  mask = erode(mask, options.erode_fraction * diag);
  mask = exclude_region(mask, nose_landmarks, options.exclude_fraction * diag);
  return keep_fraction(mask, options.keep_fraction, rng);
}

RasterMask smirk_guidance_mask(const std::vector<Vec2>& landmarks,
                               const std::vector<Vec2>& nose_landmarks, int width, int height,
                               std::uint64_t seed, const GuidanceMaskOptions& options) {
  SeededRng rng(seed);
  return smirk_guidance_mask(landmarks, nose_landmarks, width, height, rng, options);
}

}  // namespace pseudocam
