#pragma once

// Brute-force reference computations. Each one takes a different route from
// the library code it checks and is deliberately slow and direct.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "vafm/vafm.hpp"

namespace vafm::oracle {

/// Moller-Trumbore, two-sided; true with t > 0.
inline bool ray_hits_triangle(Vec3 o, Vec3 d, Vec3 a, Vec3 b, Vec3 c) {
  const Vec3 e1 = b - a, e2 = c - a;
  const Vec3 p = cross(d, e2);
  const double det = dot(e1, p);
  if (det == 0.0) return false;
  const double inv = 1.0 / det;
  const Vec3 s = o - a;
  const double u = dot(s, p) * inv;
  if (u < 0.0 || u > 1.0) return false;
  const Vec3 q = cross(s, e1);
  const double v = dot(d, q) * inv;
  if (v < 0.0 || u + v > 1.0) return false;
  return dot(e2, q) * inv > 0.0;
}

/// Parity of crossings along a fixed oblique ray (not an axis scanline).
inline bool point_in_mesh(const TriangleMesh& mesh, Vec3 p) {
  const Vec3 d{0.5773502691896257, 0.3141592653589793, 0.7536287255471271};
  int hits = 0;
  for (const auto& t : mesh.triangles) {
    hits += ray_hits_triangle(p, d, mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
  }
  return hits % 2 == 1;
}

/// Per-voxel-center point-in-mesh over a raw lattice.
inline std::vector<std::uint8_t> solid_by_point_tests(const TriangleMesh& mesh, const RawGrid& raw) {
  std::vector<std::uint8_t> cells(raw.cells.size(), 0);
  for (std::uint32_t k = 0; k < raw.dims[2]; ++k)
    for (std::uint32_t j = 0; j < raw.dims[1]; ++j)
      for (std::uint32_t i = 0; i < raw.dims[0]; ++i)
        cells[raw.index(i, j, k)] = point_in_mesh(mesh, raw.center_of(i, j, k));
  return cells;
}

/// Slab test of a ray against the unit cell [i,i+1]x[j,j+1]x[k,k+1].
inline bool ray_hits_cell(Vec3 o, Vec3 d, double i, double j, double k) {
  double t0 = -std::numeric_limits<double>::infinity(), t1 = std::numeric_limits<double>::infinity();
  const double lo[3] = {i, j, k};
  for (int a = 0; a < 3; ++a) {
    if (d[a] == 0.0) {
      if (o[a] < lo[a] || o[a] > lo[a] + 1.0) return false;
      continue;
    }
    double ta = (lo[a] - o[a]) / d[a], tb = (lo[a] + 1.0 - o[a]) / d[a];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  return t0 <= t1;
}

/// Which pixels' view rays (full lines) meet any occupied voxel, tested
/// against every occupied voxel. Grid index space: voxel i spans [i, i+1].
inline std::vector<std::uint8_t> silhouette(const VoxelGrid& grid, const Rotation& r, std::uint32_t size) {
  const double n = grid.dims()[0];
  const Rotation inv = r.inverse();
  const Vec3 center{n / 2, n / 2, n / 2};
  const Vec3 d = inv.apply({0, 0, -1});
  std::vector<Vec3> occupied;
  for (std::uint32_t k = 0; k < grid.dims()[2]; ++k)
    for (std::uint32_t j = 0; j < grid.dims()[1]; ++j)
      for (std::uint32_t i = 0; i < grid.dims()[0]; ++i)
        if (grid.get(i, j, k)) occupied.push_back({double(i), double(j), double(k)});
  std::vector<std::uint8_t> out(std::size_t(size) * size, 0);
  const double px_size = n / size;
  for (std::uint32_t y = 0; y < size; ++y)
    for (std::uint32_t x = 0; x < size; ++x) {
      const Vec3 view{(x + 0.5) * px_size - n / 2, n / 2 - (y + 0.5) * px_size, 0.0};
      const Vec3 o = center + inv.apply(view);
      for (const auto& v : occupied) {
        if (ray_hits_cell(o, d, v.x, v.y, v.z)) {
          out[std::size_t(y) * size + x] = 1;
          break;
        }
      }
    }
  return out;
}

/// Axis-aligned top-down projection: per column the highest occupied k,
/// height (k - k_lowest + 1) voxels. Pixel (x, y) is column (x, n-1-y).
inline std::vector<double> axis_projection(const VoxelGrid& grid) {
  const auto n = grid.dims()[0];
  std::uint32_t lowest = n;
  for (std::uint32_t k = 0; k < n && lowest == n; ++k)
    for (std::uint32_t j = 0; j < n && lowest == n; ++j)
      for (std::uint32_t i = 0; i < n; ++i)
        if (grid.get(i, j, k)) {
          lowest = k;
          break;
        }
  std::vector<double> out(std::size_t(n) * n, 0.0);
  if (lowest == n) return out;
  for (std::uint32_t j = 0; j < n; ++j)
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t k = n; k-- > 0;)
        if (grid.get(i, j, k)) {
          out[std::size_t(n - 1 - j) * n + i] = double(k - lowest + 1) * grid.voxel_size();
          break;
        }
  return out;
}

inline double psnr(const RgbImage& a, const RgbImage& b) {
  double sq = 0.0;
  long count = 0;
  for (std::uint32_t y = 0; y < a.height; ++y)
    for (std::uint32_t x = 0; x < a.width; ++x)
      for (int c = 0; c < 3; ++c) {
        const double d = double(a.pixel(x, y)[c]) - double(b.pixel(x, y)[c]);
        sq += d * d;
        ++count;
      }
  if (sq == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(255.0) - 10.0 * std::log10(sq / count);
}

/// Direct 11x11 window sums with a 2-D Gaussian built in two dimensions.
inline double ssim(const RgbImage& a, const RgbImage& b) {
  const int win = 11, r = 5;
  const double sigma = 1.5;
  double kernel[11][11];
  double ksum = 0.0;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) ksum += kernel[dy + r][dx + r] = std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
  for (auto& row : kernel)
    for (auto& v : row) v /= ksum;

  auto gray = [](const RgbImage& im, int x, int y) {
    const auto* p = im.pixel(std::uint32_t(x), std::uint32_t(y));
    return 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
  };
  const double c1 = std::pow(0.01 * 255, 2), c2 = std::pow(0.03 * 255, 2);
  double total = 0.0;
  long windows = 0;
  for (int y0 = 0; y0 + win <= int(a.height); ++y0)
    for (int x0 = 0; x0 + win <= int(a.width); ++x0) {
      double mx = 0, my = 0;
      for (int dy = 0; dy < win; ++dy)
        for (int dx = 0; dx < win; ++dx) {
          mx += kernel[dy][dx] * gray(a, x0 + dx, y0 + dy);
          my += kernel[dy][dx] * gray(b, x0 + dx, y0 + dy);
        }
      double vx = 0, vy = 0, cov = 0;
      for (int dy = 0; dy < win; ++dy)
        for (int dx = 0; dx < win; ++dx) {
          const double ex = gray(a, x0 + dx, y0 + dy) - mx;
          const double ey = gray(b, x0 + dx, y0 + dy) - my;
          vx += kernel[dy][dx] * ex * ex;
          vy += kernel[dy][dx] * ey * ey;
          cov += kernel[dy][dx] * ex * ey;
        }
      total += ((2 * mx * my + c1) * (2 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++windows;
    }
  return total / windows;
}

/// One-sample Kolmogorov-Smirnov statistic against Uniform[lo, hi].
inline double ks_uniform(std::vector<double> samples, double lo, double hi) {
  std::sort(samples.begin(), samples.end());
  const double n = double(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = std::clamp((samples[i] - lo) / (hi - lo), 0.0, 1.0);
    d = std::max({d, (i + 1) / n - cdf, cdf - i / n});
  }
  return d;
}

/// Fraction of voxels in the union that are in both grids.
inline double iou(const VoxelGrid& a, const VoxelGrid& b) {
  std::size_t inter = 0, uni = 0;
  for (std::size_t n = 0; n < a.voxel_count(); ++n) {
    const bool x = a.test(n), y = b.test(n);
    inter += x && y;
    uni += x || y;
  }
  return uni ? double(inter) / double(uni) : 1.0;
}

}  // namespace vafm::oracle
