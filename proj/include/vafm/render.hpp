#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <vector>

#include "vafm/error.hpp"
#include "vafm/geometry.hpp"
#include "vafm/image.hpp"
#include "vafm/voxel_grid.hpp"

namespace vafm {

enum class Colormap { Hot, Gray };
enum class NormalizationMode { PerImage, Fixed };

struct Normalization {
  NormalizationMode mode = NormalizationMode::PerImage;
  /// Angstrom mapped to the top of the colormap in Fixed mode.
  double max_height = 0.0;
};

struct RenderConfig {
  int image_size = 256;
  Colormap colormap = Colormap::Hot;
  Normalization normalization;

  void validate() const {
    if (image_size < 16) throw Error(ErrorCode::InvalidArgument, "image size must be >= 16");
    if (normalization.mode == NormalizationMode::Fixed &&
        (!(normalization.max_height > 0) || !std::isfinite(normalization.max_height))) {
      throw Error(ErrorCode::InvalidArgument, "fixed normalization needs a positive max height");
    }
  }
};

/// Heights in Angstrom above the substrate plane; 0 where nothing is hit.
/// Row 0 is the top of the image.
struct HeightMap {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  double pixel_size = 0.0;
  std::vector<double> values;

  HeightMap() = default;
  HeightMap(std::uint32_t w, std::uint32_t h, double ps) : width(w), height(h), pixel_size(ps), values(std::size_t(w) * h, 0.0) {}

  double& at(std::uint32_t x, std::uint32_t y) noexcept { return values[std::size_t(y) * width + x]; }
  double at(std::uint32_t x, std::uint32_t y) const noexcept { return values[std::size_t(y) * width + x]; }
  double max() const noexcept { return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()); }
};

/// Orthographic top-down height renderer over a cubic occupancy grid.
///
/// A view rotates the grid by R about its center and looks along -Z. Rather
/// than resampling the grid, every pixel ray is mapped back through R^-1 and
/// walked voxel by voxel (Amanatides-Woo) through the untouched lattice. The
/// pixel stores the height of the top of the first occupied voxel, measured
/// from the lowest occupied point of the rotated object, so every view rests
/// on a substrate at height 0.
class HeightRenderer {
 public:
  explicit HeightRenderer(const VoxelGrid& grid) : grid_(grid) {
    const auto& d = grid.dims();
    if (d[0] != d[1] || d[1] != d[2] || d[0] == 0) {
      throw Error(ErrorCode::InvalidArgument, "renderer needs a non-empty cubic grid");
    }
    n_ = d[0];
    rows_.assign(std::size_t(n_) * n_, Row{});
#pragma omp parallel for schedule(static)
    for (long k = 0; k < long(n_); ++k) {
      for (std::uint32_t j = 0; j < n_; ++j) {
        Row& row = rows_[std::size_t(k) * n_ + j];
        for (std::uint32_t i = 0; i < n_; ++i) {
          if (!grid_.get(i, j, std::size_t(k))) continue;
          if (row.first < 0) row.first = static_cast<std::int32_t>(i);
          row.last = static_cast<std::int32_t>(i);
        }
      }
    }
  }

  const VoxelGrid& grid() const noexcept { return grid_; }

  HeightMap render(const Rotation& r, int image_size) const {
    if (image_size < 1) throw Error(ErrorCode::InvalidArgument, "image size must be positive");
    const auto size = static_cast<std::uint32_t>(image_size);
    const double h = grid_.voxel_size();
    const double n = static_cast<double>(n_);
    HeightMap map(size, size, n * h / size);

    const Matrix3 m = r.matrix();
    const std::array<double, 3> up{m[2][0], m[2][1], m[2][2]};
    const double half_extent = 0.5 * (std::abs(up[0]) + std::abs(up[1]) + std::abs(up[2]));
    const double c = 0.5 * n;

    // Lowest occupied voxel center along the view axis, in voxel units. The
    // projection is linear in i, so each row's minimum sits at an end.
    double lowest = std::numeric_limits<double>::infinity();
    for (std::uint32_t k = 0; k < n_; ++k)
      for (std::uint32_t j = 0; j < n_; ++j) {
        const Row& row = rows_[std::size_t(k) * n_ + j];
        if (row.first < 0) continue;
        const double base = up[1] * (j + 0.5 - c) + up[2] * (k + 0.5 - c);
        lowest = std::min({lowest, up[0] * (row.first + 0.5 - c) + base, up[0] * (row.last + 0.5 - c) + base});
      }
    if (!std::isfinite(lowest)) return map;
    const double substrate = lowest - half_extent;

    // Ray direction in grid index space is -up; start above the grid.
    const std::array<double, 3> dir{-up[0], -up[1], -up[2]};
    const double scale = n / size;

#pragma omp parallel for schedule(static)
    for (long py = 0; py < long(size); ++py) {
      for (std::uint32_t px = 0; px < size; ++px) {
        const double u = (px + 0.5 - 0.5 * size) * scale;
        const double v = (0.5 * size - py - 0.5) * scale;
        std::array<double, 3> origin{};
        for (int a = 0; a < 3; ++a) origin[a] = c + m[0][a] * u + m[1][a] * v + up[a] * n;
        std::array<std::uint32_t, 3> hit{};
        if (!march(origin, dir, hit)) continue;
        const double top = up[0] * (hit[0] + 0.5 - c) + up[1] * (hit[1] + 0.5 - c) + up[2] * (hit[2] + 0.5 - c) +
                           half_extent;
        map.at(px, static_cast<std::uint32_t>(py)) = (top - substrate) * h;
      }
    }
    return map;
  }

 private:
  struct Row {
    std::int32_t first = -1;
    std::int32_t last = -1;
  };

  /// Walks the ray through [0,n]^3 and reports the first occupied voxel.
  bool march(const std::array<double, 3>& o, const std::array<double, 3>& d, std::array<std::uint32_t, 3>& hit) const {
    const double n = static_cast<double>(n_);
    double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a) {
      if (d[a] == 0.0) {
        if (o[a] < 0.0 || o[a] > n) return false;
        continue;
      }
      double ta = (0.0 - o[a]) / d[a];
      double tb = (n - o[a]) / d[a];
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
    }
    if (t0 > t1) return false;

    std::array<long, 3> cell{};
    std::array<long, 3> step{};
    std::array<double, 3> t_max{}, t_delta{};
    for (int a = 0; a < 3; ++a) {
      const double p = o[a] + t0 * d[a];
      cell[a] = std::clamp(static_cast<long>(std::floor(p)), 0L, long(n_) - 1);
      if (d[a] > 0) {
        step[a] = 1;
        t_max[a] = (double(cell[a] + 1) - o[a]) / d[a];
        t_delta[a] = 1.0 / d[a];
      } else if (d[a] < 0) {
        step[a] = -1;
        t_max[a] = (double(cell[a]) - o[a]) / d[a];
        t_delta[a] = -1.0 / d[a];
      } else {
        step[a] = 0;
        t_max[a] = std::numeric_limits<double>::infinity();
        t_delta[a] = std::numeric_limits<double>::infinity();
      }
    }
    while (true) {
      if (grid_.get(std::size_t(cell[0]), std::size_t(cell[1]), std::size_t(cell[2]))) {
        hit = {std::uint32_t(cell[0]), std::uint32_t(cell[1]), std::uint32_t(cell[2])};
        return true;
      }
      int a = 0;
      if (t_max[1] < t_max[a]) a = 1;
      if (t_max[2] < t_max[a]) a = 2;
      if (t_max[a] > t1) return false;
      cell[a] += step[a];
      if (cell[a] < 0 || cell[a] >= long(n_)) return false;
      t_max[a] += t_delta[a];
    }
  }

  const VoxelGrid& grid_;
  std::uint32_t n_ = 0;
  std::vector<Row> rows_;
};

inline HeightMap render_height_map(const VoxelGrid& grid, const Rotation& r, const RenderConfig& cfg = {}) {
  cfg.validate();
  return HeightRenderer(grid).render(r, cfg.image_size);
}

/// Black -> red -> yellow -> white in equal thirds of t.
inline std::array<std::uint8_t, 3> hot_color(double t) noexcept {
  auto q = [](double c) { return static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(c, 0.0, 1.0))); };
  return {q(3.0 * t), q(3.0 * t - 1.0), q(3.0 * t - 2.0)};
}

inline std::array<std::uint8_t, 3> gray_color(double t) noexcept {
  const auto g = static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(t, 0.0, 1.0)));
  return {g, g, g};
}

inline RgbImage apply_colormap(const HeightMap& map, const RenderConfig& cfg = {}) {
  double scale = 0.0;
  if (cfg.normalization.mode == NormalizationMode::Fixed) {
    if (!(cfg.normalization.max_height > 0)) {
      throw Error(ErrorCode::InvalidArgument, "fixed normalization needs a positive max height");
    }
    scale = 1.0 / cfg.normalization.max_height;
  } else {
    const double peak = map.max();
    scale = peak > 0 ? 1.0 / peak : 0.0;
  }
  RgbImage img(map.width, map.height);
  for (std::uint32_t y = 0; y < map.height; ++y)
    for (std::uint32_t x = 0; x < map.width; ++x) {
      const double t = std::clamp(map.at(x, y) * scale, 0.0, 1.0);
      const auto rgb = cfg.colormap == Colormap::Hot ? hot_color(t) : gray_color(t);
      std::copy(rgb.begin(), rgb.end(), img.pixel(x, y));
    }
  return img;
}

// Raw height dump: "VHM1", u32 width, u32 height, f32 pixel size, then f32
// heights row-major. Little-endian.
inline std::vector<std::uint8_t> encode_heights(const HeightMap& map) {
  std::vector<std::uint8_t> out{'V', 'H', 'M', '1'};
  detail::put_le<std::uint32_t>(out, map.width);
  detail::put_le<std::uint32_t>(out, map.height);
  detail::put_f32(out, static_cast<float>(map.pixel_size));
  for (double v : map.values) detail::put_f32(out, static_cast<float>(v));
  return out;
}

inline HeightMap decode_heights(const std::vector<std::uint8_t>& bytes) {
  detail::ByteReader in(bytes);
  in.expect_magic("VHM1");
  const auto w = in.get_le<std::uint32_t>();
  const auto h = in.get_le<std::uint32_t>();
  HeightMap map(w, h, in.get_f32());
  if (in.remaining() != map.values.size() * 4) throw Error(ErrorCode::FormatError, "height payload size mismatch");
  for (auto& v : map.values) v = in.get_f32();
  return map;
}

inline void write_heights(const std::filesystem::path& path, const HeightMap& map) {
  detail::write_bytes(path, encode_heights(map));
}

inline HeightMap read_heights(const std::filesystem::path& path) { return decode_heights(detail::read_bytes(path)); }

}  // namespace vafm
