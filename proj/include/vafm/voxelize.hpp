#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "vafm/diagnostics.hpp"
#include "vafm/error.hpp"
#include "vafm/geometry.hpp"
#include "vafm/mesh.hpp"
#include "vafm/structure.hpp"
#include "vafm/voxel_grid.hpp"

namespace vafm {

enum class VoxelizeMode { Atoms, Mesh };
enum class MeshFill { Solid, Surface };

struct VoxelizeConfig {
  int resolution = 256;
  VoxelizeMode mode = VoxelizeMode::Atoms;
  /// Angstrom added to every atom radius; 1.4 approximates a water probe.
  double probe_inflation = 0.0;
  /// Voxels of guaranteed empty border on every face.
  int margin = 2;
  MeshFill mesh_fill = MeshFill::Solid;
  /// Throw NonWatertight instead of falling back to surface-only output.
  bool strict = false;

  void validate() const {
    if (resolution < 8) throw Error(ErrorCode::InvalidArgument, "resolution must be >= 8");
    if (!(probe_inflation >= 0) || !std::isfinite(probe_inflation)) {
      throw Error(ErrorCode::InvalidArgument, "probe inflation must be >= 0");
    }
    if (margin < 0) throw Error(ErrorCode::InvalidArgument, "margin must be >= 0");
    if (resolution - 2 * margin < 1) throw Error(ErrorCode::InvalidArgument, "margin leaves no room for content");
  }

  int content_voxels() const noexcept { return resolution - 2 * margin; }
};

/// Unpadded lattice: one byte per voxel, same index order as VoxelGrid.
struct RawGrid {
  Dims dims{0, 0, 0};
  double voxel_size = 1.0;
  Vec3 origin;
  std::vector<std::uint8_t> cells;

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return i + dims[0] * (j + dims[1] * k);
  }
  Vec3 center_of(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return origin + voxel_size * Vec3{double(i), double(j), double(k)};
  }
};

/// Lattice whose longest axis spans `content_voxels()` voxels across `box`,
/// with shorter axes rounded up and centered on the box.
inline RawGrid make_raw_lattice(const BoundingBox& box, const VoxelizeConfig& cfg) {
  cfg.validate();
  const Vec3 ext = box.extent();
  const double longest = std::max({ext.x, ext.y, ext.z});
  if (!(longest > 0) || !std::isfinite(longest)) {
    throw Error(ErrorCode::DegenerateExtent, "geometry has zero extent; cannot define a voxel size");
  }
  const int content = cfg.content_voxels();
  RawGrid raw;
  raw.voxel_size = longest / content;
  const Vec3 c = box.center();
  for (int a = 0; a < 3; ++a) {
    const double cells = std::ceil(ext[a] / raw.voxel_size - 1e-9);
    raw.dims[a] = static_cast<std::uint32_t>(std::clamp(cells, 1.0, double(content)));
    raw.origin[a] = c[a] - 0.5 * (raw.dims[a] - 1.0) * raw.voxel_size;
  }
  raw.cells.assign(static_cast<std::size_t>(raw.dims[0]) * raw.dims[1] * raw.dims[2], 0);
  return raw;
}

/// Centers the raw lattice in a resolution^3 grid; the odd leftover voxel of
/// padding goes to the high side.
inline VoxelGrid fit_and_pad(const RawGrid& raw, const VoxelizeConfig& cfg) {
  const auto res = static_cast<std::uint32_t>(cfg.resolution);
  std::array<std::uint32_t, 3> offset{};
  for (int a = 0; a < 3; ++a) {
    if (raw.dims[a] > res) {
      throw Error(ErrorCode::TooLarge, "raw axis " + std::to_string(a) + " has " + std::to_string(raw.dims[a]) +
                                           " voxels, more than resolution " + std::to_string(res));
    }
    offset[a] = (res - raw.dims[a]) / 2;
  }
  const Vec3 origin = raw.origin - raw.voxel_size * Vec3{double(offset[0]), double(offset[1]), double(offset[2])};
  VoxelGrid grid({res, res, res}, raw.voxel_size, origin);
  for (std::uint32_t k = 0; k < raw.dims[2]; ++k)
    for (std::uint32_t j = 0; j < raw.dims[1]; ++j)
      for (std::uint32_t i = 0; i < raw.dims[0]; ++i)
        if (raw.cells[raw.index(i, j, k)]) grid.set(i + offset[0], j + offset[1], k + offset[2]);
  return grid;
}

// ---------------------------------------------------------------------------
// Atoms path

struct Sphere {
  Vec3 center;
  double radius;
};

/// Per-atom sphere radii: van der Waals radius plus probe inflation. Each
/// unknown element warns once.
inline std::vector<Sphere> atom_spheres(const MolecularModel& model, const RadiusTable& table, double probe) {
  std::map<std::string, double, std::less<>> cache;
  std::vector<Sphere> out;
  out.reserve(model.size());
  for (const auto& a : model.atoms()) {
    auto it = cache.find(a.element);
    if (it == cache.end()) it = cache.emplace(a.element, vdw_radius(a.element, table)).first;
    out.push_back({a.position, it->second + probe});
  }
  return out;
}

inline BoundingBox sphere_bounds(const std::vector<Sphere>& spheres) {
  BoundingBox box;
  for (const auto& s : spheres) {
    box.expand(s.center - Vec3{s.radius, s.radius, s.radius});
    box.expand(s.center + Vec3{s.radius, s.radius, s.radius});
  }
  return box;
}

/// Marks every voxel whose center lies within some sphere. Parallel over z
/// slices; slices own disjoint output ranges.
inline void rasterize_spheres(const std::vector<Sphere>& spheres, RawGrid& raw) {
  const double h = raw.voxel_size;
  const auto nx = static_cast<long>(raw.dims[0]);
  const auto ny = static_cast<long>(raw.dims[1]);
  const auto nz = static_cast<long>(raw.dims[2]);
  auto lo_index = [h](double v, double o) { return static_cast<long>(std::ceil((v - o) / h - 1e-9)); };
  auto hi_index = [h](double v, double o) { return static_cast<long>(std::floor((v - o) / h + 1e-9)); };

#pragma omp parallel for schedule(dynamic, 4)
  for (long k = 0; k < nz; ++k) {
    const double zc = raw.origin.z + h * double(k);
    for (const auto& s : spheres) {
      const double dz = zc - s.center.z;
      const double r2 = s.radius * s.radius;
      const double rem = r2 - dz * dz;
      if (rem < 0) continue;
      const double ry = std::sqrt(rem);
      const long j0 = std::max(0L, lo_index(s.center.y - ry, raw.origin.y));
      const long j1 = std::min(ny - 1, hi_index(s.center.y + ry, raw.origin.y));
      for (long j = j0; j <= j1; ++j) {
        const double dy = raw.origin.y + h * double(j) - s.center.y;
        const double rem2 = rem - dy * dy;
        if (rem2 < 0) continue;
        const double rx = std::sqrt(rem2);
        const long i0 = std::max(0L, lo_index(s.center.x - rx, raw.origin.x));
        const long i1 = std::min(nx - 1, hi_index(s.center.x + rx, raw.origin.x));
        for (long i = i0; i <= i1; ++i) {
          const double dx = raw.origin.x + h * double(i) - s.center.x;
          if (dx * dx + dy * dy + dz * dz <= r2) raw.cells[raw.index(i, j, k)] = 1;
        }
      }
    }
  }
}

inline VoxelGrid voxelize_spheres(const std::vector<Sphere>& spheres, const VoxelizeConfig& cfg) {
  if (spheres.empty()) throw Error(ErrorCode::NoAtoms, "nothing to voxelize");
  RawGrid raw = make_raw_lattice(sphere_bounds(spheres), cfg);
  rasterize_spheres(spheres, raw);
  return fit_and_pad(raw, cfg);
}

/// Union-of-spheres voxelization: a voxel is occupied when its center lies
/// within vdw_radius + probe_inflation of any atom center.
inline VoxelGrid voxelize_atoms(const MolecularModel& model, const RadiusTable& table, const VoxelizeConfig& cfg) {
  cfg.validate();
  return voxelize_spheres(atom_spheres(model, table, cfg.probe_inflation), cfg);
}

// ---------------------------------------------------------------------------
// Mesh path

/// Separating-axis triangle/box overlap (Akenine-Moller). Touching counts as
/// overlap, which makes the surface pass conservative.
inline bool triangle_box_overlap(Vec3 box_center, Vec3 half, Vec3 a, Vec3 b, Vec3 c) noexcept {
  const std::array<Vec3, 3> v{a - box_center, b - box_center, c - box_center};
  for (int ax = 0; ax < 3; ++ax) {
    const double lo = std::min({v[0][ax], v[1][ax], v[2][ax]});
    const double hi = std::max({v[0][ax], v[1][ax], v[2][ax]});
    if (lo > half[ax] || hi < -half[ax]) return false;
  }
  const Vec3 n = cross(v[1] - v[0], v[2] - v[0]);
  const double r_plane = half.x * std::abs(n.x) + half.y * std::abs(n.y) + half.z * std::abs(n.z);
  if (std::abs(dot(n, v[0])) > r_plane) return false;

  const std::array<Vec3, 3> edges{v[1] - v[0], v[2] - v[1], v[0] - v[2]};
  constexpr std::array<Vec3, 3> units{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  for (const auto& e : edges) {
    for (const auto& u : units) {
      const Vec3 axis = cross(u, e);
      const double p0 = dot(axis, v[0]), p1 = dot(axis, v[1]), p2 = dot(axis, v[2]);
      const double r = half.x * std::abs(axis.x) + half.y * std::abs(axis.y) + half.z * std::abs(axis.z);
      if (std::min({p0, p1, p2}) > r || std::max({p0, p1, p2}) < -r) return false;
    }
  }
  return true;
}

inline void validate_mesh(const TriangleMesh& mesh) {
  if (mesh.triangles.empty()) throw Error(ErrorCode::NoGeometry, "mesh has no triangles");
  for (const auto& v : mesh.vertices) {
    if (!is_finite(v)) throw Error(ErrorCode::InvalidArgument, "mesh has non-finite vertex");
  }
  for (const auto& t : mesh.triangles) {
    for (auto idx : t) {
      if (idx >= mesh.vertices.size()) throw Error(ErrorCode::IndexOutOfRange, "triangle references missing vertex");
    }
  }
}

/// Conservative surface pass: every voxel whose cube touches a triangle.
inline void rasterize_surface(const TriangleMesh& mesh, RawGrid& raw) {
  const double h = raw.voxel_size;
  const Vec3 half{0.5 * h, 0.5 * h, 0.5 * h};
  const auto nz = static_cast<long>(raw.dims[2]);
  auto cell_range = [&](double lo, double hi, int axis) {
    const long n = static_cast<long>(raw.dims[axis]);
    const long a = static_cast<long>(std::floor((lo - raw.origin[axis]) / h + 0.5)) - 1;
    const long b = static_cast<long>(std::ceil((hi - raw.origin[axis]) / h - 0.5)) + 1;
    return std::pair{std::max(0L, a), std::min(n - 1, b)};
  };

#pragma omp parallel for schedule(dynamic, 4)
  for (long k = 0; k < nz; ++k) {
    const double zc = raw.origin.z + h * double(k);
    for (const auto& t : mesh.triangles) {
      const Vec3& a = mesh.vertices[t[0]];
      const Vec3& b = mesh.vertices[t[1]];
      const Vec3& c = mesh.vertices[t[2]];
      const double zlo = std::min({a.z, b.z, c.z});
      const double zhi = std::max({a.z, b.z, c.z});
      if (zlo > zc + half.z || zhi < zc - half.z) continue;
      const auto [j0, j1] = cell_range(std::min({a.y, b.y, c.y}), std::max({a.y, b.y, c.y}), 1);
      const auto [i0, i1] = cell_range(std::min({a.x, b.x, c.x}), std::max({a.x, b.x, c.x}), 0);
      for (long j = j0; j <= j1; ++j)
        for (long i = i0; i <= i1; ++i) {
          auto& cell = raw.cells[raw.index(i, j, k)];
          if (!cell && triangle_box_overlap(raw.center_of(i, j, k), half, a, b, c)) cell = 1;
        }
    }
  }
}

namespace detail {

struct Point2 {
  double u, v;
  friend bool operator==(Point2, Point2) = default;
};

/// Edge function cross(q - p, s - p) evaluated from the lexicographically
/// smaller endpoint, so reversing an edge negates the result exactly.
inline double edge_function(Point2 p, Point2 q, Point2 s) noexcept {
  const bool swap = std::tie(q.u, q.v) < std::tie(p.u, p.v);
  const Point2 a = swap ? q : p;
  const Point2 b = swap ? p : q;
  const double e = (b.u - a.u) * (s.v - a.v) - (b.v - a.v) * (s.u - a.u);
  return swap ? -e : e;
}

/// Tie rule for points exactly on an edge of a counter-clockwise triangle;
/// owns(d) and owns(-d) are complementary for every non-zero d.
inline bool owns_edge(Point2 p, Point2 q) noexcept {
  const double du = q.u - p.u, dv = q.v - p.v;
  return dv < 0 || (dv == 0 && du < 0);
}

/// Triangle projected onto the YZ plane along X, stored counter-clockwise.
struct ScanTriangle {
  std::array<Point2, 3> p;
  std::array<double, 3> x;
  double ulo, uhi, vlo, vhi;
};

inline bool scan_hit(const ScanTriangle& t, Point2 s, double& x_out) noexcept {
  const std::array<double, 3> w{edge_function(t.p[1], t.p[2], s), edge_function(t.p[2], t.p[0], s),
                                edge_function(t.p[0], t.p[1], s)};
  const std::array<bool, 3> own{owns_edge(t.p[1], t.p[2]), owns_edge(t.p[2], t.p[0]), owns_edge(t.p[0], t.p[1])};
  for (int e = 0; e < 3; ++e) {
    if (w[e] < 0 || (w[e] == 0 && !own[e])) return false;
  }
  const double sum = w[0] + w[1] + w[2];
  x_out = (w[0] * t.x[0] + w[1] * t.x[1] + w[2] * t.x[2]) / sum;
  return true;
}

}  // namespace detail

struct ParityFill {
  std::vector<std::uint8_t> cells;
  std::size_t inconsistent_scanlines = 0;
};

/// Interior by ray-crossing parity along +X scanlines through voxel centers.
/// Scanlines with an odd crossing count are left empty and counted.
inline ParityFill scanline_parity_fill(const TriangleMesh& mesh, const RawGrid& raw) {
  const double h = raw.voxel_size;
  const auto nx = raw.dims[0];
  const auto ny = raw.dims[1];
  const auto nz = raw.dims[2];

  std::vector<detail::ScanTriangle> tris;
  tris.reserve(mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    detail::ScanTriangle s;
    for (int c = 0; c < 3; ++c) {
      const Vec3& v = mesh.vertices[t[c]];
      s.p[c] = {v.y, v.z};
      s.x[c] = v.x;
    }
    const double area = detail::edge_function(s.p[0], s.p[1], s.p[2]);
    if (area == 0) continue;
    if (area < 0) {
      std::swap(s.p[1], s.p[2]);
      std::swap(s.x[1], s.x[2]);
    }
    s.ulo = std::min({s.p[0].u, s.p[1].u, s.p[2].u});
    s.uhi = std::max({s.p[0].u, s.p[1].u, s.p[2].u});
    s.vlo = std::min({s.p[0].v, s.p[1].v, s.p[2].v});
    s.vhi = std::max({s.p[0].v, s.p[1].v, s.p[2].v});
    tris.push_back(s);
  }

  // Bucket by the z rows each projected triangle can reach.
  std::vector<std::vector<std::uint32_t>> rows(nz);
  for (std::uint32_t t = 0; t < tris.size(); ++t) {
    const long k0 = std::max(0L, static_cast<long>(std::ceil((tris[t].vlo - raw.origin.z) / h)) - 1);
    const long k1 = std::min(long(nz) - 1, static_cast<long>(std::floor((tris[t].vhi - raw.origin.z) / h)) + 1);
    for (long k = k0; k <= k1; ++k) rows[k].push_back(t);
  }

  ParityFill fill;
  fill.cells.assign(raw.cells.size(), 0);
  std::size_t inconsistent = 0;

#pragma omp parallel for schedule(dynamic, 1) reduction(+ : inconsistent)
  for (long k = 0; k < long(nz); ++k) {
    std::vector<double> crossings;
    const double zc = raw.origin.z + h * double(k);
    for (std::uint32_t j = 0; j < ny; ++j) {
      const double yc = raw.origin.y + h * double(j);
      const detail::Point2 s{yc, zc};
      crossings.clear();
      for (auto t : rows[k]) {
        const auto& tri = tris[t];
        if (yc < tri.ulo || yc > tri.uhi || zc < tri.vlo || zc > tri.vhi) continue;
        double x;
        if (detail::scan_hit(tri, s, x)) crossings.push_back(x);
      }
      if (crossings.empty()) continue;
      if (crossings.size() % 2 != 0) {
        ++inconsistent;
        continue;
      }
      std::sort(crossings.begin(), crossings.end());
      std::size_t passed = 0;
      for (std::uint32_t i = 0; i < nx; ++i) {
        const double xc = raw.origin.x + h * double(i);
        while (passed < crossings.size() && crossings[passed] < xc) ++passed;
        if (passed % 2 == 1) fill.cells[raw.index(i, j, k)] = 1;
      }
    }
  }
  fill.inconsistent_scanlines = inconsistent;
  return fill;
}

/// Number of mesh edges (welded by exact vertex position) used by an odd
/// number of triangles; zero for a closed surface.
inline std::size_t boundary_edge_count(const TriangleMesh& mesh) {
  using Key = std::tuple<double, double, double>;
  auto key = [&](std::uint32_t idx) {
    const Vec3& v = mesh.vertices[idx];
    return Key{v.x, v.y, v.z};
  };
  std::map<std::pair<Key, Key>, std::uint32_t> uses;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      Key a = key(t[e]);
      Key b = key(t[(e + 1) % 3]);
      if (a == b) continue;
      if (b < a) std::swap(a, b);
      ++uses[{a, b}];
    }
  }
  return static_cast<std::size_t>(std::count_if(uses.begin(), uses.end(), [](const auto& kv) { return kv.second % 2; }));
}

/// Conservative surface voxelization plus scanline-parity interior fill.
/// A mesh that is not closed falls back to its surface shell with a warning,
/// or throws NonWatertight when cfg.strict is set.
inline VoxelGrid voxelize_mesh(const TriangleMesh& mesh, const VoxelizeConfig& cfg) {
  cfg.validate();
  validate_mesh(mesh);
  RawGrid raw = make_raw_lattice(mesh.bbox(), cfg);
  rasterize_surface(mesh, raw);

  if (cfg.mesh_fill == MeshFill::Solid) {
    const std::size_t open_edges = boundary_edge_count(mesh);
    ParityFill fill = scanline_parity_fill(mesh, raw);
    if (open_edges == 0 && fill.inconsistent_scanlines == 0) {
      for (std::size_t n = 0; n < raw.cells.size(); ++n) raw.cells[n] |= fill.cells[n];
    } else {
      const std::string why = std::to_string(open_edges) + " open edges, " +
                              std::to_string(fill.inconsistent_scanlines) + " scanlines with odd crossing counts";
      if (cfg.strict) throw Error(ErrorCode::NonWatertight, "mesh is not closed: " + why);
      diagnostics::warn("mesh is not closed (" + why + "); keeping surface voxels only");
    }
  }
  return fit_and_pad(raw, cfg);
}

}  // namespace vafm
