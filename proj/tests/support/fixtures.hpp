#pragma once

// Test geometry and helpers shared by the unit and acceptance suites.

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vafm/vafm.hpp"

namespace vafm::testing {

inline std::filesystem::path data_dir() { return VAFM_TEST_DATA_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 gen{std::random_device{}()};
    path_ = std::filesystem::temp_directory_path() / ("vafm_" + tag + "_" + std::to_string(gen()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline TriangleMesh cube_mesh(double edge, Vec3 min = {0, 0, 0}) {
  TriangleMesh m;
  for (int n = 0; n < 8; ++n) {
    m.vertices.push_back(min + edge * Vec3{double(n & 1), double((n >> 1) & 1), double((n >> 2) & 1)});
  }
  // Outward-facing, two triangles per face.
  m.triangles = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
                 {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
  return m;
}

/// Subdivided icosahedron with vertices on the sphere.
inline TriangleMesh icosphere(double radius, int subdivisions, Vec3 center = {0, 0, 0}) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v{{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                      {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p = (1.0 / norm(p)) * p;
  std::vector<std::array<std::uint32_t, 3>> f{{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                              {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                              {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                              {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> mid;
    auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
      const auto key = std::minmax(a, b);
      if (auto it = mid.find(key); it != mid.end()) return it->second;
      Vec3 p = 0.5 * (v[a] + v[b]);
      p = (1.0 / norm(p)) * p;
      v.push_back(p);
      return mid[key] = static_cast<std::uint32_t>(v.size() - 1);
    };
    std::vector<std::array<std::uint32_t, 3>> next;
    for (const auto& tri : f) {
      const auto a = midpoint(tri[0], tri[1]);
      const auto b = midpoint(tri[1], tri[2]);
      const auto c = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], a, c});
      next.push_back({tri[1], b, a});
      next.push_back({tri[2], c, b});
      next.push_back({a, b, c});
    }
    f = std::move(next);
  }
  TriangleMesh m;
  for (const auto& p : v) m.vertices.push_back(center + radius * p);
  m.triangles = std::move(f);
  return m;
}

/// Closed triangulated surface of a union of spheres, by marching tetrahedra
/// over the signed distance min_k(|p - c_k| - r_k) sampled on `cells` cells
/// along the longest axis. Edge vertices are interpolated from the
/// lower-indexed endpoint so shared edges produce identical coordinates.
inline TriangleMesh union_of_spheres_mesh(const std::vector<Sphere>& spheres, int cells) {
  BoundingBox box;
  for (const auto& s : spheres) {
    box.expand(s.center - Vec3{s.radius, s.radius, s.radius});
    box.expand(s.center + Vec3{s.radius, s.radius, s.radius});
  }
  const Vec3 ext = box.extent();
  const double step = std::max({ext.x, ext.y, ext.z}) / cells;
  // Pad and offset so no sample lands exactly on a surface.
  const Vec3 start = box.min - Vec3{2.0137 * step, 2.0311 * step, 2.0071 * step};
  std::array<int, 3> n{};
  for (int a = 0; a < 3; ++a) n[a] = static_cast<int>(std::ceil(ext[a] / step)) + 5;

  auto sdf = [&](Vec3 p) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& s : spheres) d = std::min(d, norm(p - s.center) - s.radius);
    return d;
  };
  auto id = [&](int i, int j, int k) { return std::int64_t(i) + std::int64_t(n[0]) * (j + std::int64_t(n[1]) * k); };
  std::vector<double> values(std::size_t(n[0]) * n[1] * n[2]);
  std::vector<Vec3> points(values.size());
  for (int k = 0; k < n[2]; ++k)
    for (int j = 0; j < n[1]; ++j)
      for (int i = 0; i < n[0]; ++i) {
        const Vec3 p = start + step * Vec3{double(i), double(j), double(k)};
        points[id(i, j, k)] = p;
        values[id(i, j, k)] = sdf(p);
      }

  TriangleMesh mesh;
  std::map<std::pair<std::int64_t, std::int64_t>, std::uint32_t> edge_vertex;
  auto vertex_on = [&](std::int64_t a, std::int64_t b) {
    if (b < a) std::swap(a, b);
    if (auto it = edge_vertex.find({a, b}); it != edge_vertex.end()) return it->second;
    const double fa = values[a], fb = values[b];
    const double t = fa / (fa - fb);
    mesh.vertices.push_back(points[a] + t * (points[b] - points[a]));
    return edge_vertex[{a, b}] = static_cast<std::uint32_t>(mesh.vertices.size() - 1);
  };
  auto emit = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c, Vec3 outward) {
    const Vec3 nrm = cross(mesh.vertices[b] - mesh.vertices[a], mesh.vertices[c] - mesh.vertices[a]);
    if (dot(nrm, outward) < 0) std::swap(b, c);
    mesh.triangles.push_back({a, b, c});
  };

  // Freudenthal split of each cube into six tetrahedra along the 0-7 diagonal.
  static constexpr std::array<std::array<int, 4>, 6> tets{
      {{0, 1, 3, 7}, {0, 3, 2, 7}, {0, 2, 6, 7}, {0, 6, 4, 7}, {0, 4, 5, 7}, {0, 5, 1, 7}}};
  for (int k = 0; k + 1 < n[2]; ++k)
    for (int j = 0; j + 1 < n[1]; ++j)
      for (int i = 0; i + 1 < n[0]; ++i) {
        std::array<std::int64_t, 8> corner{};
        for (int c = 0; c < 8; ++c) corner[c] = id(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1));
        for (const auto& tet : tets) {
          std::vector<std::int64_t> in, out;
          for (int c : tet) (values[corner[c]] < 0 ? in : out).push_back(corner[c]);
          if (in.empty() || out.empty()) continue;
          Vec3 ci{}, co{};
          for (auto p : in) ci = ci + points[p];
          for (auto p : out) co = co + points[p];
          const Vec3 outward = (1.0 / out.size()) * co - (1.0 / in.size()) * ci;
          if (in.size() == 1) {
            emit(vertex_on(in[0], out[0]), vertex_on(in[0], out[1]), vertex_on(in[0], out[2]), outward);
          } else if (in.size() == 3) {
            emit(vertex_on(out[0], in[0]), vertex_on(out[0], in[1]), vertex_on(out[0], in[2]), outward);
          } else {
            const auto a = vertex_on(in[0], out[0]);
            const auto b = vertex_on(in[0], out[1]);
            const auto c = vertex_on(in[1], out[1]);
            const auto d = vertex_on(in[1], out[0]);
            emit(a, b, c, outward);
            emit(a, c, d, outward);
          }
        }
      }
  return mesh;
}

/// Single-atom or multi-atom model from (element, position) pairs.
inline MolecularModel make_model(const std::vector<std::pair<std::string, Vec3>>& atoms) {
  std::vector<Atom> list;
  int serial = 1;
  for (const auto& [el, pos] : atoms) {
    Atom a;
    a.serial = serial++;
    a.name = el;
    a.element = el;
    a.position = pos;
    a.residue_name = "UNK";
    a.chain_id = 'A';
    a.residue_seq = 1;
    list.push_back(a);
  }
  return MolecularModel(std::move(list), "synthetic");
}

inline RgbImage random_image(std::uint32_t w, std::uint32_t h, std::uint64_t seed) {
  Rng rng(seed);
  RgbImage img(w, h);
  for (auto& b : img.data) b = static_cast<std::uint8_t>(rng.next_u64() >> 56);
  return img;
}

inline RgbImage uniform_image(std::uint32_t w, std::uint32_t h, std::array<std::uint8_t, 3> rgb) {
  RgbImage img(w, h);
  for (std::size_t p = 0; p < std::size_t(w) * h; ++p) std::copy(rgb.begin(), rgb.end(), &img.data[p * 3]);
  return img;
}

/// Image rotated by 90 degrees: output(col j, row w-1-i) = input(col i, row j).
inline RgbImage rotate90(const RgbImage& in) {
  RgbImage out(in.height, in.width);
  for (std::uint32_t y = 0; y < in.height; ++y)
    for (std::uint32_t x = 0; x < in.width; ++x) {
      std::copy(in.pixel(x, y), in.pixel(x, y) + 3, out.pixel(y, in.width - 1 - x));
    }
  return out;
}

/// Byte-level snapshot of every regular file in a directory.
inline std::map<std::string, std::string> snapshot(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file()) out[e.path().filename().string()] = read_file(e.path());
  }
  return out;
}

}  // namespace vafm::testing
