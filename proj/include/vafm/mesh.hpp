#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vafm/error.hpp"
#include "vafm/geometry.hpp"

namespace vafm {

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;

  BoundingBox bbox() const noexcept { return bounding_box(vertices); }
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace detail

/// Wavefront OBJ reader for `v` and `f` records. Polygons are fan
/// triangulated; normals, texture coordinates and everything else are ignored.
inline TriangleMesh parse_obj(std::string_view text) {
  TriangleMesh mesh;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::vector<std::uint32_t> face;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = detail::split_ws(line);
    if (tokens.empty()) continue;

    if (tokens[0] == "v") {
      if (tokens.size() < 4) throw Error(ErrorCode::FormatError, "short vertex on line " + std::to_string(line_no));
      Vec3 v;
      for (int a = 0; a < 3; ++a) {
        auto field = tokens[a + 1];
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v[a]);
        if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v[a])) {
          throw Error(ErrorCode::FormatError, "bad vertex coordinate on line " + std::to_string(line_no));
        }
      }
      mesh.vertices.push_back(v);
    } else if (tokens[0] == "f") {
      face.clear();
      for (std::size_t t = 1; t < tokens.size(); ++t) {
        auto field = tokens[t].substr(0, tokens[t].find('/'));
        long long idx = 0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), idx);
        if (ec != std::errc{} || ptr != field.data() + field.size()) {
          throw Error(ErrorCode::FormatError, "bad face index on line " + std::to_string(line_no));
        }
        const long long n = static_cast<long long>(mesh.vertices.size());
        const long long resolved = idx < 0 ? n + idx : idx - 1;
        if (idx == 0 || resolved < 0 || resolved >= n) {
          throw Error(ErrorCode::IndexOutOfRange,
                      "face index " + std::to_string(idx) + " on line " + std::to_string(line_no) + " with " +
                          std::to_string(n) + " vertices");
        }
        face.push_back(static_cast<std::uint32_t>(resolved));
      }
      if (face.size() < 3) throw Error(ErrorCode::FormatError, "face with < 3 vertices on line " + std::to_string(line_no));
      for (std::size_t k = 1; k + 1 < face.size(); ++k) mesh.triangles.push_back({face[0], face[k], face[k + 1]});
    }
  }
  if (mesh.triangles.empty()) throw Error(ErrorCode::NoGeometry, "OBJ contains no faces");
  return mesh;
}

inline std::string write_obj(const TriangleMesh& mesh) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& v : mesh.vertices) out << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
  for (const auto& t : mesh.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  return out.str();
}

}  // namespace vafm
