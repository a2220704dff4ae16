#include <gtest/gtest.h>

#include <string>

#include "vafm/mesh.hpp"

namespace vafm {
namespace {

ErrorCode code_of(const std::string& text) {
  try {
    parse_obj(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::InvalidArgument;
}

TEST(ParseObj, SingleTriangle) {
  const auto mesh = parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
  ASSERT_EQ(mesh.vertices.size(), 3u);
  ASSERT_EQ(mesh.triangles.size(), 1u);
  EXPECT_EQ(mesh.triangles[0], (std::array<std::uint32_t, 3>{0, 1, 2}));
  EXPECT_EQ(mesh.vertices[1], (Vec3{1, 0, 0}));
}

TEST(ParseObj, QuadIsFanTriangulated) {
  const auto mesh = parse_obj("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
  ASSERT_EQ(mesh.triangles.size(), 2u);
  EXPECT_EQ(mesh.triangles[0], (std::array<std::uint32_t, 3>{0, 1, 2}));
  EXPECT_EQ(mesh.triangles[1], (std::array<std::uint32_t, 3>{0, 2, 3}));
}

TEST(ParseObj, IndexOutOfRange) {
  EXPECT_EQ(code_of("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 5\n"), ErrorCode::IndexOutOfRange);
  EXPECT_EQ(code_of("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n"), ErrorCode::IndexOutOfRange);
  EXPECT_EQ(code_of("v 0 0 0\nv 1 0 0\nv 0 1 0\nf -4 1 2\n"), ErrorCode::IndexOutOfRange);
}

TEST(ParseObj, NoFacesIsNoGeometry) {
  EXPECT_EQ(code_of(""), ErrorCode::NoGeometry);
  EXPECT_EQ(code_of("v 0 0 0\nv 1 0 0\n"), ErrorCode::NoGeometry);
}

TEST(ParseObj, MalformedRecords) {
  EXPECT_EQ(code_of("v 0 0\nf 1 1 1\n"), ErrorCode::FormatError);
  EXPECT_EQ(code_of("v 0 zero 0\n"), ErrorCode::FormatError);
  EXPECT_EQ(code_of("v 0 0 0\nv 1 0 0\nf 1 2\n"), ErrorCode::FormatError);
}

TEST(ParseObj, LineEndingsCommentsAndBlankLines) {
  const std::string lf = "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nf 1 2 3\nf 1 3 4\n";
  const std::string crlf =
      "# exported\r\n\r\nv 0 0 0\r\nv 1 0 0   # corner\r\nv 0 1 0\r\n\r\nv 0 0 1\r\no thing\r\nf 1 2 3\r\nf 1 3 4";
  const auto a = parse_obj(lf);
  const auto b = parse_obj(crlf);
  EXPECT_EQ(a.vertices, b.vertices);
  EXPECT_EQ(a.triangles, b.triangles);
}

TEST(ParseObj, SlashFormsAndNegativeIndices) {
  const auto mesh = parse_obj(
      "v 0 0 0\nv 1 0 0\nv 0 1 0\nvt 0 0\nvn 0 0 1\n"
      "f 1/1/1 2/1/1 3/1/1\nf -3//1 -2//1 -1//1\n");
  ASSERT_EQ(mesh.triangles.size(), 2u);
  EXPECT_EQ(mesh.triangles[0], mesh.triangles[1]);
}

TEST(WriteObj, RoundTripsExactly) {
  TriangleMesh mesh;
  mesh.vertices = {{0.1, 1.0 / 3.0, -2.5e-7}, {1e6, 2, 3}, {4, 5, 6}, {-7.25, 8, 9}};
  mesh.triangles = {{0, 1, 2}, {0, 2, 3}};
  const auto back = parse_obj(write_obj(mesh));
  EXPECT_EQ(back.vertices, mesh.vertices);
  EXPECT_EQ(back.triangles, mesh.triangles);
}

}  // namespace
}  // namespace vafm
