#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "support/fixtures.hpp"
#include "vafm/structure.hpp"

namespace vafm {
namespace {

using testing::data_dir;
using testing::read_file;

TEST(ParsePdb, SingleAtomRecord) {
  const auto model =
      parse_pdb("ATOM      1  N   MET A   1      10.000  20.000  30.000  1.00  0.00           N\n", "one");
  ASSERT_EQ(model.size(), 1u);
  const Atom& a = model.atoms()[0];
  EXPECT_EQ(a.serial, 1);
  EXPECT_EQ(a.name, "N");
  EXPECT_EQ(a.element, "N");
  EXPECT_EQ(a.position, (Vec3{10, 20, 30}));
  EXPECT_DOUBLE_EQ(a.occupancy, 1.0);
  EXPECT_EQ(a.chain_id, 'A');
  EXPECT_EQ(a.residue_seq, 1);
  EXPECT_FALSE(a.alt_loc.has_value());
  EXPECT_EQ(model.bbox().min, (Vec3{10, 20, 30}));
  EXPECT_EQ(model.bbox().max, (Vec3{10, 20, 30}));
}

TEST(ParsePdb, EmptyInputIsNoAtoms) {
  try {
    parse_pdb("");
    FAIL() << "expected NoAtoms";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoAtoms);
  }
  EXPECT_THROW(parse_pdb("HEADER    nothing here\nEND\n"), Error);
}

TEST(ParsePdb, BadCoordinateNamesTheLine) {
  const std::string text =
      "ATOM      1  N   MET A   1      10.000  20.000  30.000  1.00  0.00           N\n"
      "ATOM      2  CA  MET A   1      1x.000  20.000  30.000  1.00  0.00           C\n";
  try {
    parse_pdb(text);
    FAIL() << "expected MalformedRecord";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedRecord);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(ParsePdb, ElementFallsBackToAtomName) {
  const auto model = parse_pdb(
      "ATOM      1  CA  GLY A   1       0.000   0.000   0.000  1.00  0.00\n"
      "HETATM    2 FE   HEM A   2       1.000   0.000   0.000  1.00  0.00          FE\n"
      "ATOM      3 1HB  ALA A   3       2.000   0.000   0.000\n");
  ASSERT_EQ(model.size(), 3u);
  EXPECT_EQ(model.atoms()[0].element, "C");
  EXPECT_EQ(model.atoms()[1].element, "Fe");
  EXPECT_TRUE(model.atoms()[1].hetero);
  EXPECT_EQ(model.atoms()[2].element, "H");
  EXPECT_DOUBLE_EQ(model.atoms()[2].occupancy, 1.0);
}

TEST(ParsePdb, AltLocsWatersAndHetatmFilters) {
  const std::string text =
      "ATOM      1  CA ASER A   1       0.000   0.000   0.000  0.50  0.00           C\n"
      "ATOM      2  CA BSER A   1       0.500   0.000   0.000  0.50  0.00           C\n"
      "HETATM    3  O   HOH A 101       5.000   5.000   5.000  1.00  0.00           O\n"
      "HETATM    4  C1  LIG A 201       3.000   3.000   3.000  1.00  0.00           C\n";
  const auto def = parse_pdb(text);
  ASSERT_EQ(def.size(), 2u);
  EXPECT_EQ(def.atoms()[0].alt_loc, 'A');
  EXPECT_EQ(def.atoms()[1].residue_name, "LIG");

  const auto waters = parse_pdb(text, "", {.include_hetatm = true, .include_waters = true});
  EXPECT_EQ(waters.size(), 3u);
  const auto no_het = parse_pdb(text, "", {.include_hetatm = false, .include_waters = true});
  EXPECT_EQ(no_het.size(), 1u);
}

TEST(ParsePdb, CrlfLineEndings) {
  const auto model = parse_pdb(
      "ATOM      1  N   MET A   1      10.000  20.000  30.000  1.00  0.00           N\r\n"
      "ATOM      2  CA  MET A   1      11.000  20.000  30.000  1.00  0.00           C\r\n");
  EXPECT_EQ(model.size(), 2u);
  EXPECT_EQ(model.atoms()[1].element, "C");
}

// Expected counts were taken with awk before the parser existed: ATOM/HETATM
// lines of MODEL 1 with altLoc blank or 'A' and residue other than HOH.
TEST(ParsePdb, FixtureCorpusCounts) {
  struct Case {
    const char* file;
    std::size_t atoms;
    std::size_t with_waters;
  };
  for (const auto& c : {Case{"1ubi.pdb", 602, 683}, Case{"1ejg.pdb", 637, 637}, Case{"2k39_truncated.pdb", 167, 167}}) {
    const auto text = read_file(data_dir() / c.file);
    EXPECT_EQ(parse_pdb(text, c.file).size(), c.atoms) << c.file;
    EXPECT_EQ(parse_pdb(text, c.file, {.include_hetatm = true, .include_waters = true}).size(), c.with_waters) << c.file;
  }
}

TEST(ParsePdb, OnlyFirstModel) {
  const auto text = read_file(data_dir() / "2k39_truncated.pdb");
  const auto model = parse_pdb(text);
  // Model 1 of this NMR file starts at serial 1 and ends before model 2.
  EXPECT_EQ(model.atoms().front().serial, 1);
  for (std::size_t n = 1; n < model.size(); ++n) EXPECT_GT(model.atoms()[n].serial, model.atoms()[n - 1].serial);
}

TEST(ParsePdb, BoundingBoxIsComponentwiseMinMax) {
  for (const char* f : {"1ubi.pdb", "1ejg.pdb", "2k39_truncated.pdb"}) {
    const auto model = parse_pdb(read_file(data_dir() / f), f);
    Vec3 lo = model.atoms()[0].position, hi = lo;
    for (const auto& a : model.atoms()) {
      for (int ax = 0; ax < 3; ++ax) {
        lo[ax] = std::min(lo[ax], a.position[ax]);
        hi[ax] = std::max(hi[ax], a.position[ax]);
      }
    }
    EXPECT_EQ(model.bbox().min, lo) << f;
    EXPECT_EQ(model.bbox().max, hi) << f;
  }
}

TEST(ParsePdb, CanonicalWriterRoundTrips) {
  for (const char* f : {"1ubi.pdb", "1ejg.pdb", "2k39_truncated.pdb"}) {
    const auto first = parse_pdb(read_file(data_dir() / f), f, {.include_hetatm = true, .include_waters = true});
    const auto second = parse_pdb(write_pdb(first), f, {.include_hetatm = true, .include_waters = true});
    EXPECT_EQ(first, second) << f;
  }
}

TEST(VdwRadius, BondiValuesAndDefault) {
  const auto table = RadiusTable::bondi();
  EXPECT_DOUBLE_EQ(vdw_radius("C", table), 1.70);
  EXPECT_DOUBLE_EQ(vdw_radius("O", table), 1.52);
  EXPECT_DOUBLE_EQ(vdw_radius("N", table), 1.55);
  EXPECT_DOUBLE_EQ(vdw_radius("H", table), 1.20);
  EXPECT_DOUBLE_EQ(vdw_radius("S", table), 1.80);
  EXPECT_DOUBLE_EQ(vdw_radius("P", table), 1.80);

  std::vector<std::string> warnings;
  diagnostics::ScopedSink sink([&](const std::string& m) { warnings.push_back(m); });
  EXPECT_DOUBLE_EQ(vdw_radius("Xx", table), 1.70);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("Xx"), std::string::npos);
}

TEST(VdwRadius, TableRadiiArePositive) {
  for (const auto& [el, r] : RadiusTable::bondi().radii) EXPECT_GT(r, 0.0) << el;
}

}  // namespace
}  // namespace vafm
