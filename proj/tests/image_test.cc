#include "shapepose/image.h"

#include <gtest/gtest.h>

#include "shapepose/error.h"
#include "test_util.h"

namespace shapepose {
namespace {

using testing::TempDir;

TEST(RasterTest, Basics) {
  BinaryMask m(4, 3);
  EXPECT_EQ(m.data().size(), 12u);
  EXPECT_TRUE(m.Contains(3, 2));
  EXPECT_FALSE(m.Contains(4, 0));
  EXPECT_FALSE(m.Contains(0, -1));
  m.at(1, 2) = 1;
  EXPECT_EQ(m.data()[2 * 4 + 1], 1);
  EXPECT_EQ(CountForeground(m), 1u);
  EXPECT_THROW(BinaryMask(0, 3), std::invalid_argument);
}

TEST(RasterTest, ValidateLabels) {
  LabelMap map(2, 2);
  map.at(0, 0) = 5;
  EXPECT_NO_THROW(ValidateLabels(map, 5));
  EXPECT_THROW(ValidateLabels(map, 4), std::invalid_argument);
}

TEST(PgmTest, LabelMapRoundTrip) {
  TempDir dir("pgm");
  LabelMap map(7, 5);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 7; ++x) map.at(x, y) = static_cast<std::uint8_t>((x * 31 + y * 7) % 256);
  WritePgm(dir / "m.pgm", map);
  EXPECT_EQ(ReadLabelMap(dir / "m.pgm"), map);
}

TEST(PgmTest, MaskIsWrittenAs255AndReadBackAsOne) {
  TempDir dir("pgm_mask");
  BinaryMask m(3, 2);
  m.at(2, 1) = 1;
  WritePgm(dir / "m.pgm", m);
  EXPECT_EQ(ReadLabelMap(dir / "m.pgm").at(2, 1), 255);
  EXPECT_EQ(ReadMask(dir / "m.pgm"), m);
}

TEST(PgmTest, ReadsAsciiWithComments) {
  TempDir dir("pgm_ascii");
  testing::WriteFile(dir / "a.pgm", "P2\n# comment\n3 2\n# another\n255\n0 1 2\n3 4 255\n");
  const LabelMap map = ReadLabelMap(dir / "a.pgm");
  ASSERT_EQ(map.width(), 3);
  ASSERT_EQ(map.height(), 2);
  EXPECT_EQ(map.at(2, 0), 2);
  EXPECT_EQ(map.at(2, 1), 255);
}

TEST(PgmTest, RejectsBadFiles) {
  TempDir dir("pgm_bad");
  EXPECT_THROW(ReadLabelMap(dir / "none.pgm"), FormatError);
  testing::WriteFile(dir / "a.pgm", "P6\n1 1\n255\nabc");
  EXPECT_THROW(ReadLabelMap(dir / "a.pgm"), FormatError);
  testing::WriteFile(dir / "b.pgm", "P5\n2 2\n65535\n");
  EXPECT_THROW(ReadLabelMap(dir / "b.pgm"), FormatError);
  testing::WriteFile(dir / "c.pgm", "P5\n4 4\n255\nab");
  EXPECT_THROW(ReadLabelMap(dir / "c.pgm"), FormatError);
}

}  // namespace
}  // namespace shapepose
