#include "shapepose/models.h"

#include <gtest/gtest.h>

namespace shapepose {
namespace {

struct Extent {
  Point3 lo, hi, mean;
};

Extent Measure(const PointCloud& m) {
  Extent e{m[0], m[0], Point3::Zero()};
  for (const Point3& p : m.points()) {
    e.lo = e.lo.cwiseMin(p);
    e.hi = e.hi.cwiseMax(p);
    e.mean += p;
  }
  e.mean /= static_cast<double>(m.size());
  return e;
}

TEST(ModelsTest, ClassTable) {
  const std::vector<ProceduralClass>& c = ProceduralClasses();
  ASSERT_EQ(c.size(), 5u);
  const char* names[] = {"box", "bottle", "cup", "plate", "spoon"};
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(c[i].class_id, i + 1);
    EXPECT_EQ(c[i].name, names[i]);
  }
  EXPECT_THROW(MakeProceduralModel("teapot"), std::invalid_argument);
}

TEST(ModelsTest, SizesAndCentring) {
  for (const ProceduralClass& c : ProceduralClasses()) {
    const PointCloud m = MakeProceduralModel(c.name);
    EXPECT_GE(m.size(), 5000u) << c.name;
    EXPECT_LE(m.size(), 20000u) << c.name;
    EXPECT_LT(Measure(m).mean.norm(), 1e-9) << c.name;
    EXPECT_GT(m.diameter(), 1.2) << c.name;
    EXPECT_LT(m.diameter(), 2.2) << c.name;
  }
}

TEST(ModelsTest, Deterministic) {
  EXPECT_EQ(MakeSpoon(500).points(), MakeSpoon(500).points());
  EXPECT_EQ(MakeCup(500).points(), MakeCup(500).points());
}

TEST(ModelsTest, ShapeCharacter) {
  const Extent box = Measure(MakeBox());
  EXPECT_NEAR(box.hi.x() - box.lo.x(), 1.6, 1e-3);
  EXPECT_NEAR(box.hi.y() - box.lo.y(), 1.0, 1e-3);
  EXPECT_NEAR(box.hi.z() - box.lo.z(), 0.6, 1e-3);
  // Cup handle sticks out along +x.
  const Extent cup = Measure(MakeCup());
  EXPECT_GT(cup.hi.x(), -cup.lo.x() + 0.15);
  EXPECT_NEAR(cup.hi.y(), -cup.lo.y(), 0.02);
  // Plate is flat; spoon is long and thin.
  const Extent plate = Measure(MakePlate());
  EXPECT_LT(plate.hi.z() - plate.lo.z(), 0.1 * (plate.hi.x() - plate.lo.x()));
  const Extent spoon = Measure(MakeSpoon());
  EXPECT_GT(spoon.hi.x() - spoon.lo.x(), 4.0 * (spoon.hi.y() - spoon.lo.y()));
  // Bottle is symmetric about its axis.
  const Extent bottle = Measure(MakeBottle());
  EXPECT_NEAR(bottle.hi.x() - bottle.lo.x(), bottle.hi.y() - bottle.lo.y(), 0.02);
}

}  // namespace
}  // namespace shapepose
