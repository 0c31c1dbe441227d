#include "shapepose/pipeline.h"

#include <gtest/gtest.h>

#include "fixtures.h"
#include "shapepose/cloud_io.h"
#include "shapepose/error.h"
#include "shapepose/evaluation.h"
#include "shapepose/manifest.h"
#include "shapepose/synth.h"
#include "test_util.h"

namespace shapepose {
namespace {

using testing::Box;

using testing::TempDir;

const ShapeLibrary& DenseBoxLibrary() {
  static const ShapeLibrary lib = BuildShapeLibrary(Box(), 1, LibraryOptions{});
  return lib;
}

ClassResources BoxResources(int class_id) {
  if (class_id != 1) throw UnknownClassError("class " + std::to_string(class_id));
  return ClassResources{&Box(), &DenseBoxLibrary(), 0.03};
}

TEST(EstimateFromLabelMapsTest, RecoversSyntheticScene) {
  const Calibration rig = DefaultRig();
  const Scene s = GenerateScene(Box(), 1, rig, 3);
  const PoseEstimate single = EstimateFromLabelMaps(s.camera1, nullptr, rig, BoxResources);
  EXPECT_EQ(single.class_id, 1);
  EXPECT_FALSE(single.used_second_view);
  EXPECT_EQ(single.hypotheses.size(), DenseBoxLibrary().size());
  const PoseEstimate two = EstimateFromLabelMaps(s.camera1, &s.camera2, rig, BoxResources);
  EXPECT_TRUE(two.used_second_view);
  ASSERT_TRUE(two.best.second_view_cost.has_value());
  EXPECT_LT(AddsError(two.best.pose, s.spec.pose, Box()), 0.15 * Box().diameter());
}

TEST(EstimateFromLabelMapsTest, Errors) {
  const Calibration rig = DefaultRig();
  const LabelMap empty(1024, 736);
  EXPECT_THROW(EstimateFromLabelMaps(empty, nullptr, rig, BoxResources), NoSegmentError);
  Scene s = GenerateScene(Box(), 1, rig, 4);
  for (auto& v : s.camera1.data()) v = v ? 9 : 0;
  EXPECT_THROW(EstimateFromLabelMaps(s.camera1, nullptr, rig, BoxResources), UnknownClassError);
}

TEST(EstimateFromLabelMapsTest, CameraTwoWithoutMatchingClassFallsBack) {
  const Calibration rig = DefaultRig();
  const Scene s = GenerateScene(Box(), 1, rig, 5);
  const LabelMap empty(1024, 736);
  const PoseEstimate e = EstimateFromLabelMaps(s.camera1, &empty, rig, BoxResources);
  EXPECT_FALSE(e.used_second_view);
  EXPECT_EQ(e.best.view_index, e.hypotheses[0].view_index);
}

TEST(EstimateFileTest, RoundTrip) {
  TempDir dir("est");
  const Calibration rig = DefaultRig();
  const Scene s = GenerateScene(Box(), 1, rig, 6);
  const PoseEstimate e = EstimateFromLabelMaps(s.camera1, &s.camera2, rig, BoxResources);
  WriteEstimate(dir / "e.txt", e);
  const StoredEstimate back = ReadEstimate(dir / "e.txt");
  EXPECT_EQ(back.class_id, 1);
  EXPECT_EQ(back.pose.Matrix(), e.best.pose.Matrix());
  const std::string text = testing::ReadFile(dir / "e.txt");
  for (const char* key : {"translation ", "angles ", "view_index ", "cost ", "second_view_cost "}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
  testing::WriteFile(dir / "bad.txt", "class 1\n");
  EXPECT_THROW(ReadEstimate(dir / "bad.txt"), FormatError);
}

TEST(CostDumpTest, OneRowPerViewInLibraryOrder) {
  const Calibration rig = DefaultRig();
  const Scene s = GenerateScene(Box(), 1, rig, 8);
  const PoseEstimate e = EstimateFromLabelMaps(s.camera1, nullptr, rig, BoxResources);
  const std::string dump = CostDump(e);
  EXPECT_EQ(dump.substr(0, dump.find('\n')), "view,theta1,theta2,theta3,z,cost");
  EXPECT_EQ(std::count(dump.begin(), dump.end(), '\n'), static_cast<long>(DenseBoxLibrary().size()) + 1);
  EXPECT_EQ(dump.substr(dump.find('\n') + 1, 2), "0,");
}

class ManifestTest : public ::testing::Test {
 protected:
  void SetUp() override {
    WriteCalibration(dir_ / "calibration.json", DefaultRig());
    WriteXyz(dir_ / "box.xyz", MakeBox(500));
  }
  TempDir dir_{"manifest"};
};

TEST_F(ManifestTest, RoundTripWithRelativePaths) {
  Manifest m;
  m.calibration = dir_ / "calibration.json";
  m.defaults.top_k = 7;
  m.classes[1] = ManifestClass{1, "box", dir_ / "box.xyz", dir_ / "libs" / "box.splb"};
  SaveManifest(dir_ / "manifest.json", m);
  const std::string text = testing::ReadFile(dir_ / "manifest.json");
  EXPECT_NE(text.find("\"libs/box.splb\""), std::string::npos);
  const Manifest back = LoadManifest(dir_ / "manifest.json");
  EXPECT_EQ(back.defaults.top_k, 7);
  EXPECT_EQ(back.at(1).name, "box");
  EXPECT_EQ(back.at(1).library, (dir_ / "libs" / "box.splb").lexically_normal());
  EXPECT_THROW(back.at(2), UnknownClassError);
  EXPECT_EQ(back.Names().at(1), "box");
}

TEST_F(ManifestTest, RejectsBrokenManifests) {
  const char* cal = R"("calibration": "calibration.json")";
  testing::WriteFile(dir_ / "dup.json", std::string("{\"version\": 1, ") + cal +
      R"(, "classes": [{"id": 1, "name": "a", "model": "box.xyz", "library": "a"},
                        {"id": 1, "name": "b", "model": "box.xyz", "library": "b"}]})");
  EXPECT_THROW(LoadManifest(dir_ / "dup.json"), FormatError);
  testing::WriteFile(dir_ / "nomodel.json", std::string("{\"version\": 1, ") + cal +
      R"(, "classes": [{"id": 1, "name": "a", "model": "none.xyz", "library": "a"}]})");
  EXPECT_THROW(LoadManifest(dir_ / "nomodel.json"), FormatError);
  testing::WriteFile(dir_ / "range.json", std::string("{\"version\": 1, ") + cal +
      R"(, "classes": [{"id": 300, "name": "a", "model": "box.xyz", "library": "a"}]})");
  EXPECT_THROW(LoadManifest(dir_ / "range.json"), FormatError);
  testing::WriteFile(dir_ / "nocal.json",
      R"({"version": 1, "calibration": "x.json", "classes": [{"id": 1, "name": "a", "model": "box.xyz", "library": "a"}]})");
  EXPECT_THROW(LoadManifest(dir_ / "nocal.json"), FormatError);
  EXPECT_THROW(LoadManifest(dir_ / "missing.json"), FormatError);
}

TEST_F(ManifestTest, MissingLibraryReportedOnUse) {
  Manifest m;
  m.calibration = dir_ / "calibration.json";
  m.classes[1] = ManifestClass{1, "box", dir_ / "box.xyz", dir_ / "nope.splb"};
  SaveManifest(dir_ / "manifest.json", m);
  ResourceCache cache(LoadManifest(dir_ / "manifest.json"));
  EXPECT_THROW(cache.Get(1), FormatError);
  EXPECT_THROW(cache.Get(2), UnknownClassError);
}

}  // namespace
}  // namespace shapepose
