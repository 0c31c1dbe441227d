#include "shapepose/pose_matching.h"

#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "shapepose/error.h"
#include "shapepose/reference.h"
#include "shapepose/render.h"
#include "shapepose/synth.h"
#include "test_util.h"

namespace shapepose {
namespace {

using testing::AngleDiff;
using testing::Box;
using testing::BoxLibrary;

PolarSignature RandomSignature(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a = 0.5 + u(rng), b = 0.5 + u(rng), c = u(rng), p = 6 * u(rng);
  PolarSignature s;
  for (int i = 0; i < n; ++i) {
    const double t = 2 * M_PI * i / n;
    s.samples.push_back(10 + 3 * a * std::sin(t + p) + 2 * b * std::cos(2 * t) +
                        c * std::sin(3 * t + 2 * p) + 0.2 * u(rng));
  }
  return s;
}

// sample[i] = model[i - k].
PolarSignature Shift(const PolarSignature& model, int k) {
  const int n = model.size();
  PolarSignature s;
  s.samples.resize(n);
  for (int i = 0; i < n; ++i) s.samples[i] = model.samples[((i - k) % n + n) % n];
  return s;
}

double Pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / a.size();
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / b.size();
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

Segment SegmentFor(const BinaryMask& mask, const CameraIntrinsics& in, int n = 360) {
  return AnalyzeMask(mask, in.principal_point, n);
}

TEST(EstimateDepthTest, AreaLaw) {
  EXPECT_DOUBLE_EQ(EstimateDepth(100.0, 400.0, 8.0), 16.0);
  EXPECT_DOUBLE_EQ(EstimateDepth(400.0, 100.0, 8.0), 4.0);
  EXPECT_DOUBLE_EQ(EstimateDepth(1234.0, 1234.0, 3.5), 3.5);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(10.0, 1e5);
  for (int i = 0; i < 100; ++i) {
    const double ns = u(rng), nm = u(rng), zm = u(rng) / 1000;
    EXPECT_NEAR(EstimateDepth(ns, nm, zm), zm * std::sqrt(nm / ns), 1e-12 * zm * std::sqrt(nm / ns));
  }
}

TEST(EstimateDepthTest, StrictlyDecreasingInSegmentArea) {
  double prev = INFINITY;
  for (double ns = 1.0; ns < 1e6; ns *= 1.7) {
    const double z = EstimateDepth(ns, 5000.0, 8.0);
    EXPECT_LT(z, prev);
    prev = z;
  }
}

TEST(EstimateDepthTest, RejectsBadInput) {
  EXPECT_THROW(EstimateDepth(0.0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(EstimateDepth(1.0, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(EstimateDepth(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST(BackprojectCenterTest, ReprojectsToImagePoint) {
  const Point3 p = BackprojectCenter(Vec2(120.0, -40.0), 6.0, 800.0);
  EXPECT_DOUBLE_EQ(p.z(), 6.0);
  EXPECT_DOUBLE_EQ(800.0 * p.x() / p.z(), 120.0);
  EXPECT_DOUBLE_EQ(800.0 * p.y() / p.z(), -40.0);
  EXPECT_EQ(BackprojectCenter(Vec2(0, 0), 3.0, 500.0), Point3(0, 0, 3.0));
}

TEST(MatchInplaneTest, IdenticalSignaturesGiveZeroAndOne) {
  std::mt19937_64 rng(2);
  const PolarSignature s = RandomSignature(rng, 360);
  const InplaneMatch m = MatchInplane(s, s);
  EXPECT_EQ(m.theta3, 0.0);
  EXPECT_NEAR(m.correlation, 1.0, 1e-12);
}

TEST(MatchInplaneTest, RecoversKnownShift) {
  std::mt19937_64 rng(3);
  for (int k : {1, 5, 90, 181, 359}) {
    const PolarSignature model = RandomSignature(rng, 360);
    const InplaneMatch m = MatchInplane(Shift(model, k), model);
    EXPECT_DOUBLE_EQ(m.theta3, k);
    EXPECT_NEAR(m.correlation, 1.0, 1e-12);
  }
}

TEST(MatchInplaneTest, ShiftEquivariance) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> uk(0, 71);
  for (int trial = 0; trial < 50; ++trial) {
    const PolarSignature a = RandomSignature(rng, 72), b = RandomSignature(rng, 72);
    const int k = uk(rng);
    const InplaneMatch base = MatchInplane(a, b);
    const InplaneMatch shifted = MatchInplane(Shift(a, k), b);
    EXPECT_LT(AngleDiff(shifted.theta3, base.theta3 + k * 5.0), 1e-9);
    EXPECT_NEAR(shifted.correlation, base.correlation, 1e-12);
  }
}

TEST(MatchInplaneTest, CorrelationIsPearsonAtBestShift) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const PolarSignature a = RandomSignature(rng, 90), b = RandomSignature(rng, 90);
    const InplaneMatch m = MatchInplane(a, b);
    const int k = static_cast<int>(std::lround(m.theta3 / 4.0));
    EXPECT_NEAR(m.correlation, Pearson(a.samples, Shift(b, k).samples), 1e-12);
    for (int j = 0; j < 90; ++j) {
      EXPECT_LE(Pearson(a.samples, Shift(b, j).samples), m.correlation + 1e-12);
    }
    EXPECT_NEAR(CorrelationAtShift(a, b, k), m.correlation, 1e-12);
  }
}

TEST(MatchInplaneTest, MatchesReference) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const PolarSignature a = RandomSignature(rng, 360), b = RandomSignature(rng, 360);
    const InplaneMatch fast = MatchInplane(a, b), slow = reference::MatchInplane(a, b);
    EXPECT_EQ(fast.theta3, slow.theta3);
    EXPECT_NEAR(fast.correlation, slow.correlation, 1e-12);
  }
}

TEST(MatchInplaneTest, ConstantAndMismatchedSignatures) {
  std::mt19937_64 rng(7);
  const PolarSignature s = RandomSignature(rng, 36);
  PolarSignature flat;
  flat.samples.assign(36, 5.0);
  EXPECT_TRUE(IsConstantSignature(flat));
  EXPECT_FALSE(IsConstantSignature(s));
  EXPECT_THROW(MatchInplane(flat, s), ConstantSignatureError);
  EXPECT_THROW(MatchInplane(s, flat), ConstantSignatureError);
  EXPECT_THROW(MatchInplane(s, RandomSignature(rng, 72)), std::invalid_argument);
  // Relative std just under and over the tolerance.
  PolarSignature wobble;
  for (int i = 0; i < 36; ++i) wobble.samples.push_back(i % 2 ? 10.0 * 1.0199 : 10.0 * 0.9801);
  EXPECT_TRUE(IsConstantSignature(wobble));
  for (int i = 0; i < 36; ++i) wobble.samples[i] = i % 2 ? 10.0 * 1.0201 : 10.0 * 0.9799;
  EXPECT_FALSE(IsConstantSignature(wobble));
}

TEST(MatchInplaneTest, RenderedInplaneRotation) {
  const ShapeLibrary& lib = BoxLibrary();
  const ShapeLibraryEntry& e = lib.entries[17];
  for (double a : {10.0, 77.0, 200.0}) {
    const RigidTransform pose(InplaneRotation(a) * SphereViewRotation(e.view.theta1, e.view.theta2),
                              Point3(0, 0, 8.0));
    const Segment s = SegmentFor(RenderObject(Box(), pose, lib.intrinsics, 0.03), lib.intrinsics);
    // The box has a 180° silhouette symmetry.
    const double got = MatchInplane(s.signature, e.signature).theta3;
    EXPECT_LE(std::min(AngleDiff(got, a), AngleDiff(got, a + 180.0)), 2.0) << a;
  }
}

TEST(EstimatePoseSingleTest, LibraryRoundTrip) {
  const ShapeLibrary& lib = BoxLibrary();
  for (std::size_t k = 0; k < lib.size(); k += 5) {
    const BinaryMask m =
        RenderObject(Box(), LibraryViewPose(lib.entries[k].view), lib.intrinsics, 0.03);
    const std::vector<PoseHypothesis> h =
        EstimatePoseSingle(SegmentFor(m, lib.intrinsics), lib, lib.intrinsics);
    ASSERT_EQ(h.size(), lib.size());
    EXPECT_EQ(h[0].view_index, k);
    EXPECT_NEAR(h[0].translation.z(), 8.0, 0.02 * 8.0);
    EXPECT_LE(AngleDiff(h[0].theta3, 0.0), 1.0);
    EXPECT_NEAR(h[0].cost, 0.0, 1e-12);
  }
}

TEST(EstimatePoseSingleTest, DoubleDistance) {
  const ShapeLibrary& lib = BoxLibrary();
  for (std::size_t k : {3u, 22u, 41u}) {
    const ViewSample& v = lib.entries[k].view;
    const RigidTransform pose(SphereViewRotation(v.theta1, v.theta2), Point3(0, 0, 16.0));
    const Segment s = SegmentFor(RenderObject(Box(), pose, lib.intrinsics, 0.03), lib.intrinsics);
    const std::vector<PoseHypothesis> h = EstimatePoseSingle(s, lib, lib.intrinsics);
    EXPECT_EQ(h[0].view_index, k);
    EXPECT_NEAR(h[0].translation.z(), 16.0, 0.03 * 16.0);
  }
}

TEST(EstimatePoseSingleTest, ScaleChangesOnlyDepth) {
  // Uniformly scaling the segment (here through the focal length) keeps the
  // winning view and scales z by 1/s.
  const ShapeLibrary& lib = BoxLibrary();
  const ViewSample& v = lib.entries[30].view;
  const RigidTransform pose(SphereViewRotation(v.theta1, v.theta2), Point3(0, 0, 8.0));
  CameraIntrinsics big = lib.intrinsics;
  big.focal_length *= 1.5;
  big.width = big.height = 768;
  big.principal_point = Vec2(384, 384);
  const Segment s1 = SegmentFor(RenderObject(Box(), pose, lib.intrinsics, 0.03), lib.intrinsics);
  const Segment s2 = SegmentFor(RenderObject(Box(), pose, big, 0.03), big);
  const PoseHypothesis h1 = EstimatePoseSingle(s1, lib, lib.intrinsics)[0];
  // Evaluated against the library camera, the bigger segment reads as closer.
  const PoseHypothesis h2 = EstimatePoseSingle(s2, lib, lib.intrinsics)[0];
  EXPECT_EQ(h1.view_index, h2.view_index);
  EXPECT_NEAR(h2.translation.z(), h1.translation.z() / 1.5, 0.03 * h1.translation.z() / 1.5);
}

TEST(EstimatePoseSingleTest, HypothesisFieldsAreConsistent) {
  const ShapeLibrary& lib = BoxLibrary();
  const Calibration rig = DefaultRig();
  const Scene scene = GenerateScene(Box(), 1, rig, 99);
  const CameraIntrinsics& in = rig.at("camera1").intrinsics;
  std::vector<Segment> segs = ConnectedComponents(scene.camera1, 1);
  ASSERT_EQ(segs.size(), 1u);
  AnalyzeSegment(segs[0], in.principal_point, 360);
  const std::vector<PoseHypothesis> h = EstimatePoseSingle(segs[0], lib, in);
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i > 0) {
      EXPECT_LE(h[i - 1].cost, h[i].cost);
    }
    const PoseHypothesis& p = h[i];
    EXPECT_GE(p.cost, 0.0);
    EXPECT_LE(p.cost, 2.0);
    EXPECT_TRUE(p.correction.matrix().isApprox(CorrectionRotation(p.translation).matrix(), 0.0));
    const RigidTransform expected = ComposePose(p.translation, p.correction, InplaneRotation(p.theta3),
                                                SphereViewRotation(p.view.theta1, p.view.theta2));
    EXPECT_TRUE(p.pose.Matrix().isApprox(expected.Matrix(), 0.0));
  }
}

TEST(EstimatePoseSingleTest, RenderedHypothesesMatchSegmentArea) {
  const ShapeLibrary& lib = BoxLibrary();
  const Calibration rig = DefaultRig();
  const CameraIntrinsics& in = rig.at("camera1").intrinsics;
  for (std::uint64_t seed : {5u, 6u}) {
    const Scene scene = GenerateScene(Box(), 1, rig, seed);
    std::vector<Segment> segs = ConnectedComponents(scene.camera1, 1);
    AnalyzeSegment(segs[0], in.principal_point, 360);
    const double ns = static_cast<double>(segs[0].area());
    for (const PoseHypothesis& p : EstimatePoseSingle(segs[0], lib, in)) {
      const double area = CountForeground(RenderObject(Box(), p.pose, in, 0.03));
      EXPECT_NEAR(area, ns, 0.15 * ns) << "view " << p.view_index;
    }
  }
}

TEST(EstimatePoseSingleTest, SingleViewLibraryGivesOneHypothesis) {
  LibraryOptions opt;
  opt.n_views = 1;
  const ShapeLibrary lib = BuildShapeLibrary(Box(), 1, opt);
  const BinaryMask m = RenderObject(Box(), RigidTransform(SphereViewRotation(50, 20), Point3(0, 0, 8)),
                                    lib.intrinsics, 0.03);
  EXPECT_EQ(EstimatePoseSingle(SegmentFor(m, lib.intrinsics), lib, lib.intrinsics).size(), 1u);
}

TEST(EstimatePoseSingleTest, EqualCostsKeepLibraryOrder) {
  ShapeLibrary lib = BoxLibrary();
  lib.entries.resize(4);
  lib.entries[1] = lib.entries[3];
  lib.entries[2] = lib.entries[3];
  const BinaryMask m = RenderObject(Box(), LibraryViewPose(lib.entries[3].view), lib.intrinsics, 0.03);
  const std::vector<PoseHypothesis> h =
      EstimatePoseSingle(SegmentFor(m, lib.intrinsics), lib, lib.intrinsics);
  EXPECT_EQ(h[0].view_index, 1u);
  EXPECT_EQ(h[1].view_index, 2u);
  EXPECT_EQ(h[2].view_index, 3u);
  EXPECT_EQ(h[0].cost, h[2].cost);
}

TEST(EstimatePoseSingleTest, ConstantSignatureConvention) {
  ShapeLibrary lib = BoxLibrary();
  lib.entries.resize(2);
  lib.entries[1].signature.samples.assign(360, 40.0);
  BinaryMask m(lib.intrinsics.width, lib.intrinsics.height);
  for (int y = -20; y <= 20; ++y)
    for (int x = -20; x <= 20; ++x)
      if (x * x + y * y <= 400) m.at(256 + x, 256 + y) = 1;
  Segment disk = ConnectedComponents(m, 1)[0];
  AnalyzeSegment(disk, lib.intrinsics.principal_point, 360);
  ASSERT_TRUE(IsConstantSignature(disk.signature));
  const std::vector<PoseHypothesis> h = EstimatePoseSingle(disk, lib, lib.intrinsics);
  EXPECT_EQ(h[0].view_index, 1u);
  EXPECT_EQ(h[0].cost, 0.0);
  EXPECT_EQ(h[0].theta3, 0.0);
  EXPECT_EQ(h[1].cost, 1.0);
}

TEST(EstimatePoseSingleTest, RejectsMismatchedInput) {
  const ShapeLibrary& lib = BoxLibrary();
  const BinaryMask m = RenderObject(Box(), LibraryViewPose(lib.entries[0].view), lib.intrinsics, 0.03);
  EXPECT_THROW(EstimatePoseSingle(SegmentFor(m, lib.intrinsics, 180), lib, lib.intrinsics),
               std::invalid_argument);
  EXPECT_THROW(EstimatePoseSingle(SegmentFor(m, lib.intrinsics), ShapeLibrary{}, lib.intrinsics),
               std::invalid_argument);
}

}  // namespace
}  // namespace shapepose
